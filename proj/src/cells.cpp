#include "dbc/cells.hpp"

#include <algorithm>

namespace dbc {

namespace {

constexpr double kCellTol = 1e-9;

Mat nilpotent_exp(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  Mat out = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * x / static_cast<double>(k);
    out += term;
  }
  return out;
}

Mat unipotent_log(const Mat& u) {
  const int n = static_cast<int>(u.rows());
  const Mat x = u - Mat::Identity(n, n);
  Mat out = Mat::Zero(n, n);
  Mat power = Mat::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    power = power * x;
    out += ((k % 2 == 1) ? 1.0 : -1.0) * power / static_cast<double>(k);
  }
  return out;
}

std::vector<Mat> split_blocks(const Vec& x, int n, int count) {
  std::vector<Mat> out;
  for (int q = 0; q < count; ++q) out.push_back(unvec(x.segment(q * n * n, n * n), n));
  return out;
}

}  // namespace

CellChart::CellChart(int n, WeylWord word, std::optional<Mat> representative)
    : n_(n), word_(std::move(word)) {
  validate_word(word_, n_);
  w_ = representative ? *representative : weyl_representative(word_, n_);
  w_inv_ = w_.inverse();
  std::vector<int> sigma(n_);
  for (int k = 0; k < n_; ++k) {
    Eigen::Index arg = 0;
    w_.col(k).cwiseAbs().maxCoeff(&arg);
    sigma[k] = static_cast<int>(arg);
  }
  std::vector<int> sigma_inv(n_);
  for (int k = 0; k < n_; ++k) sigma_inv[sigma[k]] = k;
  for (auto [i, j] : positive_roots(n_)) {
    if (sigma_inv[i] > sigma_inv[j]) inversion_roots_.emplace_back(i, j);
  }
}

Mat CellChart::param(const Vec& t) const {
  Mat x = Mat::Zero(n_, n_);
  for (int k = 0; k < dim(); ++k) x(inversion_roots_[k].first, inversion_roots_[k].second) = t(k);
  return nilpotent_exp(x) * w_;
}

Vec CellChart::coords(const Mat& c) const {
  const Mat l = unipotent_log(c * w_inv_);
  Vec t(dim());
  for (int k = 0; k < dim(); ++k) t(k) = l(inversion_roots_[k].first, inversion_roots_[k].second);
  return t;
}

double CellChart::membership_residual(const Mat& c) const {
  const Mat upper = c * w_inv_;
  const Mat lower = w_inv_ * c;
  double r = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i == j) {
        r = std::max({r, std::abs(upper(i, j) - 1.0), std::abs(lower(i, j) - 1.0)});
      } else if (i > j) {
        r = std::max(r, std::abs(upper(i, j)));
      } else {
        r = std::max(r, std::abs(lower(i, j)));
      }
    }
  }
  return r;
}

std::pair<Mat, Mat> CellChart::factor_BuB(const Mat& g, bool check) const {
  GaussFactors f;
  try {
    f = gauss_decompose(w_inv_ * g);
  } catch (const NotInOpenCell& e) {
    throw NotInCell(e.what());
  }
  Mat c = w_ * f.m;
  const Mat u = c * w_inv_;
  const double leak = max_abs(Mat(u.triangularView<Eigen::StrictlyLower>()));
  if (check && leak > kCellTol * (1.0 + max_abs(u))) throw NotInCell("factor is not in N w");
  return {c, f.h * f.n};
}

std::pair<Mat, Mat> CellChart::factor_BminusUBminus(const Mat& g, bool check) const {
  GaussFactors f;
  try {
    f = gauss_decompose(g * w_inv_);
  } catch (const NotInOpenCell& e) {
    throw NotInCell(e.what());
  }
  Mat c = f.n * w_;
  const Mat l = w_inv_ * c;
  const double leak = max_abs(Mat(l.triangularView<Eigen::StrictlyUpper>()));
  if (check && leak > kCellTol * (1.0 + max_abs(l))) throw NotInCell("factor is not in w N_-");
  return {f.m * f.h, c};
}

TupleChart::TupleChart(int n, const std::vector<WeylWord>& words,
                       const std::vector<std::optional<Mat>>& representatives)
    : n_(n), dim_(0) {
  for (size_t k = 0; k < words.size(); ++k) {
    std::optional<Mat> rep = k < representatives.size() ? representatives[k] : std::nullopt;
    charts_.emplace_back(n, words[k], rep);
    dim_ += charts_.back().dim();
  }
}

std::vector<WeylWord> TupleChart::words() const {
  std::vector<WeylWord> out;
  for (const auto& c : charts_) out.push_back(c.word());
  return out;
}

CellTuple TupleChart::param(const Vec& t) const {
  CellTuple out;
  int off = 0;
  for (const auto& ch : charts_) {
    out.push_back(ch.param(t.segment(off, ch.dim())));
    off += ch.dim();
  }
  return out;
}

Vec TupleChart::coords(const CellTuple& c) const {
  std::vector<Vec> parts;
  for (size_t k = 0; k < charts_.size(); ++k) parts.push_back(charts_[k].coords(c[k]));
  return concat(parts);
}

Mat TupleChart::product(const CellTuple& c) const { return dbc::product(c, n_); }

double TupleChart::membership_residual(const CellTuple& c) const {
  double r = 0.0;
  for (size_t k = 0; k < charts_.size(); ++k) r = std::max(r, charts_[k].membership_residual(c[k]));
  return r;
}

BorelActionResult TupleChart::act_b(const Mat& b, const CellTuple& c, bool check) const {
  BorelActionResult out;
  Mat cur = b;
  for (size_t k = 0; k < charts_.size(); ++k) {
    auto [cell, rest] = charts_[k].factor_BuB(cur * c[k], check);
    out.cells.push_back(cell);
    cur = rest;
  }
  out.cocycle = cur;
  return out;
}

BorelActionResult TupleChart::act_bminus(const CellTuple& c, const Mat& bm, bool check) const {
  BorelActionResult out;
  out.cells.resize(charts_.size());
  Mat cur = bm;
  for (int k = static_cast<int>(charts_.size()) - 1; k >= 0; --k) {
    auto [rest, cell] = charts_[k].factor_BminusUBminus(c[k] * cur, check);
    out.cells[k] = cell;
    cur = rest;
  }
  out.cocycle = cur;
  return out;
}

Vec TupleChart::rho(const CellTuple& c, const Mat& xi) const {
  auto f = [&](const Vec& s) { return coords(act_bminus(c, expm(s(0) * xi)).cells); };
  return numeric_jacobian(f, Vec::Zero(1)).col(0);
}

Vec TupleChart::lambda(const CellTuple& c, const Mat& x) const {
  auto f = [&](const Vec& s) { return coords(act_b(expm(s(0) * x), c).cells); };
  return numeric_jacobian(f, Vec::Zero(1)).col(0);
}

Mat TupleChart::cocycle_b_derivative(const CellTuple& c, const Mat& x) const {
  return curve_derivative([&](double s) { return act_b(expm(s * x), c).cocycle; });
}

Mat TupleChart::cocycle_bm_derivative(const CellTuple& c, const Mat& xi) const {
  return curve_derivative([&](double s) { return act_bminus(c, expm(s * xi)).cocycle; });
}

Bivector TupleChart::pi_n_at(const CellTuple& c) const {
  const int k = length();
  if (dim_ == 0) return Bivector("cells", Mat::Zero(0, 0));
  std::vector<Vec> parts;
  std::vector<Mat> blocks;
  for (const auto& m : c) {
    parts.push_back(vec(m));
    blocks.push_back(pi_st_at(m));
  }
  auto sweep = [&](const Vec& x) { return coords(act_b(identity(n_), split_blocks(x, n_, k), false).cells); };
  return Bivector("cells", pushforward(sweep, concat(parts), block_diag(blocks)));
}

Bivector TupleChart::pi_n_prime_at(const CellTuple& c) const {
  const int k = length();
  if (dim_ == 0) return Bivector("cells", Mat::Zero(0, 0));
  std::vector<Vec> parts;
  std::vector<Mat> blocks;
  for (const auto& m : c) {
    parts.push_back(vec(m));
    blocks.push_back(pi_st_at(m));
  }
  auto sweep = [&](const Vec& x) { return coords(act_bminus(split_blocks(x, n_, k), identity(n_), false).cells); };
  return Bivector("cells", pushforward(sweep, concat(parts), block_diag(blocks)));
}

double j_plus_residual(const TupleChart& chart, const CellTuple& c, const Mat& b) {
  const int n = chart.n();
  const int k = chart.length();
  CellTuple lift = c;
  lift.back() = lift.back() * b;
  std::vector<Vec> parts;
  std::vector<Mat> blocks;
  for (const auto& m : lift) {
    parts.push_back(vec(m));
    blocks.push_back(pi_st_at(m));
  }
  auto inverse_j = [&](const Vec& x) {
    BorelActionResult r = chart.act_b(identity(n), split_blocks(x, n, k), false);
    return concat({chart.coords(r.cells), borel_coords(r.cocycle, false)});
  };
  const Mat lhs = pushforward(inverse_j, concat(parts), block_diag(blocks));
  const DualBorelBases db = dual_borel_bases(n);
  std::vector<Vec> rho;
  std::vector<Vec> lam;
  for (size_t i = 0; i < db.x.size(); ++i) {
    rho.push_back(kMixedScale * chart.rho(c, db.xi[i]));
    lam.push_back(borel_coords(db.x[i] * b, false));
  }
  const Mat rhs = mixed_product(chart.pi_n_at(c).coeffs, pi_st_borel(b, false), rho, lam);
  return max_abs(Mat(lhs - rhs)) / (1.0 + max_abs(rhs));
}

double j_minus_residual(const TupleChart& chart, const CellTuple& c, const Mat& bm) {
  const int n = chart.n();
  const int k = chart.length();
  CellTuple lift = c;
  lift.front() = bm * lift.front();
  std::vector<Vec> parts;
  std::vector<Mat> blocks;
  for (const auto& m : lift) {
    parts.push_back(vec(m));
    blocks.push_back(pi_st_at(m));
  }
  auto inverse_j = [&](const Vec& x) {
    BorelActionResult r = chart.act_bminus(split_blocks(x, n, k), identity(n), false);
    return concat({borel_coords(r.cocycle, true), chart.coords(r.cells)});
  };
  const Mat lhs = pushforward(inverse_j, concat(parts), block_diag(blocks));
  const DualBorelBases db = dual_borel_bases(n);
  std::vector<Vec> rho;
  std::vector<Vec> lam;
  for (size_t i = 0; i < db.x.size(); ++i) {
    rho.push_back(-kMixedScale * borel_coords(bm * db.xi[i], true));
    lam.push_back(chart.lambda(c, db.x[i]));
  }
  const Mat rhs = mixed_product(pi_st_borel(bm, true), Mat(-chart.pi_n_at(c).coeffs), rho, lam);
  return max_abs(Mat(lhs - rhs)) / (1.0 + max_abs(rhs));
}

}  // namespace dbc
