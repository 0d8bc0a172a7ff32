#include "dbc/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace dbc {

GaussFactors gauss_decompose(const Mat& g, double rel_tol) {
  const int n = static_cast<int>(g.rows());
  const double scale = g.norm();
  Mat u = g;
  Mat l = Mat::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(u(k, k)) <= rel_tol * scale) {
      throw NotInOpenCell("leading principal minor " + std::to_string(k + 1) + " vanishes");
    }
    for (int i = k + 1; i < n; ++i) {
      l(i, k) = u(i, k) / u(k, k);
      u.row(i) -= l(i, k) * u.row(k);
      u(i, k) = 0.0;
    }
  }
  GaussFactors f;
  f.m = l;
  f.h = diag_part(u);
  f.n = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) f.n(i, j) = u(i, j) / u(i, i);
  }
  return f;
}

GaussFactors gauss_decompose_ul(const Mat& g, double rel_tol) {
  const int n = static_cast<int>(g.rows());
  Mat j = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, n - 1 - i) = 1.0;
  GaussFactors f = gauss_decompose(j * g * j, rel_tol);
  GaussFactors out;
  out.n = j * f.m * j;
  out.h = j * f.h * j;
  out.m = j * f.n * j;
  return out;
}

Mat torus_sqrt(const Mat& t, const std::optional<Mat>& hint) {
  const int n = static_cast<int>(t.rows());
  Vec r(n);
  for (int i = 0; i < n; ++i) r(i) = std::sqrt(t(i, i));
  Vec ref = hint ? Vec(hint->diagonal()) : r;
  Vec best(n);
  std::vector<double> flip_cost(n);
  for (int i = 0; i < n; ++i) {
    const double keep = std::norm(r(i) - ref(i));
    const double flip = std::norm(-r(i) - ref(i));
    best(i) = keep <= flip ? r(i) : -r(i);
    flip_cost[i] = std::abs(keep - flip);
  }
  cplx prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= best(i);
  if (std::real(prod) < 0.0) {
    int worst = 0;
    double cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (flip_cost[i] < cost) {
        cost = flip_cost[i];
        worst = i;
      }
    }
    best(worst) = -best(worst);
  }
  return best.asDiagonal();
}

Mat numeric_jacobian(const ChartMap& f, const Vec& x, double step) {
  const int m = static_cast<int>(x.size());
  Mat jac;
  try {
    for (int k = 0; k < m; ++k) {
      Vec xp = x;
      Vec xm = x;
      xp(k) += step;
      xm(k) -= step;
      Vec col = (f(xp) - f(xm)) / (2.0 * step);
      if (k == 0) jac.resize(col.size(), m);
      jac.col(k) = col;
    }
    if (m == 0) jac.resize(f(x).size(), 0);
  } catch (const DomainEscape&) {
    throw;
  } catch (const Error& e) {
    throw DomainEscape(std::string("probe left the domain: ") + e.what());
  }
  return jac;
}

Mat curve_derivative(const std::function<Mat(double)>& f, double step) {
  return (f(step) - f(-step)) / (2.0 * step);
}

Vec vec(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  const int k = static_cast<int>(m.cols());
  Vec v(n * k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) v(i * k + j) = m(i, j);
  }
  return v;
}

Mat unvec(const Vec& v, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  }
  return m;
}

Mat wedge(const Vec& a, const Vec& b) {
  return a * b.transpose() - b * a.transpose();
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.rows();
  Mat out = Mat::Zero(total, total);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

Vec concat(const std::vector<Vec>& parts) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.size();
  Vec out(total);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.segment(off, p.size()) = p;
    off += p.size();
  }
  return out;
}

Mat diag_part(const Mat& m) { return Mat(m.diagonal().asDiagonal()); }

Mat identity(int n) { return Mat::Identity(n, n); }

Mat elementary(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Mat expm(const Mat& x) { return x.exp(); }

Mat product(const std::vector<Mat>& factors, int n) {
  Mat p = Mat::Identity(n, n);
  for (const auto& f : factors) p = p * f;
  return p;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Vec select(const Vec& v, const std::vector<int>& idx) {
  Vec out(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) out(k) = v(idx[k]);
  return out;
}

Mat select(const Mat& m, const std::vector<int>& idx) {
  Mat out(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a) {
    for (size_t b = 0; b < idx.size(); ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

Rng keyed_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Vec random_cvec(Rng& rng, int size, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(size);
  for (int k = 0; k < size; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = scale * cplx(re, im);
  }
  return v;
}

Mat random_borel(Rng& rng, int n, bool lower, double scale) {
  Mat m = Mat::Zero(n, n);
  const Vec d = random_cvec(rng, n - 1, scale);
  const Vec off = random_cvec(rng, n * (n - 1) / 2, scale);
  cplx prod = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i) = std::exp(d(i));
    prod *= m(i, i);
  }
  m(n - 1, n - 1) = 1.0 / prod;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (lower) {
        m(j, i) = off(k++);
      } else {
        m(i, j) = off(k++);
      }
    }
  }
  return m;
}

Mat antisymmetrize(const Mat& p) { return (p - p.transpose()) / 2.0; }

}  // namespace dbc
