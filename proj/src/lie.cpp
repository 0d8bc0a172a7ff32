#include "dbc/lie.hpp"

#include <cmath>
#include <string>

namespace dbc {

std::vector<Root> positive_roots(int n) {
  std::vector<Root> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

LieBasis lie_basis(int n) {
  LieBasis b;
  b.n = n;
  b.roots = positive_roots(n);
  for (auto [i, j] : b.roots) {
    b.e_pos.push_back(elementary(n, i, j));
    b.e_neg.push_back(elementary(n, j, i));
  }
  for (int i = 0; i + 1 < n; ++i) {
    Mat w = elementary(n, i, i) - elementary(n, i + 1, i + 1);
    for (const auto& h : b.cartan) w -= 2.0 * (w * h).trace() * h;
    w /= std::sqrt(2.0 * (w * w).trace());
    b.cartan.push_back(w);
  }
  return b;
}

DualBorelBases dual_borel_bases(int n) {
  LieBasis lb = lie_basis(n);
  DualBorelBases d;
  for (size_t k = 0; k < lb.roots.size(); ++k) {
    d.x.push_back(-lb.e_pos[k]);
    d.xi.push_back(lb.e_neg[k]);
  }
  for (const auto& h : lb.cartan) {
    d.x.push_back(-h);
    d.xi.push_back(h);
  }
  return d;
}

cplx pairing_b_bminus(const Mat& x, const Mat& y) {
  Mat xp = x.triangularView<Eigen::StrictlyUpper>();
  Mat ym = y.triangularView<Eigen::StrictlyLower>();
  return -(xp * ym).trace() - 2.0 * (diag_part(x) * diag_part(y)).trace();
}

cplx trace_form(const Mat& x, const Mat& y) { return (x * y).trace(); }

WedgePairs standard_r_matrix(int n) {
  if (n < 2) throw ConfigError("standard_r_matrix needs n >= 2");
  LieBasis lb = lie_basis(n);
  WedgePairs out;
  for (size_t k = 0; k < lb.roots.size(); ++k) out.emplace_back(lb.e_neg[k], lb.e_pos[k]);
  return out;
}

WedgePairs mixed_r_term(int n) {
  if (n < 2) throw ConfigError("mixed_r_term needs n >= 2");
  DualBorelBases d = dual_borel_bases(n);
  WedgePairs out;
  for (size_t k = 0; k < d.x.size(); ++k) out.emplace_back(d.xi[k], d.x[k]);
  return out;
}

Mat simple_representative(int n, int i) {
  if (i < 1 || i > n - 1) throw ConfigError("simple reflection index out of range: " + std::to_string(i));
  Mat m = Mat::Identity(n, n);
  m(i - 1, i - 1) = 0.0;
  m(i, i) = 0.0;
  m(i - 1, i) = -1.0;
  m(i, i - 1) = 1.0;
  return m;
}

Mat weyl_representative(const WeylWord& w, int n) {
  Mat m = Mat::Identity(n, n);
  for (int letter : w) m = m * simple_representative(n, letter);
  return m;
}

void validate_word(const WeylWord& w, int n) {
  for (int letter : w) {
    if (letter < 1 || letter > n - 1) {
      throw ConfigError("Weyl letter " + std::to_string(letter) + " outside 1.." + std::to_string(n - 1));
    }
  }
}

int borel_dim(int n) { return n - 1 + n * (n - 1) / 2; }

std::vector<int> borel_indices(int n, bool lower) {
  std::vector<int> idx;
  for (int i = 0; i + 1 < n; ++i) idx.push_back(i * n + i);
  for (auto [i, j] : positive_roots(n)) idx.push_back(lower ? j * n + i : i * n + j);
  return idx;
}

Vec borel_coords(const Mat& b, bool lower) {
  const int n = static_cast<int>(b.rows());
  return select(vec(b), borel_indices(n, lower));
}

Mat borel_from_coords(const Vec& v, int n, bool lower) {
  Mat m = Mat::Zero(n, n);
  cplx prod = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i) = v(i);
    prod *= v(i);
  }
  m(n - 1, n - 1) = 1.0 / prod;
  int k = n - 1;
  for (auto [i, j] : positive_roots(n)) {
    if (lower) {
      m(j, i) = v(k);
    } else {
      m(i, j) = v(k);
    }
    ++k;
  }
  return m;
}

}  // namespace dbc
