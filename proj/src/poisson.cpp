#include "dbc/poisson.hpp"

#include <Eigen/SVD>

namespace dbc {

Mat pi_st_at(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  Mat p = Mat::Zero(n * n, n * n);
  for (auto [i, j] : positive_roots(n)) {
    const Mat en = elementary(n, j, i);
    const Mat ep = elementary(n, i, j);
    p += wedge(vec(g * en), vec(g * ep)) - wedge(vec(en * g), vec(ep * g));
  }
  return p;
}

Mat pi_st_borel(const Mat& b, bool lower) {
  const int n = static_cast<int>(b.rows());
  return select(pi_st_at(b), borel_indices(n, lower));
}

Vec gamma_left_coords(const GammaElement& g) {
  return concat({borel_coords(g.b, false), borel_coords(g.u, true)});
}

Vec gamma_right_coords(const GammaElement& g) {
  return concat({borel_coords(g.u_prime, true), borel_coords(g.b_prime, false)});
}

GammaElement gamma_from_left_coords(const Vec& v, int n) {
  const int d = borel_dim(n);
  return gamma_lower(borel_from_coords(v.head(d), n, false), borel_from_coords(v.tail(d), n, true));
}

GammaElement gamma_from_right_coords(const Vec& v, int n) {
  const int d = borel_dim(n);
  return gamma_upper(borel_from_coords(v.head(d), n, true), borel_from_coords(v.tail(d), n, false));
}

Bivector pi_gamma_at(const GammaElement& g) {
  const int n = static_cast<int>(g.b.rows());
  const int d = borel_dim(n);
  const DualBorelBases db = dual_borel_bases(n);
  Mat p = block_diag({pi_st_borel(g.b, false), Mat(-pi_st_borel(g.u, true))});
  const Vec zero = Vec::Zero(d);
  for (size_t k = 0; k < db.x.size(); ++k) {
    const Vec left = concat({borel_coords(g.b * db.x[k], false), zero});
    const Vec right = concat({zero, borel_coords(db.xi[k] * g.u, true)});
    p -= kMixedScale * wedge(left, right);
  }
  return Bivector("gamma:(b,u)", p);
}

Bivector pi_gamma_right_chart(const GammaElement& g) {
  const int n = static_cast<int>(g.b.rows());
  const int d = borel_dim(n);
  const DualBorelBases db = dual_borel_bases(n);
  Mat p = block_diag({pi_st_borel(g.u_prime, true), Mat(-pi_st_borel(g.b_prime, false))});
  const Vec zero = Vec::Zero(d);
  for (size_t k = 0; k < db.x.size(); ++k) {
    const Vec left = concat({borel_coords(g.u_prime * db.xi[k], true), zero});
    const Vec right = concat({zero, borel_coords(db.x[k] * g.b_prime, false)});
    p += kMixedScale * wedge(left, right);
  }
  return Bivector("gamma:(u',b')", p);
}

Mat pi_plus_double_at(const DoubleElement& d) {
  const int n = static_cast<int>(d.g.rows());
  const DualBorelBases db = dual_borel_bases(n);
  auto tangent = [&](const Mat& a, const Mat& a0, bool left) {
    if (left) return concat({vec(d.g * a), Vec((d.t * a0).diagonal())});
    return concat({vec(a * d.g), Vec((a0 * d.t).diagonal())});
  };
  Mat p = Mat::Zero(n * n + n, n * n + n);
  for (size_t k = 0; k < db.x.size(); ++k) {
    const Mat& x = db.x[k];
    const Mat& xi = db.xi[k];
    const Mat x0 = diag_part(x);
    const Mat xi0 = -diag_part(xi);
    p += wedge(tangent(xi, xi0, true), tangent(x, x0, true));
    p += wedge(tangent(xi, xi0, false), tangent(x, x0, false));
  }
  return p;
}

Mat mixed_product(const Mat& pi_y, const Mat& pi_z, const std::vector<Vec>& rho_vecs,
                  const std::vector<Vec>& lambda_vecs) {
  if (rho_vecs.size() != lambda_vecs.size()) throw IndexMismatch("rho and lambda lists differ in length");
  const Eigen::Index dy = pi_y.rows();
  const Eigen::Index dz = pi_z.rows();
  Mat p = block_diag({pi_y, pi_z});
  for (size_t k = 0; k < rho_vecs.size(); ++k) {
    if (rho_vecs[k].size() != dy || lambda_vecs[k].size() != dz) {
      throw IndexMismatch("vector field dimension does not match its factor");
    }
    Vec a = Vec::Zero(dy + dz);
    Vec b = Vec::Zero(dy + dz);
    a.head(dy) = rho_vecs[k];
    b.tail(dz) = lambda_vecs[k];
    p -= wedge(a, b);
  }
  return p;
}

Mat pushforward(const ChartMap& f, const Vec& x, const Mat& coeffs, double step) {
  const Mat j = numeric_jacobian(f, x, step);
  return antisymmetrize(j * coeffs * j.transpose());
}

double poisson_map_residual(const ChartMap& f, const Vec& x, const Mat& src_pi, const Mat& dst_pi,
                            double sign, double step) {
  const Mat pushed = pushforward(f, x, src_pi, step);
  return max_abs(Mat(pushed - sign * dst_pi)) / (1.0 + max_abs(dst_pi));
}

double coisotropy_residual(const ChartMap& graph_param, const Vec& q, const Mat& ambient_pi,
                           const CoisotropyOptions& opts) {
  const Mat tm = numeric_jacobian(graph_param, q);
  const Eigen::Index dim = tm.rows();
  const Eigen::Index m = tm.cols();
  Eigen::JacobiSVD<Mat> svd_t(tm, Eigen::ComputeFullU);
  const auto& sv = svd_t.singularValues();
  if (m > 0 && sv(m - 1) < opts.rank_tol) throw RankDeficient("graph parametrization is not immersive");
  const Mat q_basis = svd_t.matrixU().leftCols(m);
  Eigen::JacobiSVD<Mat> svd_c(Mat(tm.transpose()), Eigen::ComputeFullV);
  const Mat conormals = svd_c.matrixV().rightCols(dim - m);
  const double pi_norm = ambient_pi.norm();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < conormals.cols(); ++k) {
    const Vec nu = conormals.col(k);
    const Vec w = ambient_pi.transpose() * nu;
    const Vec orth = w - q_basis * (q_basis.adjoint() * w);
    const double denom = std::max(w.norm(), opts.relative_floor * pi_norm * nu.norm());
    if (denom == 0.0) continue;
    worst = std::max(worst, orth.norm() / denom);
  }
  return worst;
}

double jacobi_residual(const BivectorField& pi, const Vec& x, double step) {
  const Mat p0 = pi(x);
  const Eigen::Index d = p0.rows();
  std::vector<Mat> dp(d);
  try {
    for (Eigen::Index l = 0; l < d; ++l) {
      auto diff = [&](double h) {
        Vec xp = x;
        Vec xm = x;
        xp(l) += h;
        xm(l) -= h;
        return Mat((pi(xp) - pi(xm)) / (2.0 * h));
      };
      dp[l] = (4.0 * diff(step) - diff(2.0 * step)) / 3.0;
    }
  } catch (const Error& e) {
    throw DomainEscape(std::string("jacobi probe left the domain: ") + e.what());
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      for (Eigen::Index k = j + 1; k < d; ++k) {
        cplx s = 0.0;
        for (Eigen::Index l = 0; l < d; ++l) {
          s += p0(i, l) * dp[l](j, k) + p0(j, l) * dp[l](k, i) + p0(k, l) * dp[l](i, j);
        }
        worst = std::max(worst, std::abs(s));
      }
    }
  }
  const double norm = max_abs(p0);
  return worst / (norm * norm + 1.0);
}

Vec dressing_field(const ChartMap& mu, bool lower, const Mat& pi_y, const Mat& xi, const Vec& y, Side side,
                   double step) {
  const Vec m0 = mu(y);
  const int dB = static_cast<int>(m0.size());
  int n = 1;
  while (borel_dim(n) < dB) ++n;
  const Mat g = borel_from_coords(m0, n, lower);
  const Mat g_inv = g.inverse();
  auto full = [&](const Vec& v) { return vec(borel_from_coords(mu(v), n, lower)); };
  const Mat jac = numeric_jacobian(full, y, step);
  Vec alpha(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const Mat t = unvec(jac.col(k), n);
    const Mat tr = side == Side::Left ? Mat(g_inv * t) : Mat(t * g_inv);
    alpha(k) = lower ? pairing_b_bminus(xi, tr) : pairing_b_bminus(tr, xi);
  }
  return pi_y.transpose() * alpha;
}

}  // namespace dbc
