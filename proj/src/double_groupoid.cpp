#include "dbc/double_groupoid.hpp"

#include <algorithm>

namespace dbc {

namespace {

Mat strictly_lower(const Mat& m) { return m.triangularView<Eigen::StrictlyLower>(); }
Mat strictly_upper(const Mat& m) { return m.triangularView<Eigen::StrictlyUpper>(); }
Mat inv(const Mat& m) { return m.inverse(); }

}  // namespace

double distance(const DoubleElement& a, const DoubleElement& b) {
  return std::max(max_abs(Mat(a.g - b.g)), max_abs(Mat(a.t - b.t)));
}

DoubleElement embed_B(const Mat& b) { return {b, diag_part(b)}; }

DoubleElement embed_Bminus(const Mat& bm) { return {bm, inv(diag_part(bm))}; }

double invariant_residual(const GammaElement& g) {
  DoubleElement lhs = embed_B(g.b) * embed_Bminus(g.u);
  DoubleElement rhs = embed_Bminus(g.u_prime) * embed_B(g.b_prime);
  return distance(lhs, rhs);
}

double distance(const GammaElement& a, const GammaElement& b) {
  return std::max({max_abs(Mat(a.b - b.b)), max_abs(Mat(a.u - b.u)), max_abs(Mat(a.u_prime - b.u_prime)),
                   max_abs(Mat(a.b_prime - b.b_prime))});
}

Dressed dress(const Mat& b, const Mat& u, const std::optional<Mat>& hint) {
  GaussFactors f;
  try {
    f = gauss_decompose(b * u);
  } catch (const NotInOpenCell& e) {
    throw NotInDressingDomain(e.what());
  }
  const Mat hu = diag_part(u);
  const Mat hb = diag_part(b);
  const Mat ratio = f.h * inv(hu) * inv(hb);
  std::optional<Mat> rel;
  if (hint) rel = Mat(inv(hu) * diag_part(*hint));
  const Mat h1 = hu * torus_sqrt(ratio, rel);
  const Mat h2 = f.h * inv(h1);
  return {f.m * h1, h2 * f.n};
}

Undressed undress(const Mat& u_prime, const Mat& b_prime, const std::optional<Mat>& hint) {
  GaussFactors f;
  try {
    f = gauss_decompose_ul(u_prime * b_prime);
  } catch (const NotInOpenCell& e) {
    throw NotInDressingDomain(e.what());
  }
  const Mat hb = diag_part(b_prime);
  const Mat c = inv(diag_part(u_prime)) * hb;
  std::optional<Mat> rel;
  if (hint) rel = Mat(inv(hb) * diag_part(*hint));
  const Mat k1 = hb * torus_sqrt(c * f.h * inv(hb * hb), rel);
  const Mat k2 = f.h * inv(k1);
  return {f.n * k1, k2 * f.m};
}

GammaElement gamma_lower(const Mat& g, const Mat& u, const std::optional<Mat>& hint) {
  Dressed d = dress(g, u, hint);
  return {g, u, d.u_prime, d.b_prime};
}

GammaElement gamma_upper(const Mat& u_prime, const Mat& g_prime, const std::optional<Mat>& hint) {
  Undressed d = undress(u_prime, g_prime, hint);
  return {d.b, d.u, u_prime, g_prime};
}

GammaElement eps_G(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  return {g, identity(n), identity(n), g};
}

GammaElement eps_Gstar(const Mat& u) {
  const int n = static_cast<int>(u.rows());
  return {identity(n), u, u, identity(n)};
}

GammaElement iota_G(const GammaElement& g) { return {g.b_prime, inv(g.u), inv(g.u_prime), g.b}; }

GammaElement iota_Gstar(const GammaElement& g) { return {inv(g.b), g.u_prime, g.u, inv(g.b_prime)}; }

GammaElement gamma_mult_over_Gstar(const GammaElement& a, const GammaElement& b, double tol) {
  if (max_abs(Mat(a.u_prime - b.u)) > tol * (1.0 + max_abs(b.u))) {
    throw NotComposable("u' of the first factor differs from u of the second");
  }
  return {b.b * a.b, a.u, b.u_prime, b.b_prime * a.b_prime};
}

GammaElement gamma_mult_over_G(const GammaElement& a, const GammaElement& b, double tol) {
  if (max_abs(Mat(a.b_prime - b.b)) > tol * (1.0 + max_abs(b.b))) {
    throw NotComposable("b' of the first factor differs from b of the second");
  }
  return {a.b, a.u * b.u, a.u_prime * b.u_prime, b.b_prime};
}

GammaElement bisection_S(const GammaElement& g, const Mat& h) {
  Dressed d = dress(h, g.u_prime);
  return {h * g.b, g.u, d.u_prime, d.b_prime * g.b_prime};
}

std::pair<GammaElement, GammaElement> lagrangian_bisection_pair(const GammaElement& g, double tol) {
  GammaElement redo = gamma_lower(g.b, g.u, g.u_prime);
  if (distance(redo, g) > tol * (1.0 + max_abs(g.b_prime) + max_abs(g.u_prime))) {
    throw NotInDressingDomain("element is not determined by (b, u) through dressing");
  }
  return {g, g};
}

DoubleElement gamma_to_double(const GammaElement& g) { return embed_B(g.b) * embed_Bminus(g.u); }

Mat ad_star_dressing_lower(const Mat& g, const Mat& xi) {
  const Mat a = g * xi * inv(g);
  return strictly_lower(a) + (diag_part(a) + diag_part(xi)) / 2.0;
}

Mat ad_star_dressing_upper(const Mat& u, const Mat& x) {
  const Mat a = inv(u) * x * u;
  return strictly_upper(a) + (diag_part(a) + diag_part(x)) / 2.0;
}

}  // namespace dbc
