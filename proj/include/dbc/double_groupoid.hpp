#pragma once

#include <optional>
#include <utility>

#include "dbc/lie.hpp"

namespace dbc {

// Element of D = G x T with componentwise multiplication.
struct DoubleElement {
  Mat g;
  Mat t;
  DoubleElement operator*(const DoubleElement& o) const { return {g * o.g, t * o.t}; }
};

double distance(const DoubleElement& a, const DoubleElement& b);

DoubleElement embed_B(const Mat& b);
DoubleElement embed_Bminus(const Mat& bm);

// Quadruple (b, u, u', b') with embed_B(b) embed_Bminus(u) = embed_Bminus(u') embed_B(b').
struct GammaElement {
  Mat b;
  Mat u;
  Mat u_prime;
  Mat b_prime;
};

double invariant_residual(const GammaElement& g);
double distance(const GammaElement& a, const GammaElement& b);

struct Dressed {
  Mat u_prime;  // b[u]
  Mat b_prime;  // b^u
};

struct Undressed {
  Mat b;  // u'[b']
  Mat u;  // u'^{b'}
};

// Solve b u = u' b' in D. The torus square root is anchored at the diagonal of
// u, so dress(e, u) = (u, e) and dress(b, e) = (e, b) hold on every branch.
Dressed dress(const Mat& b, const Mat& u, const std::optional<Mat>& hint = std::nullopt);

// Solve u' b' = b u in D for (b, u).
Undressed undress(const Mat& u_prime, const Mat& b_prime, const std::optional<Mat>& hint = std::nullopt);

GammaElement gamma_lower(const Mat& g, const Mat& u, const std::optional<Mat>& hint = std::nullopt);
GammaElement gamma_upper(const Mat& u_prime, const Mat& g_prime,
                         const std::optional<Mat>& hint = std::nullopt);

// Structure maps of the groupoid over G (source b, target b') and over G*
// (source u, target u').
GammaElement eps_G(const Mat& g);
GammaElement eps_Gstar(const Mat& u);
inline const Mat& theta_G(const GammaElement& g) { return g.b; }
inline const Mat& tau_G(const GammaElement& g) { return g.b_prime; }
inline const Mat& theta_Gstar(const GammaElement& g) { return g.u; }
inline const Mat& tau_Gstar(const GammaElement& g) { return g.u_prime; }

GammaElement iota_G(const GammaElement& g);
GammaElement iota_Gstar(const GammaElement& g);

// (g1,u1,u1',g1') * (g2,u2,u2',g2') = (g2 g1, u1, u2', g2' g1') when u1' = u2.
GammaElement gamma_mult_over_Gstar(const GammaElement& a, const GammaElement& b, double tol = 1e-9);

// (g1,u1,u1',g1') (g2,u2,u2',g2') = (g1, u1 u2, u1' u2', g2') when g1' = g2.
GammaElement gamma_mult_over_G(const GammaElement& a, const GammaElement& b, double tol = 1e-9);

// Element (h g, u, h[u'], h^{u'} g') of the bisection through gamma.
GammaElement bisection_S(const GammaElement& g, const Mat& h);

// Diagonal pair of an element of the graph region, validated by re-dressing.
std::pair<GammaElement, GammaElement> lagrangian_bisection_pair(const GammaElement& g, double tol = 1e-9);

// D-valued image p(gamma) = embed_B(b) embed_Bminus(u).
DoubleElement gamma_to_double(const GammaElement& g);

// Infinitesimal dressing in D: the b_- component of Ad_g xi and the b
// component of Ad_{u^{-1}} x.
Mat ad_star_dressing_lower(const Mat& g, const Mat& xi);
Mat ad_star_dressing_upper(const Mat& u, const Mat& x);

}  // namespace dbc
