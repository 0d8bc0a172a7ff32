#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "dbc/gdbc.hpp"

namespace dbc {

// Local groupoid with a moment map into B (or B_-) and a right action of the
// matching groupoid structure on Gamma along that moment.
template <class E, class Base>
struct GroupoidObject {
  std::function<Base(const E&)> source;
  std::function<Base(const E&)> target;
  std::function<E(const Base&)> identity;
  std::function<E(const E&)> inverse;
  std::function<E(const E&, const E&)> mult;
  std::function<Mat(const E&)> moment;
  std::function<E(const E&, const GammaElement&)> act;
};

// Twisted product Y x_L Z built from the diagonal of the graph region of Gamma.
template <class YE, class YB, class ZE, class ZB>
class TwistContext {
 public:
  using Pair = std::pair<YE, ZE>;
  using BasePair = std::pair<YB, ZB>;

  TwistContext(GroupoidObject<YE, YB> y, GroupoidObject<ZE, ZB> z) : y_(std::move(y)), z_(std::move(z)) {}

  const GroupoidObject<YE, YB>& y_object() const { return y_; }
  const GroupoidObject<ZE, ZB>& z_object() const { return z_; }

  // g[z]: dressing of a base point of Z, read off from the identity bisection.
  ZB dress_base_z(const Mat& g, const ZB& zb) const {
    const ZE e = z_.identity(zb);
    return z_.source(z_.act(e, gamma_lower(g, z_.moment(e))));
  }

  // y^u: dressing of a base point of Y, read off from the identity bisection.
  YB dress_base_y(const YB& yb, const Mat& u) const {
    const YE e = y_.identity(yb);
    return y_.source(y_.act(e, gamma_lower(y_.moment(e), u)));
  }

  BasePair source(const Pair& p) const {
    return {y_.source(p.first), dress_base_z(y_.moment(p.first), z_.source(p.second))};
  }

  BasePair target(const Pair& p) const {
    return {dress_base_y(y_.target(p.first), z_.moment(p.second)), z_.target(p.second)};
  }

  Pair identity(const BasePair& b) const { return {y_.identity(b.first), z_.identity(b.second)}; }

  Pair mult(const Pair& p1, const Pair& p2, const std::optional<Mat>& hint = std::nullopt) const {
    const GammaElement g = gamma_upper(z_.moment(p1.second), y_.moment(p2.first), hint);
    const YE y = y_.mult(p1.first, y_.act(p2.first, iota_G(g)));
    const ZE z = z_.mult(z_.act(p1.second, iota_Gstar(g)), p2.second);
    return {y, z};
  }

  Pair inverse(const Pair& p) const {
    const GammaElement g = gamma_lower(y_.moment(p.first), z_.moment(p.second));
    return {y_.inverse(y_.act(p.first, g)), z_.inverse(z_.act(p.second, g))};
  }

  // R_L(z, y) = (z acted on by gamma_{mu(y), mu(z)}, y acted on by the same element).
  std::pair<ZE, YE> R_L(const ZE& z, const YE& y) const {
    const GammaElement g = gamma_lower(y_.moment(y), z_.moment(z));
    return {z_.act(z, g), y_.act(y, g)};
  }

  std::pair<ZE, YE> R_L_inverse(const ZE& z, const YE& y) const {
    const GammaElement g = gamma_upper(z_.moment(z), y_.moment(y));
    return {z_.act(z, iota_Gstar(g)), y_.act(y, iota_G(g))};
  }

 private:
  GroupoidObject<YE, YB> y_;
  GroupoidObject<ZE, ZB> z_;
};

// ---------------------------------------------------------------------------
// Instance on pairs of generalized double Bruhat cells.

GroupoidObject<GdbcElement, CellTuple> gdbc_y_object(const Gdbc& g);
GroupoidObject<GdbcElement, CellTuple> gdbc_z_object(const Gdbc& g);

using GdbcTwist = TwistContext<GdbcElement, CellTuple, GdbcElement, CellTuple>;
GdbcTwist make_gdbc_twist(const Gdbc& u, const Gdbc& v);

// Concatenation ([c, b[c']], b_v(b, c') b', b_- b_{-u}(b'_-, c_-), [c_-^{b'_-}, c'_-]).
GdbcElement concat_kappa(const Gdbc& u, const Gdbc& v, const GdbcElement& y, const GdbcElement& z);

// Right action of the torus defining the quotient on which kappa is injective.
std::pair<GdbcElement, GdbcElement> t_equivalence(const Gdbc& u, const Gdbc& v, const GdbcElement& y,
                                                  const GdbcElement& z, const Mat& t);

// Smallest relative Gauss pivot of (h_1...h_k)^{-1} g_1...g_k for the first k
// factors of a concatenated element; positive iff the open condition holds.
double kappa_open_condition_pivot(const Gdbc& w, int k, const GdbcElement& x);

// Spread and cell scale used when sampling twisted pairs near the identity bisection.
inline constexpr double kTwistSpread = 0.1;
inline constexpr double kTwistScale = 1.0;

// Random composable pair of twisted pairs near the identity bisection.
std::pair<GdbcTwist::Pair, GdbcTwist::Pair> sample_twist_composable(const Gdbc& u, const Gdbc& v, Rng& rng);

// Source and target pushforward residuals of pi_u x pi_v against the mixed
// product on the base (and its negative at the target).
std::pair<double, double> gdbc_theta_tau_residuals(const Gdbc& u, const Gdbc& v, const GdbcElement& y,
                                                   const GdbcElement& z);

// Coisotropy of the twisted multiplication graph in (pi x pi, pi x pi, -pi x -pi).
double twist_graph_coisotropy(const Gdbc& u, const Gdbc& v, Rng& rng);

// R_L is a Poisson map for pi_Z x pi_Y.
double gdbc_R_L_poisson_residual(const Gdbc& u, const Gdbc& v, const GdbcElement& y, const GdbcElement& z);

// ---------------------------------------------------------------------------
// Instance on the cotangent bundle of C with G = G* = C^*.

struct TstarPoint {
  cplx p;
  cplx q;
};

GroupoidObject<TstarPoint, cplx> tstar_y_object();
GroupoidObject<TstarPoint, cplx> tstar_z_object();

using TstarTwist = TwistContext<TstarPoint, cplx, TstarPoint, cplx>;
TstarTwist make_tstar_twist();

// Coordinates (p1, p2, q1, q2) of a twisted pair.
Vec tstar_coords(const TstarTwist::Pair& p);
TstarTwist::Pair tstar_from_coords(const Vec& v);

// Closed-form structure maps of the twisted cotangent groupoid.
Vec tstar_closed_source(const Vec& v);
Vec tstar_closed_target(const Vec& v);
Vec tstar_closed_mult(const Vec& v1, const Vec& v2);
Vec tstar_closed_identity(const Vec& base);
Vec tstar_closed_inverse(const Vec& v);

}  // namespace dbc
