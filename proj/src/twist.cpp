#include "dbc/twist.hpp"

#include <algorithm>

namespace dbc {

namespace {

Mat inv(const Mat& m) { return m.inverse(); }

CellTuple join(const CellTuple& a, const CellTuple& b) {
  CellTuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Mat scalar(cplx z) {
  Mat m(1, 1);
  m(0, 0) = z;
  return m;
}

}  // namespace

GroupoidObject<GdbcElement, CellTuple> gdbc_y_object(const Gdbc& g) {
  GroupoidObject<GdbcElement, CellTuple> o;
  o.source = [&g](const GdbcElement& x) { return g.source(x); };
  o.target = [&g](const GdbcElement& x) { return g.target(x); };
  o.identity = [&g](const CellTuple& c) { return g.identity(c); };
  o.inverse = [&g](const GdbcElement& x) { return g.inverse(x); };
  o.mult = [&g](const GdbcElement& a, const GdbcElement& b) { return g.mult(a, b, 1e-8); };
  o.moment = [&g](const GdbcElement& x) { return g.mu_plus(x); };
  o.act = [&g](const GdbcElement& x, const GammaElement& gm) { return g.act_gammaB(x, gm, 1e-8); };
  return o;
}

GroupoidObject<GdbcElement, CellTuple> gdbc_z_object(const Gdbc& g) {
  GroupoidObject<GdbcElement, CellTuple> o = gdbc_y_object(g);
  o.moment = [&g](const GdbcElement& x) { return g.mu_minus(x); };
  o.act = [&g](const GdbcElement& x, const GammaElement& gm) { return g.act_gammaBminus(x, gm, 1e-8); };
  return o;
}

GdbcTwist make_gdbc_twist(const Gdbc& u, const Gdbc& v) { return GdbcTwist(gdbc_y_object(u), gdbc_z_object(v)); }

GdbcElement concat_kappa(const Gdbc& u, const Gdbc& v, const GdbcElement& y, const GdbcElement& z) {
  const BorelActionResult left = v.u_chart().act_b(y.b, z.c);
  const BorelActionResult right = u.v_chart().act_bminus(y.cm, z.bm);
  return {join(y.c, left.cells), left.cocycle * z.b, y.bm * right.cocycle, join(right.cells, z.cm)};
}

std::pair<GdbcElement, GdbcElement> t_equivalence(const Gdbc& u, const Gdbc& v, const GdbcElement& y,
                                                  const GdbcElement& z, const Mat& t) {
  const BorelActionResult ry = u.v_chart().act_bminus(y.cm, t);
  const BorelActionResult rz = v.u_chart().act_b(inv(t), z.c);
  GdbcElement y2{y.c, y.b * t, y.bm * ry.cocycle, ry.cells};
  GdbcElement z2{rz.cells, rz.cocycle * z.b, inv(t) * z.bm, z.cm};
  return {y2, z2};
}

double kappa_open_condition_pivot(const Gdbc& w, int k, const GdbcElement& x) {
  const int n = w.n();
  if (k < 1 || k > static_cast<int>(x.c.size())) throw IndexMismatch("prefix length outside the tuple");
  const CellTuple gs(x.c.begin(), x.c.begin() + k);
  const CellTuple hs(x.cm.begin(), x.cm.begin() + k);
  const Mat m = inv(x.bm * product(hs, n)) * product(gs, n);
  try {
    const GaussFactors f = gauss_decompose(m);
    return f.h.diagonal().cwiseAbs().minCoeff() / m.norm();
  } catch (const NotInOpenCell&) {
    return 0.0;
  }
}

std::pair<GdbcTwist::Pair, GdbcTwist::Pair> sample_twist_composable(const Gdbc& u, const Gdbc& v, Rng& rng) {
  const GdbcElement y1 = u.sample_near_identity(rng, std::nullopt, kTwistSpread, kTwistScale);
  const GdbcElement z1 = v.sample_near_identity(rng, std::nullopt, kTwistSpread, kTwistScale);
  const GdbcElement y2 =
      u.sample_near_identity(rng, u.v_chart().act_bminus(y1.cm, z1.bm).cells, kTwistSpread, kTwistScale);
  const GdbcElement z2 =
      v.sample_near_identity(rng, v.u_chart().act_b(inv(y2.b), z1.cm).cells, kTwistSpread, kTwistScale);
  return {{y1, z1}, {y2, z2}};
}

std::pair<double, double> gdbc_theta_tau_residuals(const Gdbc& u, const Gdbc& v, const GdbcElement& y,
                                                   const GdbcElement& z) {
  const int du = u.ambient_dim();
  const int dv = v.ambient_dim();
  const GdbcTwist tw = make_gdbc_twist(u, v);
  auto split = [&](const Vec& a) {
    return GdbcTwist::Pair{u.from_ambient(a.head(du)), v.from_ambient(a.tail(dv))};
  };
  auto src = [&](const Vec& a) {
    const auto s = tw.source(split(a));
    return concat({u.u_chart().coords(s.first), v.u_chart().coords(s.second)});
  };
  auto tgt = [&](const Vec& a) {
    const auto s = tw.target(split(a));
    return concat({u.v_chart().coords(s.first), v.v_chart().coords(s.second)});
  };
  const Vec a0 = concat({u.ambient(y), v.ambient(z)});
  const Mat p = block_diag({u.pi_uv_at(y).coeffs, v.pi_uv_at(z).coeffs});
  const DualBorelBases db = dual_borel_bases(u.n());
  auto mixed = [&](const TupleChart& cu, const TupleChart& cv, const CellTuple& ys, const CellTuple& zs) {
    std::vector<Vec> rho;
    std::vector<Vec> lam;
    for (size_t i = 0; i < db.x.size(); ++i) {
      rho.push_back(kMixedScale * cu.rho(ys, db.xi[i]));
      lam.push_back(cv.lambda(zs, db.x[i]));
    }
    return mixed_product(cu.pi_n_at(ys).coeffs, cv.pi_n_at(zs).coeffs, rho, lam);
  };
  const auto s = tw.source({y, z});
  const auto t = tw.target({y, z});
  const Mat ms = mixed(u.u_chart(), v.u_chart(), s.first, s.second);
  const Mat mt = mixed(u.v_chart(), v.v_chart(), t.first, t.second);
  const double r1 = max_abs(Mat(pushforward(src, a0, p) - ms)) / (1.0 + max_abs(ms));
  const double r2 = max_abs(Mat(pushforward(tgt, a0, p) + mt)) / (1.0 + max_abs(mt));
  return {r1, r2};
}

double twist_graph_coisotropy(const Gdbc& u, const Gdbc& v, Rng& rng) {
  const int n = u.n();
  const int iu = u.intrinsic_dim();
  const int iv = v.intrinsic_dim();
  const int fu = u.v_chart().dim() + n - 1;
  const int fv = v.v_chart().dim() + n - 1;
  const GdbcTwist tw = make_gdbc_twist(u, v);
  struct Quad {
    GdbcElement y1, z1, y2, z2;
  };
  auto build = [&](const Vec& q) {
    Quad r;
    r.y1 = u.from_intrinsic(q.head(iu));
    r.z1 = v.from_intrinsic(q.segment(iu, iv));
    const CellTuple sy = u.v_chart().act_bminus(r.y1.cm, r.z1.bm).cells;
    r.y2 = u.from_intrinsic(concat({u.u_chart().coords(sy), Vec(q.segment(iu + iv, fu))}));
    const CellTuple sz = v.u_chart().act_b(inv(r.y2.b), r.z1.cm).cells;
    r.z2 = v.from_intrinsic(concat({v.u_chart().coords(sz), Vec(q.segment(iu + iv + fu, fv))}));
    return r;
  };
  const auto pair = sample_twist_composable(u, v, rng);
  const Vec q0 = concat({u.intrinsic(pair.first.first), v.intrinsic(pair.first.second),
                         Vec(u.intrinsic(pair.second.first).tail(fu)),
                         Vec(v.intrinsic(pair.second.second).tail(fv))});
  auto graph = [&](const Vec& q) {
    const Quad r = build(q);
    const auto prod = tw.mult({r.y1, r.z1}, {r.y2, r.z2});
    return concat({u.intrinsic(r.y1), v.intrinsic(r.z1), u.intrinsic(r.y2), v.intrinsic(r.z2),
                   u.intrinsic(prod.first), v.intrinsic(prod.second)});
  };
  const Quad r = build(q0);
  const auto prod = tw.mult({r.y1, r.z1}, {r.y2, r.z2});
  const Mat p = block_diag({u.pi_intrinsic_at(r.y1).coeffs, v.pi_intrinsic_at(r.z1).coeffs,
                            u.pi_intrinsic_at(r.y2).coeffs, v.pi_intrinsic_at(r.z2).coeffs,
                            Mat(-u.pi_intrinsic_at(prod.first).coeffs),
                            Mat(-v.pi_intrinsic_at(prod.second).coeffs)});
  return coisotropy_residual(graph, q0, p);
}

double gdbc_R_L_poisson_residual(const Gdbc& u, const Gdbc& v, const GdbcElement& y, const GdbcElement& z) {
  const int du = u.ambient_dim();
  const int dv = v.ambient_dim();
  const GdbcTwist tw = make_gdbc_twist(u, v);
  auto f = [&](const Vec& a) {
    const GdbcElement zz = v.from_ambient(a.head(dv));
    const GdbcElement yy = u.from_ambient(a.tail(du));
    const auto r = tw.R_L(zz, yy);
    return concat({v.ambient(r.first), u.ambient(r.second)});
  };
  const auto r = tw.R_L(z, y);
  const Mat src = block_diag({v.pi_uv_at(z).coeffs, u.pi_uv_at(y).coeffs});
  const Mat dst = block_diag({v.pi_uv_at(r.first).coeffs, u.pi_uv_at(r.second).coeffs});
  return poisson_map_residual(f, concat({v.ambient(z), u.ambient(y)}), src, dst, 1.0);
}

GroupoidObject<TstarPoint, cplx> tstar_y_object() {
  GroupoidObject<TstarPoint, cplx> o;
  o.source = [](const TstarPoint& x) { return x.q; };
  o.target = [](const TstarPoint& x) { return x.q; };
  o.identity = [](const cplx& q) { return TstarPoint{0.0, q}; };
  o.inverse = [](const TstarPoint& x) { return TstarPoint{-x.p, x.q}; };
  o.mult = [](const TstarPoint& a, const TstarPoint& b) {
    if (std::abs(a.q - b.q) > 1e-9 * (1.0 + std::abs(a.q))) throw NotComposable("base points differ");
    return TstarPoint{a.p + b.p, a.q};
  };
  o.moment = [](const TstarPoint& x) { return scalar(std::exp(x.p * x.q)); };
  o.act = [](const TstarPoint& x, const GammaElement& g) {
    const cplx s = g.u(0, 0);
    return TstarPoint{x.p / s, s * x.q};
  };
  return o;
}

GroupoidObject<TstarPoint, cplx> tstar_z_object() {
  GroupoidObject<TstarPoint, cplx> o = tstar_y_object();
  o.act = [](const TstarPoint& x, const GammaElement& g) {
    const cplx s = g.b(0, 0);
    return TstarPoint{x.p / s, s * x.q};
  };
  return o;
}

TstarTwist make_tstar_twist() { return TstarTwist(tstar_y_object(), tstar_z_object()); }

Vec tstar_coords(const TstarTwist::Pair& p) {
  Vec v(4);
  v << p.first.p, p.second.p, p.first.q, p.second.q;
  return v;
}

TstarTwist::Pair tstar_from_coords(const Vec& v) { return {TstarPoint{v(0), v(2)}, TstarPoint{v(1), v(3)}}; }

Vec tstar_closed_source(const Vec& v) {
  Vec out(2);
  out << v(2), std::exp(v(0) * v(2)) * v(3);
  return out;
}

Vec tstar_closed_target(const Vec& v) {
  Vec out(2);
  out << std::exp(v(1) * v(3)) * v(2), v(3);
  return out;
}

Vec tstar_closed_mult(const Vec& a, const Vec& b) {
  Vec out(4);
  out << a(0) + std::exp(a(1) * a(3)) * b(0), b(1) + std::exp(b(0) * b(2)) * a(1), a(2), b(3);
  return out;
}

Vec tstar_closed_identity(const Vec& base) {
  Vec out(4);
  out << 0.0, 0.0, base(0), base(1);
  return out;
}

Vec tstar_closed_inverse(const Vec& v) {
  const cplx e1 = std::exp(v(0) * v(2));
  const cplx e2 = std::exp(v(1) * v(3));
  Vec out(4);
  out << -v(0) / e2, -v(1) / e1, e2 * v(2), e1 * v(3);
  return out;
}

}  // namespace dbc
