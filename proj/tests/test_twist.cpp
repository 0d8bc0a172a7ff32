#include "doctest.h"
#include "dbc/twist.hpp"
#include "test_util.hpp"

using namespace dbc;
using namespace dbc::testing;

namespace {

Vec base_vec(const std::pair<cplx, cplx>& b) { return vecof({b.first, b.second}); }

double tstar_dist(const TstarTwist::Pair& a, const TstarTwist::Pair& b) {
  return max_abs(Vec(tstar_coords(a) - tstar_coords(b)));
}

double pair_dist(const GdbcTwist::Pair& a, const GdbcTwist::Pair& b) {
  return std::max(distance(a.first, b.first), distance(a.second, b.second));
}

// Second pair composable after v with free momenta (a, b).
Vec tstar_next(const Vec& v, cplx a, cplx b) {
  const Vec t = tstar_closed_target(v);
  return vecof({a, b, t(0), t(1) / std::exp(a * t(0))});
}

}  // namespace

TEST_CASE("T*C source and target at (1,0,1,1)") {
  const TstarTwist tw = make_tstar_twist();
  const auto p = tstar_from_coords(vecof({1.0, 0.0, 1.0, 1.0}));
  CHECK(max_abs(Vec(base_vec(tw.source(p)) - vecof({1.0, std::exp(1.0)}))) < 1e-15);
  CHECK(max_abs(Vec(base_vec(tw.target(p)) - vecof({1.0, 1.0}))) < 1e-15);
}

TEST_CASE("T*C product of (1,0,1,1) and (0,2,1,1)") {
  const TstarTwist tw = make_tstar_twist();
  const auto p1 = tstar_from_coords(vecof({1.0, 0.0, 1.0, 1.0}));
  const auto p2 = tstar_from_coords(vecof({0.0, 2.0, 1.0, 1.0}));
  CHECK(max_abs(Vec(tstar_coords(tw.mult(p1, p2)) - vecof({1.0, 2.0, 1.0, 1.0}))) < 1e-15);
}

TEST_CASE("T*C structure maps match the closed forms") {
  const TstarTwist tw = make_tstar_twist();
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vec v1 = random_cvec(rng, 4, 0.5);
    const Vec v2 = tstar_next(v1, 0.3 * random_cvec(rng, 1, 1.0)(0), 0.3 * random_cvec(rng, 1, 1.0)(0));
    const auto p1 = tstar_from_coords(v1);
    const auto p2 = tstar_from_coords(v2);
    CHECK(max_abs(Vec(base_vec(tw.source(p1)) - tstar_closed_source(v1))) <= 1e-12);
    CHECK(max_abs(Vec(base_vec(tw.target(p1)) - tstar_closed_target(v1))) <= 1e-12);
    CHECK(max_abs(Vec(tstar_coords(tw.mult(p1, p2)) - tstar_closed_mult(v1, v2))) <= 1e-12);
    CHECK(max_abs(Vec(tstar_coords(tw.inverse(p1)) - tstar_closed_inverse(v1))) <= 1e-12);
    const Vec b = tstar_closed_source(v1);
    CHECK(max_abs(Vec(tstar_coords(tw.identity({b(0), b(1)})) - tstar_closed_identity(b))) <= 1e-12);
    CHECK(tstar_dist(tw.inverse(tw.inverse(p1)), p1) <= 1e-10);
    const auto e = tw.identity(tw.source(p1));
    CHECK(tstar_dist(tw.inverse(e), e) <= 1e-12);
    CHECK(tstar_dist(tw.mult(p1, tw.inverse(p1)), e) <= 1e-10);
  }
}

TEST_CASE("T*C multiplication graph is coisotropic") {
  const TstarTwist tw = make_tstar_twist();
  const Mat omega = wedge(Vec::Unit(4, 0), Vec::Unit(4, 2)) + wedge(Vec::Unit(4, 1), Vec::Unit(4, 3));
  const Mat amb = block_diag({omega, omega, Mat(-omega)});
  auto graph = [&](const Vec& q) {
    const Vec v1 = q.head(4);
    const Vec v2 = tstar_next(v1, q(4), q(5));
    return concat({v1, v2, tstar_coords(tw.mult(tstar_from_coords(v1), tstar_from_coords(v2)))});
  };
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    CHECK(coisotropy_residual(graph, random_cvec(rng, 6, 0.4), amb) <= 1e-8);
  }
}

TEST_CASE("T*C source pushes the canonical bivector to -q1 q2 dq1 ^ dq2") {
  const Mat omega = wedge(Vec::Unit(4, 0), Vec::Unit(4, 2)) + wedge(Vec::Unit(4, 1), Vec::Unit(4, 3));
  const Mat e = wedge(Vec::Unit(2, 0), Vec::Unit(2, 1));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec v = random_cvec(rng, 4, 0.5);
    const Vec s = tstar_closed_source(v);
    CHECK(poisson_map_residual(tstar_closed_source, v, omega, Mat(-s(0) * s(1) * e), 1.0) <= 1e-8);
  }
}

TEST_CASE("GDBC twist: identity bisection and inverse") {
  Rng rng(4);
  const Gdbc u(3, {{1}});
  const Gdbc v(3, {{2}});
  const GdbcTwist tw = make_gdbc_twist(u, v);
  const GdbcElement y = u.sample_near_identity(rng, std::nullopt, kTwistSpread, kTwistScale);
  const GdbcElement z = v.sample_near_identity(rng, std::nullopt, kTwistSpread, kTwistScale);
  const GdbcTwist::Pair p{y, z};
  const GdbcTwist::Pair e = tw.identity(tw.source(p));
  const auto s = tw.source(e);
  CHECK(distance(s.first, tw.source(p).first) < 1e-12);
  CHECK(distance(s.second, tw.source(p).second) < 1e-12);
  CHECK(pair_dist(tw.mult(e, p), p) <= 1e-9);
  CHECK(pair_dist(tw.mult(p, tw.inverse(p)), e) <= 1e-9);
  CHECK(pair_dist(tw.inverse(tw.inverse(p)), p) <= 1e-9);
}

TEST_CASE("GDBC twist: associativity near the identity bisection") {
  Rng rng(5);
  const Gdbc u(2, {{1}});
  const Gdbc v(2, {{1}});
  const GdbcTwist tw = make_gdbc_twist(u, v);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    try {
      const auto [p1, p2] = sample_twist_composable(u, v, rng);
      const GdbcElement y3 = u.sample_near_identity(rng, tw.target(p2).first, kTwistSpread, kTwistScale);
      const GdbcElement z3 = v.sample_near_identity(
          rng, v.u_chart().act_b(y3.b.inverse(), tw.target(p2).second).cells, kTwistSpread, kTwistScale);
      const GdbcTwist::Pair p3{y3, z3};
      CHECK(pair_dist(tw.mult(tw.mult(p1, p2), p3), tw.mult(p1, tw.mult(p2, p3))) <= 1e-9);
      ++checked;
    } catch (const Error&) {
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("R_L round trip") {
  Rng rng(6);
  const Gdbc u(2, {{1}});
  const Gdbc v(2, {{1}});
  const GdbcTwist tw = make_gdbc_twist(u, v);
  for (int i = 0; i < 10; ++i) {
    const GdbcElement y = u.sample(rng);
    const GdbcElement z = v.sample(rng);
    const auto fwd = tw.R_L(z, y);
    const auto back = tw.R_L_inverse(fwd.first, fwd.second);
    CHECK(distance(back.first, z) <= 1e-9);
    CHECK(distance(back.second, y) <= 1e-9);
  }
  const GdbcElement ye = u.identity(u.sample(rng).c);
  const GdbcElement ze = v.identity(v.sample(rng).c);
  const auto id = tw.R_L(ze, ye);
  CHECK(distance(id.first, ze) < 1e-12);
  CHECK(distance(id.second, ye) < 1e-12);
}

TEST_CASE("concatenation of identities is an identity") {
  Rng rng(7);
  const Gdbc u(3, {{1}});
  const Gdbc v(3, {{2}});
  const Gdbc w(3, {{1}, {2}});
  const CellTuple cu = u.sample(rng).c;
  const CellTuple cv = v.sample(rng).c;
  const GdbcElement k = concat_kappa(u, v, u.identity(cu), v.identity(cv));
  CellTuple joined = cu;
  joined.insert(joined.end(), cv.begin(), cv.end());
  CHECK(distance(k, w.identity(joined)) < 1e-12);
}

TEST_CASE("kappa on the torus quotient") {
  Rng rng(8);
  const Gdbc u(3, {{1}, {2}});
  const Gdbc v(3, {{1}});
  const Gdbc w(3, {{1}, {2}, {1}});
  const GdbcElement y = u.sample(rng);
  const GdbcElement z = v.sample(rng);
  const auto [y0, z0] = t_equivalence(u, v, y, z, identity(3));
  CHECK(distance(y0, y) < 1e-14);
  CHECK(distance(z0, z) < 1e-14);
  const GdbcElement k = concat_kappa(u, v, y, z);
  CHECK(w.invariant_residual(k) <= 1e-9);
  for (int i = 0; i < 5; ++i) {
    const auto [yt, zt] = t_equivalence(u, v, y, z, diag_part(random_borel(rng, 3, false, 0.3)));
    CHECK(distance(concat_kappa(u, v, yt, zt), k) <= 1e-9);
  }
  CHECK(kappa_open_condition_pivot(w, 2, k) > 0.0);
  CHECK_THROWS_AS(kappa_open_condition_pivot(w, 4, k), IndexMismatch);
  CHECK_THROWS_AS(kappa_open_condition_pivot(w, 0, k), IndexMismatch);
}

TEST_CASE("kappa is a homomorphism on twisted pairs") {
  Rng rng(9);
  const Gdbc u(3, {{1}});
  const Gdbc v(3, {{2}});
  const Gdbc w(3, {{1}, {2}});
  const GdbcTwist tw = make_gdbc_twist(u, v);
  for (int i = 0; i < 5; ++i) {
    const auto [p1, p2] = sample_twist_composable(u, v, rng);
    const auto p12 = tw.mult(p1, p2);
    const GdbcElement k1 = concat_kappa(u, v, p1.first, p1.second);
    const GdbcElement k2 = concat_kappa(u, v, p2.first, p2.second);
    CHECK(distance(concat_kappa(u, v, p12.first, p12.second), w.mult(k1, k2, 1e-7)) <= 1e-8);
  }
}
