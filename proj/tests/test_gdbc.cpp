#include "doctest.h"
#include "dbc/gdbc.hpp"
#include "test_util.hpp"

using namespace dbc;
using namespace dbc::testing;

namespace {

std::vector<std::pair<int, std::vector<WeylWord>>> instances() {
  return {{2, {{1}}}, {2, {{1}, {1}}}, {3, {{1}, {2}}}, {3, {{2}, {1}, {2}}}};
}

}  // namespace

TEST_CASE("identity and inverse maps") {
  Rng rng(1);
  for (const auto& [n, w] : instances()) {
    const Gdbc g(n, w);
    const GdbcElement x = g.sample(rng);
    CHECK(g.invariant_residual(x) < 1e-10);
    const GdbcElement e = g.identity(x.c);
    CHECK(distance(g.inverse(e), e) < 1e-14);
    CHECK(distance(g.inverse(g.inverse(x)), x) < 1e-12);
    CHECK(g.invariant_residual(g.inverse(x)) < 1e-10);
    CHECK(distance(g.mult(x, g.identity(x.cm)), x) < 1e-12);
    CHECK(distance(g.mult(x, g.inverse(x)), g.identity(x.c)) < 1e-12);
    CHECK(max_abs(Mat(g.mu_plus(e) - identity(n))) == 0.0);
    CHECK(max_abs(Mat(g.mu_minus(e) - identity(n))) == 0.0);
  }
}

TEST_CASE("multiplication is associative and the moments are morphisms") {
  Rng rng(2);
  for (const auto& [n, w] : instances()) {
    const Gdbc g(n, w);
    for (int i = 0; i < 20; ++i) {
      const GdbcElement x1 = g.sample(rng);
      const GdbcElement x2 = g.sample(rng, x1.cm);
      const GdbcElement x3 = g.sample(rng, x2.cm);
      CHECK(distance(g.mult(g.mult(x1, x2), x3), g.mult(x1, g.mult(x2, x3))) <= 1e-10);
      const GdbcElement x12 = g.mult(x1, x2);
      CHECK(max_abs(Mat(g.mu_plus(x12) - g.mu_plus(x1) * g.mu_plus(x2))) == 0.0);
      CHECK(max_abs(Mat(g.mu_minus(x12) - g.mu_minus(x1) * g.mu_minus(x2))) == 0.0);
    }
  }
}

TEST_CASE("malformed input is rejected") {
  Rng rng(3);
  const Gdbc g(2, {{1}});
  const GdbcElement x1 = g.sample(rng);
  const GdbcElement x2 = g.sample(rng);
  CHECK_THROWS_AS(g.mult(x1, x2), NotComposable);
  GdbcElement bad = x1;
  bad.b(0, 1) += 1.0;
  CHECK_THROWS_AS(g.validate(bad), InvariantViolation);
  const Gdbc mixed(3, {{1}}, {{2}});
  CHECK_THROWS_AS(mixed.identity({weyl_representative({1}, 3)}), InvariantViolation);
}

TEST_CASE("Gamma_B action") {
  Rng rng(4);
  for (const auto& [n, w] : instances()) {
    const Gdbc g(n, w);
    const GdbcElement x = g.sample(rng);
    CHECK(distance(g.act_gammaB(x, eps_G(x.b)), x) < 1e-12);
    const GammaElement a = gamma_lower(x.b, random_borel(rng, n, true, 0.2));
    const GammaElement b = gamma_lower(a.b_prime, random_borel(rng, n, true, 0.2));
    const GdbcElement seq = g.act_gammaB(g.act_gammaB(x, a), b);
    CHECK(distance(seq, g.act_gammaB(x, gamma_mult_over_G(a, b))) <= 1e-9);
    CHECK(g.invariant_residual(seq) <= 1e-9);
    CHECK_THROWS_AS(g.act_gammaB(x, eps_G(random_borel(rng, n, false))), NotComposable);
  }
}

TEST_CASE("Gamma_B- action") {
  Rng rng(5);
  for (const auto& [n, w] : instances()) {
    const Gdbc g(n, w);
    const GdbcElement x = g.sample(rng);
    CHECK(distance(g.act_gammaBminus(x, eps_Gstar(x.bm)), x) < 1e-12);
    const GammaElement a = gamma_lower(random_borel(rng, n, false, 0.2), x.bm);
    const GammaElement b = gamma_lower(random_borel(rng, n, false, 0.2), a.u_prime);
    const GdbcElement seq = g.act_gammaBminus(g.act_gammaBminus(x, a), b);
    CHECK(distance(seq, g.act_gammaBminus(x, gamma_mult_over_Gstar(a, b))) <= 1e-9);
    CHECK_THROWS_AS(g.act_gammaBminus(x, eps_Gstar(random_borel(rng, n, true))), NotComposable);
  }
}

TEST_CASE("twisted multiplicativity of both actions") {
  Rng rng(6);
  for (const auto& [n, w] : instances()) {
    const Gdbc g(n, w);
    const GdbcElement x1 = g.sample(rng);
    const GdbcElement x2 = g.sample(rng, x1.cm);
    const GdbcElement x12 = g.mult(x1, x2);
    const GammaElement p2 = gamma_lower(x2.b, random_borel(rng, n, true, 0.2));
    const GammaElement p1 = gamma_lower(x1.b, p2.u_prime);
    const GdbcElement lhs = g.act_gammaB(x12, gamma_mult_over_Gstar(p2, p1));
    const GdbcElement rhs = g.mult(g.act_gammaB(x1, p1), g.act_gammaB(x2, p2));
    CHECK(distance(lhs, rhs) <= 1e-9);
    const GammaElement q1 = gamma_lower(random_borel(rng, n, false, 0.2), x1.bm);
    const GammaElement q2 = gamma_lower(q1.b_prime, x2.bm);
    const GdbcElement lhs2 = g.act_gammaBminus(x12, gamma_mult_over_G(q1, q2));
    const GdbcElement rhs2 = g.mult(g.act_gammaBminus(x1, q1), g.act_gammaBminus(x2, q2));
    CHECK(distance(lhs2, rhs2) <= 1e-9);
  }
}

TEST_CASE("pi_uv is antisymmetric and tangent") {
  Rng rng(7);
  const Gdbc g(3, {{1}, {2}});
  const GdbcElement e = g.identity(g.sample(rng).c);
  const Mat pe = g.pi_uv_at(e).coeffs;
  CHECK(max_abs(Mat(pe + pe.transpose())) == 0.0);
  for (int i = 0; i < 5; ++i) {
    const GdbcElement x = g.sample(rng);
    CHECK(g.tangency_residual(x) <= 1e-6);
    const auto [r1, r2] = g.base_pushforward_residuals(x);
    CHECK(r1 <= 1e-6);
    CHECK(r2 <= 1e-6);
  }
}

TEST_CASE("mu_plus is a Poisson map onto B") {
  Rng rng(8);
  const Gdbc g(2, {{1}});
  const int lu = g.u_chart().dim();
  const int dB = borel_dim(2);
  for (int i = 0; i < 5; ++i) {
    const GdbcElement x = g.sample(rng);
    auto mu = [&](const Vec& a) { return Vec(a.segment(lu, dB)); };
    CHECK(poisson_map_residual(mu, g.ambient(x), g.pi_uv_at(x).coeffs, pi_st_borel(x.b, false), 1.0) <= 1e-6);
  }
}

TEST_CASE("multiplication graph is coisotropic") {
  Rng rng(9);
  for (const auto& [n, w] : std::vector<std::pair<int, std::vector<WeylWord>>>{{2, {{1}, {1}}}, {3, {{1}, {2}}}}) {
    const Gdbc g(n, w);
    for (int i = 0; i < 5; ++i) {
      const GdbcElement x1 = g.sample(rng);
      const Vec p2 = g.intrinsic(g.sample(rng, x1.cm));
      const Vec q = concat({g.intrinsic(x1), Vec(p2.segment(g.u_chart().dim(), g.v_chart().dim())), Vec(p2.tail(n - 1))});
      REQUIRE(q.size() == g.pair_param_dim());
      CHECK(g.multiplication_coisotropy(q) <= 1e-6);
    }
  }
}

TEST_CASE("dirac conditions on SL2") {
  Rng rng(10);
  const Gdbc g(2, {{1}});
  for (int i = 0; i < 5; ++i) {
    const GdbcElement x = g.sample(rng);
    for (ActionSide side : {ActionSide::B, ActionSide::Bminus}) {
      const DiracResiduals r = g.dirac_residuals(x, side, rng);
      CHECK(r.r1 <= 1e-5);
      CHECK(r.r2 <= 1e-5);
    }
  }
}

TEST_CASE("near-identity samples keep both moments close to e") {
  Rng rng(11);
  const Gdbc g(3, {{1}, {2}});
  for (int i = 0; i < 20; ++i) {
    const GdbcElement x = g.sample_near_identity(rng);
    CHECK(max_abs(Mat(x.b - identity(3))) <= 0.5);
    CHECK(max_abs(Mat(x.bm - identity(3))) <= 0.5);
    CHECK(g.invariant_residual(x) <= 1e-9);
  }
}
