#include "doctest.h"
#include "dbc/cells.hpp"
#include "test_util.hpp"

using namespace dbc;
using namespace dbc::testing;

namespace {

const Mat kS = mat({{0.0, -1.0}, {1.0, 0.0}});

Mat cell_s(cplx t) { return mat({{t, -1.0}, {1.0, 0.0}}); }

}  // namespace

TEST_CASE("cell_param on SL2") {
  const CellChart chart(2, {1});
  CHECK(chart.dim() == 1);
  CHECK(max_abs(Mat(chart.param(vecof({0.0})) - kS)) == 0.0);
  const cplx t(0.7, -0.2);
  CHECK(max_abs(Mat(chart.param(vecof({t})) - cell_s(t))) < 1e-15);
  CHECK(chart.membership_residual(cell_s(t)) < 1e-15);
  const CellChart trivial(2, {});
  CHECK(trivial.dim() == 0);
  CHECK(max_abs(Mat(trivial.param(Vec(0)) - identity(2))) == 0.0);
}

TEST_CASE("cell dimension equals the word length") {
  CHECK(CellChart(3, {1, 2}).dim() == 2);
  CHECK(CellChart(3, {1, 2, 1}).dim() == 3);
  CHECK(CellChart(4, {2, 1, 3}).dim() == 3);
}

TEST_CASE("factor_BuB examples") {
  const CellChart chart(2, {1});
  const cplx t(0.3, 0.4);
  auto [c1, b1] = chart.factor_BuB(cell_s(t));
  CHECK(max_abs(Mat(c1 - cell_s(t))) < 1e-15);
  CHECK(max_abs(Mat(b1 - identity(2))) < 1e-15);
  auto [c2, b2] = chart.factor_BuB(mat({{0.0, -1.0}, {1.0, 2.0}}));
  CHECK(max_abs(Mat(c2 - kS)) < 1e-15);
  CHECK(max_abs(Mat(b2 - mat({{1.0, 2.0}, {0.0, 1.0}}))) < 1e-15);
  CHECK_THROWS_AS(chart.factor_BuB(identity(2)), NotInCell);
}

TEST_CASE("factor_BminusUBminus examples") {
  const CellChart chart(2, {1});
  const cplx t(-0.5, 0.1);
  auto [b1, c1] = chart.factor_BminusUBminus(cell_s(t));
  CHECK(max_abs(Mat(b1 - identity(2))) < 1e-15);
  CHECK(max_abs(Mat(c1 - cell_s(t))) < 1e-15);
  auto [b2, c2] = chart.factor_BminusUBminus(mat({{0.0, -1.0}, {1.0, -2.0}}));
  CHECK(max_abs(Mat(b2 - mat({{1.0, 0.0}, {2.0, 1.0}}))) < 1e-15);
  CHECK(max_abs(Mat(c2 - kS)) < 1e-15);
  CHECK_THROWS_AS(chart.factor_BminusUBminus(identity(2)), NotInCell);
}

TEST_CASE("Bruhat factorization round trips") {
  Rng rng(1);
  for (const WeylWord& w : std::vector<WeylWord>{{1}, {2}, {1, 2}, {2, 1}, {1, 2, 1}}) {
    const CellChart chart(3, w);
    for (int i = 0; i < 50; ++i) {
      const Vec t = random_cvec(rng, chart.dim(), 0.5);
      CHECK(max_abs(Vec(chart.coords(chart.param(t)) - t)) <= 1e-11);
      const Mat g = chart.param(t) * random_borel(rng, 3, false);
      auto [c, b] = chart.factor_BuB(g);
      CHECK(max_abs(Mat(c * b - g)) <= 1e-11);
      CHECK(chart.membership_residual(c) <= 1e-9);
      const Mat h = random_borel(rng, 3, true) * chart.param(t);
      auto [bm, c2] = chart.factor_BminusUBminus(h);
      CHECK(max_abs(Mat(bm * c2 - h)) <= 1e-11);
    }
  }
}

TEST_CASE("act_b and act_bminus examples on SL2") {
  const TupleChart chart(2, {{1}});
  const cplx t(0.4, 0.2);
  const cplx a(1.3, -0.4);
  const CellTuple c{cell_s(t)};
  const BorelActionResult e = chart.act_b(identity(2), c);
  CHECK(max_abs(Mat(e.cells[0] - c[0])) < 1e-15);
  CHECK(max_abs(Mat(e.cocycle - identity(2))) < 1e-15);
  const BorelActionResult r = chart.act_b(diag2(a, 1.0 / a), c);
  CHECK(max_abs(Mat(r.cells[0] - cell_s(a * a * t))) < 1e-14);
  CHECK(max_abs(Mat(r.cocycle - diag2(1.0 / a, a))) < 1e-14);
  const BorelActionResult em = chart.act_bminus(c, identity(2));
  CHECK(max_abs(Mat(em.cells[0] - c[0])) < 1e-15);
  CHECK(max_abs(Mat(em.cocycle - identity(2))) < 1e-15);
  const BorelActionResult rm = chart.act_bminus(c, diag2(a, 1.0 / a));
  CHECK(max_abs(Mat(rm.cocycle - diag2(1.0 / a, a))) < 1e-14);
  CHECK(max_abs(Mat(rm.cells[0] - cell_s(a * a * t))) < 1e-14);
  CHECK(max_abs(Mat(c[0] * diag2(a, 1.0 / a) - rm.cocycle * rm.cells[0])) < 1e-14);
}

TEST_CASE("Borel actions on cell tuples are actions with cocycles") {
  Rng rng(2);
  const TupleChart chart(3, {{1}, {2}, {1}});
  for (int i = 0; i < 50; ++i) {
    const CellTuple c = chart.param(random_cvec(rng, chart.dim(), 0.5));
    const Mat b1 = random_borel(rng, 3, false, 0.2), b2 = random_borel(rng, 3, false, 0.2);
    const BorelActionResult r2 = chart.act_b(b2, c);
    const BorelActionResult r12 = chart.act_b(Mat(b1 * b2), c);
    const BorelActionResult r1 = chart.act_b(b1, r2.cells);
    CHECK(max_abs(Mat(chart.product(r12.cells) - chart.product(r1.cells))) <= 1e-9);
    CHECK(max_abs(Mat(r12.cocycle - r1.cocycle * r2.cocycle)) <= 1e-9);
    CHECK(max_abs(Mat(b1 * b2 * chart.product(c) - chart.product(r12.cells) * r12.cocycle)) <= 1e-10);
    const Mat u1 = random_borel(rng, 3, true, 0.2), u2 = random_borel(rng, 3, true, 0.2);
    const BorelActionResult s1 = chart.act_bminus(c, u1);
    const BorelActionResult s12 = chart.act_bminus(c, Mat(u1 * u2));
    const BorelActionResult s2 = chart.act_bminus(s1.cells, u2);
    CHECK(max_abs(Mat(chart.product(s12.cells) - chart.product(s2.cells))) <= 1e-9);
    CHECK(max_abs(Mat(s12.cocycle - s1.cocycle * s2.cocycle)) <= 1e-9);
  }
}

TEST_CASE("pi_n on a one-dimensional cell is zero") {
  const TupleChart chart(2, {{1}});
  CHECK(max_abs(chart.pi_n_at({kS}).coeffs) == 0.0);
}

TEST_CASE("pi_n on SL3 (s1, s2)") {
  Rng rng(3);
  const TupleChart chart(3, {{1}, {2}});
  for (int i = 0; i < 10; ++i) {
    const Vec t = random_cvec(rng, chart.dim(), 0.5);
    const CellTuple c = chart.param(t);
    const Bivector p = chart.pi_n_at(c);
    CHECK(max_abs(Mat(p.coeffs + p.coeffs.transpose())) == 0.0);
    auto iu = [&chart](const Vec& v) { return chart.coords(I_u(chart.param(v))); };
    CHECK(poisson_map_residual(iu, t, chart.pi_n_prime_at(c).coeffs, p.coeffs, -1.0) <= 1e-6);
    CHECK(jacobi_residual([&chart](const Vec& v) { return chart.pi_n_at(chart.param(v)).coeffs; }, t) <= 1e-5);
  }
}

TEST_CASE("torus action preserves pi_n") {
  Rng rng(4);
  const TupleChart chart(3, {{1}, {2}, {1}});
  for (int i = 0; i < 5; ++i) {
    const Vec t = random_cvec(rng, chart.dim(), 0.5);
    const Mat h = diag_part(random_borel(rng, 3, false, 0.5));
    auto act = [&](const Vec& v) { return chart.coords(chart.act_b(h, chart.param(v)).cells); };
    const CellTuple moved = chart.act_b(h, chart.param(t)).cells;
    CHECK(poisson_map_residual(act, t, chart.pi_n_at(chart.param(t)).coeffs, chart.pi_n_at(moved).coeffs, 1.0) <=
          1e-6);
  }
}

TEST_CASE("mixed-product lifts of pi_n") {
  Rng rng(5);
  for (const auto& [n, words] : std::vector<std::pair<int, std::vector<WeylWord>>>{{2, {{1}}}, {3, {{1}, {2}}}}) {
    const TupleChart chart(n, words);
    const CellTuple c = chart.param(random_cvec(rng, chart.dim(), 0.5));
    CHECK(j_plus_residual(chart, c, random_borel(rng, n, false)) <= 1e-6);
    CHECK(j_minus_residual(chart, c, random_borel(rng, n, true)) <= 1e-6);
  }
}

TEST_CASE("I_u is the identity on representatives") {
  const CellTuple c{cell_s(0.2), cell_s(-0.3)};
  const CellTuple d = I_u(c);
  CHECK(max_abs(Mat(d[0] - c[0])) == 0.0);
  CHECK(max_abs(Mat(d[1] - c[1])) == 0.0);
}
