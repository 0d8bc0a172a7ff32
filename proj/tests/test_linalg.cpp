#include "doctest.h"
#include "test_util.hpp"

using namespace dbc;
using namespace dbc::testing;

TEST_CASE("gauss_decompose of the identity is trivial") {
  const GaussFactors f = gauss_decompose(identity(2));
  CHECK(max_abs(Mat(f.m - identity(2))) == 0.0);
  CHECK(max_abs(Mat(f.h - identity(2))) == 0.0);
  CHECK(max_abs(Mat(f.n - identity(2))) == 0.0);
}

TEST_CASE("gauss_decompose of [[1,1],[1,2]]") {
  const GaussFactors f = gauss_decompose(mat({{1.0, 1.0}, {1.0, 2.0}}));
  CHECK(max_abs(Mat(f.m - mat({{1.0, 0.0}, {1.0, 1.0}}))) < 1e-15);
  CHECK(max_abs(Mat(f.h - identity(2))) < 1e-15);
  CHECK(max_abs(Mat(f.n - mat({{1.0, 1.0}, {0.0, 1.0}}))) < 1e-15);
}

TEST_CASE("gauss_decompose rejects a vanishing leading minor") {
  CHECK_THROWS_AS(gauss_decompose(mat({{0.0, -1.0}, {1.0, 0.0}})), NotInOpenCell);
}

TEST_CASE("gauss_decompose round trip on random open-cell matrices") {
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const Mat g = random_borel(rng, n, true, 0.5) * random_borel(rng, n, false, 0.5);
    const GaussFactors f = gauss_decompose(g);
    worst = std::max(worst, max_abs(Mat(f.m * f.h * f.n - g)) / max_abs(g));
    CHECK(max_abs(Mat(f.m.diagonal().array() - 1.0)) < 1e-15);
    CHECK(max_abs(Mat(f.n.diagonal().array() - 1.0)) < 1e-15);
    CHECK(max_abs(Mat(f.h - diag_part(f.h))) == 0.0);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("gauss_decompose_ul factors as n h m") {
  Rng rng(11);
  const Mat g = random_borel(rng, 3, false, 0.5) * random_borel(rng, 3, true, 0.5);
  const GaussFactors f = gauss_decompose_ul(g);
  CHECK(max_abs(Mat(f.n * f.h * f.m - g)) < 1e-12);
  CHECK(max_abs(Mat(f.n.triangularView<Eigen::StrictlyLower>().toDenseMatrix())) == 0.0);
  CHECK(max_abs(Mat(f.m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix())) == 0.0);
}

TEST_CASE("torus_sqrt examples") {
  CHECK(max_abs(Mat(torus_sqrt(identity(2)) - identity(2))) < 1e-15);
  CHECK(max_abs(Mat(torus_sqrt(diag2(4.0, 0.25)) - diag2(2.0, 0.5))) < 1e-15);
  CHECK(max_abs(Mat(torus_sqrt(diag2(2.0, 0.5)) - diag2(std::sqrt(2.0), 1.0 / std::sqrt(2.0)))) < 1e-15);
}

TEST_CASE("torus_sqrt squares back on random det-1 diagonals") {
  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const Mat t = diag_part(random_borel(rng, n, false, 1.0));
    const Mat r = torus_sqrt(t);
    worst = std::max(worst, max_abs(Mat(r * r - t)));
    CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("torus_sqrt follows a hint") {
  const Mat t = diag2(4.0, 0.25);
  const Mat r = torus_sqrt(t, diag2(-2.1, -0.4));
  CHECK(max_abs(Mat(r - diag2(-2.0, -0.5))) < 1e-15);
}

TEST_CASE("numeric_jacobian examples") {
  const Vec x = vecof({cplx(0.3, 0.1), cplx(-1.0, 2.0)});
  const Mat id = numeric_jacobian([](const Vec& v) { return v; }, x);
  CHECK(max_abs(Mat(id - Mat::Identity(2, 2))) < 1e-9);
  const Mat sq = numeric_jacobian([](const Vec& v) { return Vec(v.array().square()); }, vecof({1.0}));
  CHECK(std::abs(sq(0, 0) - 2.0) < 1e-10);
  Rng rng(5);
  const Mat a = Mat::Random(3, 2);
  const Mat lin = numeric_jacobian([&](const Vec& v) { return Vec(a * v); }, random_cvec(rng, 2, 1.0));
  CHECK(max_abs(Mat(lin - a)) < 1e-9);
}

TEST_CASE("numeric_jacobian of the Gauss m-coordinate matches a Richardson oracle") {
  auto f = [](const Vec& v) { return vec(gauss_decompose(unvec(v, 2)).m); };
  const Vec x = vec(mat({{1.0, 1.0}, {1.0, 2.0}}));
  const Mat j = numeric_jacobian(f, x);
  const Mat j1 = numeric_jacobian(f, x, 2e-7);
  const Mat j2 = numeric_jacobian(f, x, 1e-7);
  const Mat oracle = (4.0 * j2 - j1) / 3.0;
  CHECK(max_abs(Mat(j - oracle)) < 1e-5);
}

TEST_CASE("numeric_jacobian reports probes outside the domain") {
  auto f = [](const Vec& v) { return vec(gauss_decompose(unvec(v, 2)).m); };
  CHECK_THROWS_AS(numeric_jacobian(f, vec(mat({{0.0, -1.0}, {1.0, 0.0}}))), DomainEscape);
}

TEST_CASE("keyed_rng streams are reproducible and distinct") {
  Rng a = keyed_rng(1, 2, 3);
  Rng b = keyed_rng(1, 2, 3);
  Rng c = keyed_rng(1, 2, 4);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
}

TEST_CASE("wedge and antisymmetrize") {
  const Mat w = wedge(vecof({1.0, 0.0}), vecof({0.0, 1.0}));
  CHECK(w(0, 1) == cplx(1.0));
  CHECK(w(1, 0) == cplx(-1.0));
  CHECK(max_abs(Mat(antisymmetrize(w) - w)) == 0.0);
}
