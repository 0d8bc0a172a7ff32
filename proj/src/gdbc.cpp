#include "dbc/gdbc.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace dbc {

namespace {

constexpr double kSamplePivot = 0.05;
constexpr int kSampleAttempts = 100;
constexpr double kMomentRadius = 0.5;

Mat inv(const Mat& m) { return m.inverse(); }

Mat torus_from(const Vec& d, int n) {
  Mat t = Mat::Zero(n, n);
  cplx prod = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    t(i, i) = d(i);
    prod *= d(i);
  }
  t(n - 1, n - 1) = 1.0 / prod;
  return t;
}

double min_relative_pivot(const Mat& g) {
  const GaussFactors f = gauss_decompose(g);
  return f.h.diagonal().cwiseAbs().minCoeff() / g.norm();
}

}  // namespace

double distance(const CellTuple& a, const CellTuple& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double r = 0.0;
  for (size_t k = 0; k < a.size(); ++k) r = std::max(r, max_abs(Mat(a[k] - b[k])));
  return r;
}

double distance(const GdbcElement& a, const GdbcElement& b) {
  return std::max({distance(a.c, b.c), max_abs(Mat(a.b - b.b)), max_abs(Mat(a.bm - b.bm)), distance(a.cm, b.cm)});
}

Gdbc::Gdbc(int n, const std::vector<WeylWord>& u_words, const std::vector<WeylWord>& v_words,
           const std::vector<std::optional<Mat>>& u_reps, const std::vector<std::optional<Mat>>& v_reps)
    : n_(n), u_(n, u_words, u_reps), v_(n, v_words, v_reps), same_words_(u_words == v_words),
      db_(dual_borel_bases(n)) {
  if (n < 2) throw ConfigError("rank must be at least 2");
}

Gdbc::Gdbc(int n, const std::vector<WeylWord>& words) : Gdbc(n, words, words) {}

int Gdbc::ambient_dim() const { return u_.dim() + 2 * borel_dim(n_) + v_.dim(); }

Vec Gdbc::ambient(const GdbcElement& x) const {
  return concat({u_.coords(x.c), borel_coords(x.b, false), borel_coords(x.bm, true), v_.coords(x.cm)});
}

GdbcElement Gdbc::from_ambient(const Vec& a) const {
  const int dB = borel_dim(n_);
  GdbcElement x;
  x.c = u_.param(a.head(u_.dim()));
  x.b = borel_from_coords(a.segment(u_.dim(), dB), n_, false);
  x.bm = borel_from_coords(a.segment(u_.dim() + dB, dB), n_, true);
  x.cm = v_.param(a.tail(v_.dim()));
  return x;
}

int Gdbc::intrinsic_dim() const { return u_.dim() + v_.dim() + n_ - 1; }

GdbcElement Gdbc::from_intrinsic(const Vec& p) const {
  GdbcElement x;
  x.c = u_.param(p.head(u_.dim()));
  x.cm = v_.param(p.segment(u_.dim(), v_.dim()));
  const GaussFactors f1 = gauss_decompose(u_.product(x.c));
  const GaussFactors f2 = gauss_decompose(v_.product(x.cm));
  const Mat d = torus_from(p.tail(n_ - 1), n_);
  x.b = inv(f1.n) * d * f2.n;
  x.bm = f1.m * f1.h * d * inv(f2.h) * inv(f2.m);
  return x;
}

Vec Gdbc::intrinsic(const GdbcElement& x) const {
  return concat({u_.coords(x.c), v_.coords(x.cm), Vec(x.b.diagonal().head(n_ - 1))});
}

double Gdbc::invariant_residual(const GdbcElement& x) const {
  return max_abs(Mat(u_.product(x.c) * x.b - x.bm * v_.product(x.cm)));
}

void Gdbc::validate(const GdbcElement& x, double tol) const {
  const double scale = 1.0 + max_abs(x.b) + max_abs(x.bm);
  if (invariant_residual(x) > tol * scale * scale) throw InvariantViolation("c b differs from b_- c_-");
  if (u_.membership_residual(x.c) > tol * scale || v_.membership_residual(x.cm) > tol * scale) {
    throw InvariantViolation("tuple factor outside its cell");
  }
}

GdbcElement Gdbc::identity(const CellTuple& c) const {
  if (!same_words_) throw InvariantViolation("identity requires equal word sequences");
  return {c, dbc::identity(n_), dbc::identity(n_), c};
}

GdbcElement Gdbc::inverse(const GdbcElement& x) const {
  if (!same_words_) throw InvariantViolation("inverse requires equal word sequences");
  return {x.cm, inv(x.b), inv(x.bm), x.c};
}

GdbcElement Gdbc::mult(const GdbcElement& x1, const GdbcElement& x2, double tol) const {
  if (!same_words_) throw InvariantViolation("multiplication requires equal word sequences");
  if (distance(x1.cm, x2.c) > tol) throw NotComposable("target of the first factor differs from source of the second");
  return {x1.c, x1.b * x2.b, x1.bm * x2.bm, x2.cm};
}

GdbcElement Gdbc::act_gammaB(const GdbcElement& x, const GammaElement& g, double tol) const {
  if (max_abs(Mat(x.b - g.b)) > tol * (1.0 + max_abs(x.b))) throw NotComposable("mu_plus(x) differs from b");
  const BorelActionResult r1 = u_.act_bminus(x.c, g.u_prime);
  const BorelActionResult r2 = v_.act_bminus(x.cm, g.u);
  return {r1.cells, g.b_prime, inv(r1.cocycle) * x.bm * r2.cocycle, r2.cells};
}

GdbcElement Gdbc::act_gammaBminus(const GdbcElement& x, const GammaElement& g, double tol) const {
  if (max_abs(Mat(x.bm - g.u)) > tol * (1.0 + max_abs(x.bm))) throw NotComposable("mu_minus(x) differs from u");
  const BorelActionResult r1 = u_.act_b(g.b, x.c);
  const BorelActionResult r2 = v_.act_b(g.b_prime, x.cm);
  return {r1.cells, r1.cocycle * x.b * inv(r2.cocycle), g.u_prime, r2.cells};
}

Vec Gdbc::sample_intrinsic(Rng& rng, const std::optional<CellTuple>& source, double scale) const {
  for (int attempt = 0; attempt < kSampleAttempts; ++attempt) {
    const Vec t = source ? u_.coords(*source) : random_cvec(rng, u_.dim(), scale);
    const Vec s = random_cvec(rng, v_.dim(), scale);
    const Vec dlog = random_cvec(rng, n_ - 1, 0.3);
    Vec d(n_ - 1);
    for (int i = 0; i + 1 < n_; ++i) d(i) = std::exp(dlog(i));
    try {
      const double p1 = min_relative_pivot(u_.product(u_.param(t)));
      const double p2 = min_relative_pivot(v_.product(v_.param(s)));
      if ((source || p1 >= kSamplePivot) && p2 >= kSamplePivot) return concat({t, s, d});
    } catch (const NotInOpenCell&) {
    }
  }
  throw NotInOpenCell("no well-conditioned sample found");
}

GdbcElement Gdbc::sample_near_identity(Rng& rng, const std::optional<CellTuple>& source, double spread,
                                       double scale) const {
  if (!same_words_) throw InvariantViolation("identity bisection requires equal word sequences");
  for (int attempt = 0; attempt < kSampleAttempts; ++attempt) {
    const Vec t = source ? u_.coords(*source) : random_cvec(rng, u_.dim(), scale);
    const Vec s = t + random_cvec(rng, v_.dim(), spread);
    const Vec dlog = random_cvec(rng, n_ - 1, spread);
    Vec d(n_ - 1);
    for (int i = 0; i + 1 < n_; ++i) d(i) = std::exp(dlog(i));
    try {
      const double p1 = min_relative_pivot(u_.product(u_.param(t)));
      const double p2 = min_relative_pivot(v_.product(v_.param(s)));
      if ((source || p1 >= kSamplePivot) && p2 >= kSamplePivot) {
        GdbcElement x = from_intrinsic(concat({t, s, d}));
        const Mat e = dbc::identity(n_);
        if (max_abs(Mat(x.b - e)) <= kMomentRadius && max_abs(Mat(x.bm - e)) <= kMomentRadius) return x;
      }
    } catch (const NotInOpenCell&) {
    }
  }
  throw NotInOpenCell("no sample near the identity bisection found");
}

GdbcElement Gdbc::sample(Rng& rng, const std::optional<CellTuple>& source, double scale) const {
  return from_intrinsic(sample_intrinsic(rng, source, scale));
}

Mat Gdbc::pi_ambient(const GdbcElement& x) const {
  const int lu = u_.dim();
  const int lv = v_.dim();
  const int dB = borel_dim(n_);
  const int dim = ambient_dim();
  const int off[4] = {0, lu, lu + dB, lu + 2 * dB};
  auto embed = [&](int slot, const Vec& v) {
    Vec out = Vec::Zero(dim);
    out.segment(off[slot], v.size()) = v;
    return out;
  };
  const Mat pin_c = lu ? u_.pi_n_at(x.c).coeffs : Mat(Mat::Zero(0, 0));
  const Mat pin_cm = lv ? v_.pi_n_at(x.cm).coeffs : Mat(Mat::Zero(0, 0));
  Mat p = block_diag({pin_c, pi_st_borel(x.b, false), pi_st_borel(x.bm, true), Mat(-pin_cm)});
  for (size_t i = 0; i < db_.x.size(); ++i) {
    const Mat& xv = db_.x[i];
    const Mat& xi = db_.xi[i];
    const Vec rho_c = lu ? u_.rho(x.c, xi) : Vec(Vec::Zero(0));
    const Vec lam_c = lu ? u_.lambda(x.c, xv) : Vec(Vec::Zero(0));
    const Vec rho_cm = lv ? v_.rho(x.cm, xi) : Vec(Vec::Zero(0));
    const Vec lam_cm = lv ? v_.lambda(x.cm, xv) : Vec(Vec::Zero(0));
    const Mat bco = lu ? u_.cocycle_b_derivative(x.c, xv) : Mat(Mat::Zero(n_, n_));
    const Mat bmco = lv ? v_.cocycle_bm_derivative(x.cm, xi) : Mat(Mat::Zero(n_, n_));
    p -= kMixedScale * wedge(embed(0, rho_c), embed(1, borel_coords(xv * x.b, false)));
    p += kMixedScale * wedge(embed(2, borel_coords(x.bm * xi, true)), embed(3, lam_cm));
    p -= kMixedScale * wedge(embed(0, lam_c) + embed(1, borel_coords(bco * x.b, false)),
                             embed(2, borel_coords(xi * x.bm, true)));
    p += kMixedScale * wedge(embed(1, borel_coords(x.b * xv, false)),
                             embed(2, borel_coords(x.bm * bmco, true)) + embed(3, rho_cm));
  }
  return p;
}

Bivector Gdbc::pi_uv_at(const GdbcElement& x) const { return Bivector("gdbc:ambient", pi_ambient(x)); }

Bivector Gdbc::pi_intrinsic_at(const GdbcElement& x) const {
  auto chart = [&](const Vec& p) { return ambient(from_intrinsic(p)); };
  const Mat t = numeric_jacobian(chart, intrinsic(x));
  const Mat tp = t.completeOrthogonalDecomposition().pseudoInverse();
  return Bivector("gdbc:intrinsic", tp * pi_ambient(x) * tp.transpose());
}

double Gdbc::tangency_residual(const GdbcElement& x) const {
  auto chart = [&](const Vec& p) { return ambient(from_intrinsic(p)); };
  const Mat t = numeric_jacobian(chart, intrinsic(x));
  const Mat p = pi_ambient(x);
  Eigen::JacobiSVD<Mat> svd_t(t, Eigen::ComputeFullU);
  const Mat q = svd_t.matrixU().leftCols(t.cols());
  const Mat normal = Mat::Identity(t.rows(), t.rows()) - q * q.adjoint();
  Eigen::JacobiSVD<Mat> svd_c(Mat(t.transpose()), Eigen::ComputeFullV);
  const Mat conormals = svd_c.matrixV().rightCols(t.rows() - t.cols());
  return max_abs(Mat(normal * p.transpose() * conormals)) / (1.0 + max_abs(p));
}

double Gdbc::product_map_residual(const GdbcElement& x) const {
  auto f = [&](const Vec& a) {
    const GdbcElement y = from_ambient(a);
    return vec(u_.product(y.c) * y.b);
  };
  const Mat g = u_.product(x.c) * x.b;
  return poisson_map_residual(f, ambient(x), pi_ambient(x), pi_st_at(g), 1.0);
}

std::pair<double, double> Gdbc::base_pushforward_residuals(const GdbcElement& x) const {
  const Mat p = pi_ambient(x);
  const int lu = u_.dim();
  const int lv = v_.dim();
  const Mat src = p.topLeftCorner(lu, lu);
  const Mat tgt = p.bottomRightCorner(lv, lv);
  const Mat pin_c = u_.pi_n_at(x.c).coeffs;
  const Mat pin_cm = v_.pi_n_at(x.cm).coeffs;
  const double r1 = max_abs(Mat(src - pin_c)) / (1.0 + max_abs(pin_c));
  const double r2 = max_abs(Mat(tgt + pin_cm)) / (1.0 + max_abs(pin_cm));
  return {r1, r2};
}

int Gdbc::pair_param_dim() const { return intrinsic_dim() + v_.dim() + n_ - 1; }

std::pair<GdbcElement, GdbcElement> Gdbc::composable_pair(const Vec& q) const {
  const int lu = u_.dim();
  const int lv = v_.dim();
  const int d1 = intrinsic_dim();
  const Vec p1 = q.head(d1);
  const Vec p2 = concat({Vec(p1.segment(lu, lv)), Vec(q.segment(d1, lv)), Vec(q.tail(n_ - 1))});
  return {from_intrinsic(p1), from_intrinsic(p2)};
}

double Gdbc::multiplication_coisotropy(const Vec& q) const {
  auto graph = [&](const Vec& v) {
    auto [x1, x2] = composable_pair(v);
    const GdbcElement x12{x1.c, x1.b * x2.b, x1.bm * x2.bm, x2.cm};
    return concat({intrinsic(x1), intrinsic(x2), intrinsic(x12)});
  };
  auto [x1, x2] = composable_pair(q);
  const GdbcElement x12 = mult(x1, x2, 1e-6);
  const Mat p3 = block_diag({pi_intrinsic_at(x1).coeffs, pi_intrinsic_at(x2).coeffs,
                             Mat(-pi_intrinsic_at(x12).coeffs)});
  return coisotropy_residual(graph, q, p3);
}

DiracResiduals Gdbc::dirac_residuals(const GdbcElement& x, ActionSide side, Rng& rng) const {
  const int dB = borel_dim(n_);
  const int lu = u_.dim();
  const Vec a0 = ambient(x);
  const Mat p = pi_ambient(x);
  DiracResiduals out;
  const Vec e_b = borel_coords(dbc::identity(n_), false);
  const Vec e_bm = borel_coords(dbc::identity(n_), true);

  if (side == ActionSide::B) {
    const Mat b = x.b;
    auto mu = [&](const Vec& a) { return Vec(a.segment(lu, dB)); };
    for (const Mat& xi : db_.xi) {
      const Vec field = dressing_field(mu, false, p, xi, a0, Side::Left);
      auto curve = [&](const Vec& s) { return ambient(act_gammaB(x, gamma_lower(b, expm(s(0) * xi)))); };
      const Vec fd = numeric_jacobian(curve, Vec::Zero(1)).col(0);
      out.r1 = std::max(out.r1, max_abs(Vec(field - kMixedScale * fd)) / (1.0 + max_abs(Vec(kMixedScale * fd))));
    }
    const Mat u = random_borel(rng, n_, true, 0.3);
    const GammaElement g = gamma_lower(b, u);
    const Mat lhs = pi_ambient(act_gammaB(x, g));
    auto right_gamma = [&](const Vec& w) {
      return concat({Vec(w.head(dB)), borel_coords(borel_from_coords(w.tail(dB), n_, true) * u, true)});
    };
    const Mat base = pushforward(right_gamma, concat({borel_coords(b, false), e_bm}),
                                 pi_gamma_at(gamma_lower(b, dbc::identity(n_))).coeffs);
    const Mat delta = base - pi_gamma_at(g).coeffs;
    const double leak = max_abs(Mat(delta.topRows(dB)));
    auto left_y = [&](const Vec& w) {
      return ambient(act_gammaB(x, gamma_lower(b, borel_from_coords(w, n_, true))));
    };
    const Mat t1 = pushforward(left_y, borel_coords(u, true), delta.bottomRightCorner(dB, dB));
    auto right_y = [&](const Vec& a) {
      const GdbcElement y = from_ambient(a);
      return ambient(act_gammaB(y, gamma_lower(y.b, u), 1e-6));
    };
    const Mat t2 = pushforward(right_y, a0, p);
    out.r2 = std::max(leak, max_abs(Mat(lhs - t1 - t2))) / (1.0 + max_abs(lhs));
  } else {
    const Mat bm = x.bm;
    auto mu = [&](const Vec& a) { return Vec(a.segment(lu + dB, dB)); };
    for (const Mat& xv : db_.x) {
      const Vec field = dressing_field(mu, true, p, xv, a0, Side::Right);
      auto curve = [&](const Vec& s) { return ambient(act_gammaBminus(x, gamma_lower(expm(s(0) * xv), bm))); };
      const Vec fd = numeric_jacobian(curve, Vec::Zero(1)).col(0);
      out.r1 = std::max(out.r1, max_abs(Vec(field - kMixedScale * fd)) / (1.0 + max_abs(Vec(kMixedScale * fd))));
    }
    const Mat g_up = random_borel(rng, n_, false, 0.3);
    const GammaElement g = gamma_lower(g_up, bm);
    const Mat lhs = pi_ambient(act_gammaBminus(x, g));
    auto right_gamma = [&](const Vec& w) {
      return concat({borel_coords(g_up * borel_from_coords(w.head(dB), n_, false), false), Vec(w.tail(dB))});
    };
    const Mat base = pushforward(right_gamma, concat({e_b, borel_coords(bm, true)}),
                                 Mat(-pi_gamma_at(gamma_lower(dbc::identity(n_), bm)).coeffs));
    const Mat delta = base + pi_gamma_at(g).coeffs;
    const double leak = max_abs(Mat(delta.bottomRows(dB)));
    auto left_y = [&](const Vec& w) {
      return ambient(act_gammaBminus(x, gamma_lower(borel_from_coords(w, n_, false), bm)));
    };
    const Mat t1 = pushforward(left_y, borel_coords(g_up, false), delta.topLeftCorner(dB, dB));
    auto right_y = [&](const Vec& a) {
      const GdbcElement y = from_ambient(a);
      return ambient(act_gammaBminus(y, gamma_lower(g_up, y.bm), 1e-6));
    };
    const Mat t2 = pushforward(right_y, a0, p);
    out.r2 = std::max(leak, max_abs(Mat(lhs - t1 - t2))) / (1.0 + max_abs(lhs));
  }
  return out;
}

}  // namespace dbc
