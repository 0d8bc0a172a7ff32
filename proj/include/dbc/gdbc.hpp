#pragma once

#include <optional>
#include <utility>

#include "dbc/cells.hpp"

namespace dbc {

// Quadruple ([c], b, b_-, [c_-]) with c b = b_- c_- (products of the tuples).
struct GdbcElement {
  CellTuple c;
  Mat b;
  Mat bm;
  CellTuple cm;
};

struct DiracResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
};

enum class ActionSide { B, Bminus };

class Gdbc {
 public:
  Gdbc(int n, const std::vector<WeylWord>& u_words, const std::vector<WeylWord>& v_words,
       const std::vector<std::optional<Mat>>& u_reps = {}, const std::vector<std::optional<Mat>>& v_reps = {});
  // Groupoid case u = v.
  Gdbc(int n, const std::vector<WeylWord>& words);

  int n() const { return n_; }
  const TupleChart& u_chart() const { return u_; }
  const TupleChart& v_chart() const { return v_; }
  bool is_groupoid() const { return same_words_; }

  // Ambient chart: cell coords (u) + B coords + B_- coords + cell coords (v).
  int ambient_dim() const;
  Vec ambient(const GdbcElement& x) const;
  GdbcElement from_ambient(const Vec& a) const;

  // Intrinsic Gauss chart (t, s, d): c = C_u(t), c_- = C_v(s), diag(b) = d.
  int intrinsic_dim() const;
  GdbcElement from_intrinsic(const Vec& p) const;
  Vec intrinsic(const GdbcElement& x) const;

  double invariant_residual(const GdbcElement& x) const;
  void validate(const GdbcElement& x, double tol = 1e-8) const;

  const CellTuple& source(const GdbcElement& x) const { return x.c; }
  const CellTuple& target(const GdbcElement& x) const { return x.cm; }
  GdbcElement identity(const CellTuple& c) const;
  GdbcElement inverse(const GdbcElement& x) const;
  GdbcElement mult(const GdbcElement& x1, const GdbcElement& x2, double tol = 1e-9) const;

  const Mat& mu_plus(const GdbcElement& x) const { return x.b; }
  const Mat& mu_minus(const GdbcElement& x) const { return x.bm; }

  // Right actions of Gamma_B (moment mu_plus) and Gamma_{B_-} (moment mu_minus).
  GdbcElement act_gammaB(const GdbcElement& x, const GammaElement& g, double tol = 1e-9) const;
  GdbcElement act_gammaBminus(const GdbcElement& x, const GammaElement& g, double tol = 1e-9) const;

  // Random element near the cell origins; `source` fixes the first tuple.
  GdbcElement sample(Rng& rng, const std::optional<CellTuple>& source = std::nullopt, double scale = 0.5) const;
  Vec sample_intrinsic(Rng& rng, const std::optional<CellTuple>& source = std::nullopt, double scale = 0.5) const;

  // Random element near the identity bisection: c_- = C(t + delta) and
  // diag(b) = exp(delta') for small delta, delta', kept only when both moments
  // lie within 0.5 of e in max-abs norm.
  GdbcElement sample_near_identity(Rng& rng, const std::optional<CellTuple>& source = std::nullopt,
                                   double spread = 0.1, double scale = 0.5) const;

  // pi_{u,v} in the ambient chart and pulled back to the intrinsic chart.
  Bivector pi_uv_at(const GdbcElement& x) const;
  Bivector pi_intrinsic_at(const GdbcElement& x) const;

  // Tangency of pi_{u,v} to the submanifold at x.
  double tangency_residual(const GdbcElement& x) const;
  // Pushforward of pi_{u,v} through x -> c b against pi_st.
  double product_map_residual(const GdbcElement& x) const;
  // Source pushes to pi_n and target to -pi_n.
  std::pair<double, double> base_pushforward_residuals(const GdbcElement& x) const;

  // Composable pair (x1, x2) in the Gauss chart: q = (p1, s2, d2) with t2 = s1.
  int pair_param_dim() const;
  std::pair<GdbcElement, GdbcElement> composable_pair(const Vec& q) const;
  double multiplication_coisotropy(const Vec& q) const;

  // Residuals relative to 1 + max-abs of the reference field or bivector.
  DiracResiduals dirac_residuals(const GdbcElement& x, ActionSide side, Rng& rng) const;

 private:
  Mat pi_ambient(const GdbcElement& x) const;

  int n_;
  TupleChart u_;
  TupleChart v_;
  bool same_words_;
  DualBorelBases db_;
};

double distance(const CellTuple& a, const CellTuple& b);
double distance(const GdbcElement& a, const GdbcElement& b);

}  // namespace dbc
