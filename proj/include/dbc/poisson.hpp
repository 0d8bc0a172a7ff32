#pragma once

#include <string>
#include <vector>

#include "dbc/double_groupoid.hpp"

namespace dbc {

// Antisymmetric coefficient matrix of a bivector in a named chart. The
// contraction convention is pi^sharp(alpha) = coeffs^T alpha.
struct Bivector {
  std::string chart;
  Mat coeffs;

  Bivector() = default;
  Bivector(std::string c, const Mat& m) : chart(std::move(c)), coeffs(antisymmetrize(m)) {}
  int dim() const { return static_cast<int>(coeffs.rows()); }
};

using BivectorField = std::function<Mat(const Vec&)>;

// Coefficient multiplier of every mixed term and of the identification
// between pi^sharp of invariant forms and dressing derivatives.
inline constexpr double kMixedScale = 2.0;

// Lambda_st^L - Lambda_st^R at g in row-major matrix-entry coordinates.
Mat pi_st_at(const Mat& g);

// pi_st restricted to B or B_- in their Borel charts.
Mat pi_st_borel(const Mat& b, bool lower);

// pi_Gamma in the (b, u) chart: (pi_st|B, -pi_st|B_-) - 2 sum_i (b x_i) ^ (xi^i u).
Bivector pi_gamma_at(const GammaElement& g);

// pi_Gamma in the (u', b') chart.
Bivector pi_gamma_right_chart(const GammaElement& g);

// Charts of Gamma through p_L = (b, u) and p_R = (u', b').
Vec gamma_left_coords(const GammaElement& g);
Vec gamma_right_coords(const GammaElement& g);
GammaElement gamma_from_left_coords(const Vec& v, int n);
GammaElement gamma_from_right_coords(const Vec& v, int n);

// Pi^+_D = Lambda^L + Lambda^R at d in the chart (vec(g), diag(t)).
Mat pi_plus_double_at(const DoubleElement& d);

// (pi_Y, pi_Z) - sum_i (rho_i, 0) ^ (0, lambda_i).
Mat mixed_product(const Mat& pi_y, const Mat& pi_z, const std::vector<Vec>& rho_vecs,
                  const std::vector<Vec>& lambda_vecs);

Mat pushforward(const ChartMap& f, const Vec& x, const Mat& coeffs, double step = 1e-6);

double poisson_map_residual(const ChartMap& f, const Vec& x, const Mat& src_pi, const Mat& dst_pi,
                            double sign, double step = 1e-6);

struct CoisotropyOptions {
  double rank_tol = 1e-8;
  // Conormal covectors whose image under pi^sharp is below this fraction of
  // ||pi|| ||nu|| are measured against that floor.
  double relative_floor = 1e-3;
};

double coisotropy_residual(const ChartMap& graph_param, const Vec& q, const Mat& ambient_pi,
                           const CoisotropyOptions& opts = {});

// Max modulus of the Schouten bracket [pi, pi] by central differences with one
// Richardson step, normalized by ||pi||^2 + 1.
double jacobi_residual(const BivectorField& pi, const Vec& x, double step = 1e-5);

// pi^sharp(mu^* xi^L) (left) or pi^sharp(mu^* xi^R) (right) at y, where mu
// maps into the Borel chart of B (lower = false) or B_- (lower = true) and xi
// is an element of the dual Borel algebra.
enum class Side { Left, Right };
Vec dressing_field(const ChartMap& mu, bool lower, const Mat& pi_y, const Mat& xi, const Vec& y, Side side,
                   double step = 1e-6);

}  // namespace dbc
