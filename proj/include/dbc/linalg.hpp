#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "dbc/errors.hpp"

namespace dbc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// A map between complex chart coordinates.
using ChartMap = std::function<Vec(const Vec&)>;

struct GaussFactors {
  Mat m;  // unit lower triangular
  Mat h;  // diagonal
  Mat n;  // unit upper triangular
};

// Factor g = m h n by elimination without pivoting. Throws NotInOpenCell when a
// pivot has modulus at most rel_tol * ||g||.
GaussFactors gauss_decompose(const Mat& g, double rel_tol = 1e-9);

// Factor g = n h m with n unit upper, h diagonal, m unit lower triangular.
GaussFactors gauss_decompose_ul(const Mat& g, double rel_tol = 1e-9);

// Square root of a diagonal matrix with unit determinant. Among the sign
// patterns of the entrywise principal roots whose product is 1, the pattern
// nearest to `hint` is returned (the principal roots when no hint is given).
Mat torus_sqrt(const Mat& t, const std::optional<Mat>& hint = std::nullopt);

// Central-difference Jacobian of f at x. Any library error raised while
// probing is reported as DomainEscape.
Mat numeric_jacobian(const ChartMap& f, const Vec& x, double step = 1e-6);

// Central-difference derivative of a matrix-valued curve at s = 0.
Mat curve_derivative(const std::function<Mat(double)>& f, double step = 1e-6);

// Row-major flattening of a square matrix and its inverse.
Vec vec(const Mat& m);
Mat unvec(const Vec& v, int n);

// Full wedge a (x) b - b (x) a as a coefficient matrix.
Mat wedge(const Vec& a, const Vec& b);

Mat block_diag(const std::vector<Mat>& blocks);
Vec concat(const std::vector<Vec>& parts);

Mat diag_part(const Mat& m);
Mat identity(int n);
Mat elementary(int n, int i, int j);
Mat expm(const Mat& x);
Mat product(const std::vector<Mat>& factors, int n);

double max_abs(const Mat& m);
double max_abs(const Vec& v);

// Entries of v selected by index list, and the adjoint operation on matrices.
Vec select(const Vec& v, const std::vector<int>& idx);
Mat select(const Mat& m, const std::vector<int>& idx);

using Rng = std::mt19937_64;

// Engine keyed by (seed, stream, index) so that each sample draws from its own
// deterministic stream.
Rng keyed_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Complex vector with independent standard normal real and imaginary parts, scaled.
Vec random_cvec(Rng& rng, int size, double scale);

// Random unit-determinant upper (or lower) triangular matrix near the identity.
Mat random_borel(Rng& rng, int n, bool lower, double scale = 0.3);

// Restore exact antisymmetry: (P - P^T) / 2.
Mat antisymmetrize(const Mat& p);

}  // namespace dbc
