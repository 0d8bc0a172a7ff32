#pragma once

#include <utility>
#include <vector>

#include "dbc/linalg.hpp"

namespace dbc {

using Root = std::pair<int, int>;       // positive root e_i - e_j, 0-based, i < j
using WeylWord = std::vector<int>;      // simple reflections, 1-based letters
using WedgePairs = std::vector<std::pair<Mat, Mat>>;

// Positive roots of sl_n in lexicographic order.
std::vector<Root> positive_roots(int n);

struct LieBasis {
  int n = 0;
  std::vector<Root> roots;
  std::vector<Mat> e_pos;    // E_alpha = E_ij
  std::vector<Mat> e_neg;    // E_{-alpha} = E_ji
  std::vector<Mat> cartan;   // H_i with 2 tr(H_i H_j) = delta_ij
};

LieBasis lie_basis(int n);

struct DualBorelBases {
  std::vector<Mat> x;   // basis of b: {-E_alpha} then {-H_i}
  std::vector<Mat> xi;  // dual basis of b_-: {E_{-alpha}} then {H_i}
};

DualBorelBases dual_borel_bases(int n);

// <x, y> = -tr(x_+ y_-) - 2 tr(x_0 y_0) for x in b, y in b_-.
cplx pairing_b_bminus(const Mat& x, const Mat& y);

// Trace form of the defining representation.
cplx trace_form(const Mat& x, const Mat& y);

// Lambda_st = sum over positive roots of E_{-alpha} ^ E_alpha.
WedgePairs standard_r_matrix(int n);

// Lambda = sum_i (xi^i, 0) ^ (0, x_i), returned as the pairs (xi^i, x_i).
WedgePairs mixed_r_term(int n);

Mat simple_representative(int n, int i);
Mat weyl_representative(const WeylWord& w, int n);
void validate_word(const WeylWord& w, int n);

// Coordinates on B (upper) and B_- (lower) with unit determinant: diagonal
// entries 0..n-2 followed by the off-diagonal entries in positive-root order.
int borel_dim(int n);
std::vector<int> borel_indices(int n, bool lower);
Vec borel_coords(const Mat& b, bool lower);
Mat borel_from_coords(const Vec& v, int n, bool lower);

}  // namespace dbc
