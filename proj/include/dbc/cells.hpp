#pragma once

#include <optional>
#include <vector>

#include "dbc/poisson.hpp"

namespace dbc {

using CellTuple = std::vector<Mat>;

// Chart of the cell C_u = N u N_- ^ ... realized as exp(sum t_k E_{alpha_k}) w.
class CellChart {
 public:
  CellChart(int n, WeylWord word, std::optional<Mat> representative = std::nullopt);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(inversion_roots_.size()); }
  const WeylWord& word() const { return word_; }
  const Mat& representative() const { return w_; }
  const std::vector<Root>& inversion_roots() const { return inversion_roots_; }

  Mat param(const Vec& t) const;
  Vec coords(const Mat& c) const;

  // Residual of membership in N w and in w N_-.
  double membership_residual(const Mat& c) const;

  // g = c b with c in the cell and b upper triangular. With check = false the
  // Gauss-based extension off B u B is returned without the membership test.
  std::pair<Mat, Mat> factor_BuB(const Mat& g, bool check = true) const;
  // g = b_- c with b_- lower triangular and c in the cell.
  std::pair<Mat, Mat> factor_BminusUBminus(const Mat& g, bool check = true) const;

 private:
  int n_;
  WeylWord word_;
  Mat w_;
  Mat w_inv_;
  std::vector<Root> inversion_roots_;
};

struct BorelActionResult {
  CellTuple cells;
  Mat cocycle;
};

// Product chart C_{u_1} x ... x C_{u_k} for a sequence of Weyl words.
class TupleChart {
 public:
  TupleChart(int n, const std::vector<WeylWord>& words,
             const std::vector<std::optional<Mat>>& representatives = {});

  int n() const { return n_; }
  int dim() const { return dim_; }
  int length() const { return static_cast<int>(charts_.size()); }
  const std::vector<CellChart>& charts() const { return charts_; }
  std::vector<WeylWord> words() const;

  CellTuple param(const Vec& t) const;
  Vec coords(const CellTuple& c) const;
  Mat product(const CellTuple& c) const;
  double membership_residual(const CellTuple& c) const;

  // b c = b[c] b_u(b, c) through the left sweep of Bruhat factorizations.
  BorelActionResult act_b(const Mat& b, const CellTuple& c, bool check = true) const;
  // c b_- = b_{-u}(b_-, c) c^{b_-} through the right sweep.
  BorelActionResult act_bminus(const CellTuple& c, const Mat& bm, bool check = true) const;

  // Infinitesimal actions and cocycles along one-parameter subgroups.
  Vec rho(const CellTuple& c, const Mat& xi) const;      // d/ds c^{exp(s xi)}
  Vec lambda(const CellTuple& c, const Mat& x) const;    // d/ds exp(s x)[c]
  Mat cocycle_b_derivative(const CellTuple& c, const Mat& x) const;    // d/ds b_u(exp(s x), c)
  Mat cocycle_bm_derivative(const CellTuple& c, const Mat& xi) const;  // d/ds b_{-u}(exp(s xi), c)

  // pi_n: pushforward of the product of pi_st through the left sweep.
  Bivector pi_n_at(const CellTuple& c) const;
  // Same bivector computed through the right sweep (the second quotient).
  Bivector pi_n_prime_at(const CellTuple& c) const;

 private:
  int n_;
  int dim_;
  std::vector<CellChart> charts_;
};

// Identity on representatives: the chart change between the two quotients.
inline CellTuple I_u(const CellTuple& c) { return c; }

// Residual of the identity (J^+)^{-1}: pi_st^k lifted through (c_1, ..., c_k b)
// equals the mixed product of pi_n and pi_st|_B.
double j_plus_residual(const TupleChart& chart, const CellTuple& c, const Mat& b);
// Residual of the mirror identity for (b_- c_1, ..., c_k).
double j_minus_residual(const TupleChart& chart, const CellTuple& c, const Mat& bm);

}  // namespace dbc
