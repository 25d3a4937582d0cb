#pragma once
// Low-weight Fourier approximation machinery: powers of the normalized
// arcsine, the assembled trigonometric series, and sub-stochastic matrix
// powering (the randomized route to the same table entries).

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qsvt/chebyshev.hpp"

namespace qsvt {

// Coefficients of (arcsin(y) / (pi/2))^k = sum_l b[k][l] y^l, truncated at
// power L.  Row 0 is the constant function (1, 0, ...).  Every row of the
// untruncated series sums to 1; `tail[k]` records the mass lost to the
// truncation so that row_sum(k) + tail[k] = 1 holds exactly by construction
// (this is the absorbing-node mass of the associated sub-stochastic walk).
struct ArcsinPowerTable {
  std::vector<std::vector<double>> b;  // b[k][l], k = 0..K, l = 0..L
  std::vector<double> tail;            // tail[k] = 1 - sum_l b[k][l]
  int K = 0;
  int L = 0;
};

// Row 1 from the closed form b^{(1)}_l = binom(l-1,(l-1)/2) 2^{-l+1}/l * 2/pi
// (odd l; zero otherwise); row k from row k-2 via the recurrence
// l(l-1) b^{(k)}_l = (l-2)^2 b^{(k)}_{l-2} + (2/pi)^2 k(k-1) b^{(k-2)}_{l-2},
// truncated at L.  All terms are nonnegative, so the recurrence is stable.
ArcsinPowerTable arcsin_power_table(int K, int L);

// Trigonometric series sum_m c_even[m] cos(pi x m) + c_odd[m] sin(pi x (m+1/2)),
// m = -M..M (stored with offset M).
struct FourierSeries {
  std::vector<double> c_even;  // index m + M
  std::vector<double> c_odd;   // index m + M
  int M = 0;
  double delta = 0.0;  // interval margin: valid on [-1+delta, 1-delta]

  double evaluate(double x) const;
  double l1_norm() const;
  bool empty() const { return c_even.empty(); }
};

// Low-weight Fourier approximation of f(x) = sum_k a_k x^k to accuracy eps on
// [-1+delta, 1-delta], with M = max(2 ceil(delta^-1 ln(4||a||_1/eps)), 0) and
// L = ceil(delta^-2 ln(4||a||_1/eps)).  Returns the empty series when
// ||a||_1 < eps/2.  `parity` declares the expected zero pattern of `a` and is
// validated against it (Parity::none accepts anything).
FourierSeries fourier_low_weight(const std::vector<double>& a, double delta,
                                 double eps, Parity parity);

// Upper-triangular nonnegative matrix with row sums < 1.
struct SubStochasticMatrix {
  Eigen::MatrixXd entries;
  int bit_precision = 53;

  void validate() const;  // throws ValidationError on invariant violation
};

// B^k[s, t] (1-based indices, per the lemma) by repeated multiplication.
double substochastic_power_exact(const SubStochasticMatrix& B, int k, int s, int t);

// Empirical acceptance frequency of the k-step random walk on the augmented
// row-stochastic chain (extra absorbing node receiving the missing row mass).
double substochastic_power_walk(const SubStochasticMatrix& B, int k, int s, int t,
                                std::int64_t samples, std::uint64_t seed);

}  // namespace qsvt
