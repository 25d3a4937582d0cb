#pragma once
// Chebyshev-basis polynomials and the averaged (de La Vallee Poussin)
// truncation machinery.
//
// A ChebyshevPoly stores coefficients chat_0..chat_{d'} with the convention
//   P(x) = chat_0 / 2 + sum_{k>=1} chat_k T_k(x),
// and the l1 norm convention ||chat||_1 = sum_{k=0}^{d'} |chat_k|.

#include <cstdint>
#include <functional>
#include <vector>

namespace qsvt {

enum class Parity { odd, even, none };

struct ChebyshevPoly {
  std::vector<double> coeffs;      // chat_k, k = 0..degree
  std::vector<double> raw_coeffs;  // pre-averaging c_k when known, else empty
  int degree = 0;                  // d'
  Parity parity = Parity::none;
  double l1_norm = 0.0;        // sum_k |chat_k|

  // Weight the LCU implementation assigns to the polynomial: the constant
  // term enters with weight |chat_0|/2 because T_0/2 is realized as an
  // identity-block unitary of weight chat_0/2.
  double lcu_weight() const;

  // Recomputes l1_norm from coeffs (call after editing coefficients).
  void refresh();
};

// Builds a ChebyshevPoly from raw coefficients, inferring parity from the
// zero pattern (tolerance 0: parity is declared only when exact).
ChebyshevPoly make_poly(std::vector<double> coeffs);

// chat_0/2 + sum chat_k T_k(x) by Clenshaw recurrence.  Requires |x| <= 1
// (a 1e-12 tolerance absorbs roundoff at the endpoints).
double eval_cheb(const ChebyshevPoly& P, double x);

// Chebyshev coefficient c_k = (2/pi) Int_{-pi}^{0} cos(k t) f(cos t) dt by
// the composite trapezium rule with m intervals.  Throws ValidationError on
// non-finite evaluator values.
double chebyshev_coeff(const std::function<double(double)>& f, int k, int m);

// All coefficients c_0..c_kmax from one set of shared trapezium samples with
// m intervals.  Values are identical (up to roundoff) to calling
// chebyshev_coeff per k; the samples are reused and the cosine sums are
// evaluated by an FFT-based DCT-I, so the cost is O(m log m) instead of
// O(k_max * m).  Requires m to be a power of two.
std::vector<double> chebyshev_coeffs_batch(const std::function<double(double)>& f,
                                           int kmax, int m);

// Adaptive variant: doubles m (from m0) until the coefficient estimates of
// two successive rounds differ by less than tol in max norm, capped at 2^24
// intervals.  Returns the converged batch c_0..c_kmax.
std::vector<double> chebyshev_coeffs_adaptive(const std::function<double(double)>& f,
                                              int kmax, double tol, int m0 = 1024);

// Averaged Chebyshev truncation: given c_0..c_{2d-1} of f, returns the
// degree-(2d-1) polynomial with
//   chat_k = c_k                  for 0 <= k <= d,
//   chat_k = ((2d - k) / d) c_k   for d <  k <= 2d-1,
// i.e. the arithmetic mean of the plain truncations of degrees d..2d-1.
ChebyshevPoly averaged_truncation(const std::vector<double>& c, int d);

// Maximum of |P| over a uniform grid of n points on [-1, 1] (endpoints
// included).
double grid_max_abs(const ChebyshevPoly& P, int n = 10001);

// Maximum of |P - f| over the grid points of [lo, hi].
double grid_max_err(const ChebyshevPoly& P, const std::function<double(double)>& f,
                    double lo, double hi, int n = 10001);

// In-place rescale by 1/(1 + eta) with eta = max(0, grid overshoot beyond 1),
// mirroring the paper's normalization step.  Returns eta.
double enforce_bounded(ChebyshevPoly& P, int grid_n = 40001);

}  // namespace qsvt
