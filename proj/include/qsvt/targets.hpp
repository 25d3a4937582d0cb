#pragma once
// Explicit bounded polynomial approximations: sign, logarithm, and the
// generic piecewise-smooth construction they are built from.

#include <functional>
#include <string>
#include <vector>

#include "qsvt/chebyshev.hpp"

namespace qsvt {

// Calibrated constants of the "C, C-hat, C-tilde" form used by the schedule
// layer: for each target family, |approx error| <= C * eps, l1 norm of the
// averaged coefficients <= C_hat, and degree <= C_tilde * (scale) * log2(1/eps).
// Values fixed by the one-time calibration sweep (tools/calibrate.cpp); see
// the README for the sweep grid.
struct ApproxConstants {
  // Sweep maxima (delta in [0.025, 0.4], beta in [0.02, 0.3], eps in
  // [1e-4, 1e-2]): err/eps 0.034 (sign) / 0.002 (log), l1 4.56 / 1.13,
  // degree*scale/log2(1/eps) 4.73 / 39.4.  Error multipliers keep the
  // proved/conservative values; the others are the sweep maxima rounded up.
  double c_sgn = 5.0;        // error multiplier of sign_poly (proved)
  double chat_sgn = 5.0;     // max l1 norm over the sign sweep
  double ctilde_sgn = 5.0;   // degree ~ ctilde_sgn / delta * log2(1/eps)
  double c_ln = 1.0;         // error multiplier of log_poly (conservative)
  double chat_ln = 1.25;     // max l1 norm over the log sweep
  double ctilde_ln = 40.0;   // degree ~ ctilde_ln / beta * log2(1/eps)

  static const ApproxConstants& calibrated();
};

// Parsed target-function specification (external interface of cmd_approx).
struct TargetFunction {
  std::string kind;  // "sign" | "log" | "piecewise"
  double delta = 0.0;   // sign: gap half-width
  double beta = 0.0;    // log: lower eigenvalue cutoff
  double eps = 0.0;     // accuracy parameter
  // piecewise only:
  std::vector<double> taylor;  // a_l, l = 0..len-1
  double x0 = 0.0;
  double r = 0.0;
  double pw_delta = 0.0;
  double B = 0.0;
};

// Degree budget for polynomial construction: QSVT_MAX_DEGREE env override of
// the default 4095.  Throws ResourceError when a construction would exceed it.
int max_poly_degree();

// Odd polynomial with |P| <= 1 on [-1,1] and |P - sgn| <= 5 eps outside
// (-delta, delta).  Averaged Chebyshev truncation of erf(kappa x) with
// kappa = (2/delta) sqrt(ln(sqrt(2)/(sqrt(pi) eps))).
ChebyshevPoly sign_poly(double delta, double eps);

// Even polynomial with |P| <= 1 on [-1,1] and
// |P(x) - ln(1/x)/(2 ln(2/beta))| <= eps on [beta, 1].
ChebyshevPoly log_poly(double beta, double eps);

// Smooth-piece approximation: given f(x) = sum_l a_l ((x - x0)/(r + delta))^l
// on [x0 - r - delta/2, x0 + r + delta/2] with sum_l |a_l| (r+delta)^l <= B,
// returns P with |P - f| <= eps on [x0 - r + delta/2, x0 + r - delta/2] and
// |P| <= B + eps on [-1,1].  Taylor -> low-weight Fourier -> erf window ->
// averaged Chebyshev truncation.
ChebyshevPoly piecewise_smooth_poly(const std::vector<double>& a, double x0,
                                    double r, double delta, double B,
                                    double eps);

// Shifted-sign combination used by the singular-value discriminator:
// odd P with P(0) = 0, |P| <= 1, P(x) >= 1 - eps for x >= b and
// |P(x)| <= eps for |x| <= a (0 < a < b <= 1).
ChebyshevPoly sv_threshold_poly(double a, double b, double eps);

}  // namespace qsvt
