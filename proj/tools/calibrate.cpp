// calibrate — one-time sweep fixing the effective approximation constants
// used by the schedule layer (ApproxConstants::calibrated()):
//   C      max grid error / eps over the sweep
//   C_hat  max l1 norm of the averaged coefficients
//   C_tilde max degree * scale / log2(1/eps)
// Run with no arguments; prints one row per sweep point and the suggested
// constants.  The committed values in qsvt/targets.hpp come from this sweep.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "qsvt/chebyshev.hpp"
#include "qsvt/targets.hpp"

using namespace qsvt;

namespace {

double sign_err(const ChebyshevPoly& p, double delta, int n = 20001) {
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * i / static_cast<double>(n - 1);
    if (std::abs(x) < delta) continue;
    mx = std::max(mx, std::abs(eval_cheb(p, x) - (x >= 0.0 ? 1.0 : -1.0)));
  }
  return mx;
}

double log_err(const ChebyshevPoly& p, double beta, int n = 20001) {
  const double norm = 2.0 * std::log(2.0 / beta);
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = beta + (1.0 - beta) * i / static_cast<double>(n - 1);
    mx = std::max(mx, std::abs(eval_cheb(p, x) + std::log(x) / norm));
  }
  return mx;
}

}  // namespace

int main() {
  setenv("QSVT_MAX_DEGREE", "262144", 0);

  double c_sgn = 0.0, chat_sgn = 0.0, ctilde_sgn = 0.0;
  std::printf("# sign: delta eps degree err/eps l1 deg*delta/log2(1/eps)\n");
  for (double delta : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const ChebyshevPoly p = sign_poly(delta, eps);
      const double ratio = sign_err(p, delta) / eps;
      const double dnorm = p.degree * delta / std::log2(1.0 / eps);
      std::printf("sign  %-6g %-6g %6d  %8.4f  %8.4f  %8.4f\n", delta, eps,
                  p.degree, ratio, p.lcu_weight(), dnorm);
      c_sgn = std::max(c_sgn, ratio);
      chat_sgn = std::max(chat_sgn, p.lcu_weight());
      ctilde_sgn = std::max(ctilde_sgn, dnorm);
    }
  }

  double c_ln = 0.0, chat_ln = 0.0, ctilde_ln = 0.0;
  std::printf("# log: beta eps degree err/eps l1 deg*beta/log2(1/eps)\n");
  for (double beta : {0.3, 0.2, 0.1, 0.05, 0.02}) {
    for (double eps : {1e-2, 1e-3}) {
      const ChebyshevPoly p = log_poly(beta, eps);
      const double ratio = log_err(p, beta) / eps;
      const double dnorm = p.degree * beta / std::log2(1.0 / eps);
      std::printf("log   %-6g %-6g %6d  %8.4f  %8.4f  %8.4f\n", beta, eps,
                  p.degree, ratio, p.lcu_weight(), dnorm);
      c_ln = std::max(c_ln, ratio);
      chat_ln = std::max(chat_ln, p.lcu_weight());
      ctilde_ln = std::max(ctilde_ln, dnorm);
    }
  }

  std::printf("\n# suggested constants (round up when committing)\n");
  std::printf("c_sgn      %8.4f\n", c_sgn);
  std::printf("chat_sgn   %8.4f\n", chat_sgn);
  std::printf("ctilde_sgn %8.4f\n", ctilde_sgn);
  std::printf("c_ln       %8.4f\n", c_ln);
  std::printf("chat_ln    %8.4f\n", chat_ln);
  std::printf("ctilde_ln  %8.4f\n", ctilde_ln);
  return 0;
}
