#pragma once
// The tester framework and the state-testing / certification / discrimination
// algorithms with their parameter schedules.  Exact-prob mode is the default:
// acceptance probabilities are computed analytically (eigendecomposition of
// the encoded operator plus Clenshaw evaluation), which is what the circuits
// measure in exact arithmetic; sampled mode draws Bernoulli trials from the
// same probabilities under an explicit seed.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsvt/chebyshev.hpp"
#include "qsvt/encoding.hpp"
#include "qsvt/simulator.hpp"
#include "qsvt/targets.hpp"

namespace qsvt {

struct StateTestInstance {
  Circuit q0, q1;
  std::vector<int> outputs;
  double alpha = 0.0;  // thresholds (alpha > beta >= 0) when used
  double beta = 0.0;
  double g = 0.0;  // entropy gap when used

  void validate() const;
  int r() const { return static_cast<int>(outputs.size()); }
  DensityMatrix rho(int which) const;  // 0 or 1
};

struct TesterConfig {
  double eps = 1e-3;     // QSVT precision
  double delta = 1e-2;   // gap parameter of the sign step
  int dprime = 0;        // polynomial degree (0 = derived, must end odd)
  double eps_h = 1e-2;   // estimation precision
  double fail_prob = 1e-2;
  bool sample = false;
  std::int64_t shots = 100000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TestOutcome {
  double estimate = 0.0;
  bool yes = false;
  std::map<std::string, double> schedule;
  std::map<std::string, double> diagnostics;

  std::string decision() const { return yes ? "yes" : "no"; }
};

// P(H) for Hermitian H with spectrum in [-1, 1] (eigendecomposition +
// Clenshaw per eigenvalue).
Eigen::MatrixXcd poly_of_hermitian(const ChebyshevPoly& p, const Eigen::MatrixXcd& h);

// Quantum tester acceptance probability (1 + (1/alpha_P) Re Tr(P(A) rho)) / 2
// for the state prepared by q on the output qubits, with A the operator
// encoded by e (alpha = 1 required).  Sample mode draws cfg.shots Bernoulli
// trials.
double tester(const Circuit& q, const std::vector<int>& outputs,
              const BlockEncoding& e, const ChebyshevPoly& p,
              const TesterConfig& cfg);

// Extra knobs for the algorithm drivers.
struct AlgoOptions {
  bool sample = false;
  std::int64_t shots = 100000;
  std::uint64_t seed = 0;
  // Desk-scale floor for gap_qed's beta (the scheduled value is recorded and
  // analytically checked, but degrees below the floor are not constructible).
  double qed_beta_floor = 0.02;
};

TestOutcome gap_qsd(const StateTestInstance& inst, const AlgoOptions& opt = {});
TestOutcome gap_qed(const StateTestInstance& inst, const AlgoOptions& opt = {});
TestOutcome gap_qhs(const StateTestInstance& inst, const AlgoOptions& opt = {});
TestOutcome gap_qjs(const StateTestInstance& inst, const AlgoOptions& opt = {});

// Karp reduction from GapQJS thresholds to a GapQED instance: returns the
// primed circuits with output set {flag} + shifted originals and gap
// g = (ln 2 / 2)(alpha - beta).
StateTestInstance qjs_to_qed_reduction(const StateTestInstance& inst);

// Certification (beta = 0): exact acceptance probabilities of the one-step
// Grover certifiers.
TestOutcome cert_qsd(const StateTestInstance& inst, const AlgoOptions& opt = {});
TestOutcome cert_qhs(const StateTestInstance& inst, const AlgoOptions& opt = {});

struct HHMeasurement {
  Eigen::MatrixXcd pi0, pi1;  // PSD pair summing to I
  double success = 0.0;       // 1/2 + (Tr pi0 rho0 - Tr pi0 rho1)/2
  std::map<std::string, double> schedule;
};

// Algorithmic Holevo-Helstrom measurement at precision eps (default 1e-3
// floor; the paper's 2^-n is honored when the degree budget allows).
HHMeasurement hh_measurement(const Circuit& q0, const Circuit& q1,
                             const std::vector<int>& outputs, double eps);

struct ProtocolResult {
  double empirical_success = 0.0;
  double analytic_success = 0.0;
};

// Two-message hypothesis-testing protocol: verifier coin + prover HH
// measurement, simulated for `trials` seeded rounds.
ProtocolResult hypothesis_protocol(const Circuit& q0, const Circuit& q1,
                                   const std::vector<int>& outputs, double eps,
                                   std::int64_t trials, std::uint64_t seed);

struct SvDiscriminator {
  ChebyshevPoly q;           // combined threshold polynomial
  BlockEncoding encoding;    // exact encoding of Q^(SV)(A)
  double alpha = 0.0, beta = 0.0, eps = 0.0;

  // Probability that a right singular vector with singular value sigma lands
  // in the good subspace: Q(sigma)^2.
  double accept_prob(double sigma) const;
};

// Singular value discrimination: distinguishes sigma <= alpha from
// sigma >= beta with error eps (one-sided at alpha = 0 or beta = 1).
SvDiscriminator sv_discriminator(const BlockEncoding& e, double alpha,
                                 double beta, double eps);

}  // namespace qsvt
