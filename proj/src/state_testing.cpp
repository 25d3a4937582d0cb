#include "qsvt/state_testing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"

namespace qsvt {

namespace {

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

double binary_entropy_bits(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

// Solve H2(p) = target on (0, 1/2] by bisection to 1e-12.
double invert_binary_entropy(double target) {
  if (!(target > 0.0 && target <= 1.0))
    throw ValidationError(
        "qjs_to_qed_reduction: binary-entropy equation has no solution in (0, 1/2]");
  double lo = 1e-16, hi = 0.5;
  if (target >= 1.0 - 1e-15) return 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy_bits(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Estimate of x = Re Tr(P(A) rho) under the renormalized analytic tester:
// exact in exact-prob mode; in sample mode, drawn through the acceptance
// probability (1 + x)/2.
double estimate_x(double x, const AlgoOptions& opt, std::uint64_t stream) {
  if (!opt.sample) return x;
  const double p = 0.5 * (1.0 + std::clamp(x, -1.0, 1.0));
  Rng rng(opt.seed, stream);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < opt.shots; ++i)
    if (rng.next_double() < p) ++hits;
  return 2.0 * static_cast<double>(hits) / static_cast<double>(opt.shots) - 1.0;
}

// Block-diagonal controlled application of q0 (control = 0) / q1 (control = 1)
// on `work` qubits, with the control as the top local bit.
Gate controlled_pair(const Circuit& q0, const Circuit& q1, int control,
                     const std::vector<int>& work) {
  const Eigen::MatrixXcd u0 = circuit_unitary(q0);
  const Eigen::MatrixXcd u1 = circuit_unitary(q1);
  const Eigen::Index d = u0.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = u0;
  m.bottomRightCorner(d, d) = u1;
  std::vector<int> qs = work;
  qs.push_back(control);
  return Gate{"U", std::move(qs), 0.0, std::move(m)};
}

}  // namespace

void StateTestInstance::validate() const {
  q0.validate();
  q1.validate();
  if (q0.n_qubits != q1.n_qubits)
    throw ValidationError("StateTestInstance: circuits must share the qubit count");
  if (outputs.empty())
    throw ValidationError("StateTestInstance: output set must be nonempty");
  std::vector<int> sorted = outputs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("StateTestInstance: repeated output qubit");
  for (int q : outputs)
    if (q < 0 || q >= q0.n_qubits)
      throw ValidationError("StateTestInstance: output qubit out of range");
  if (alpha != 0.0 || beta != 0.0) {
    if (!(alpha > beta && beta >= 0.0))
      throw ValidationError("StateTestInstance: need alpha > beta >= 0");
  }
  if (g < 0.0) throw ValidationError("StateTestInstance: gap must be >= 0");
}

DensityMatrix StateTestInstance::rho(int which) const {
  const Circuit& q = (which == 0) ? q0 : q1;
  return partial_trace(run_circuit(q), outputs);
}

void TesterConfig::validate() const {
  auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in01(eps) || !in01(delta) || !in01(eps_h) || !in01(fail_prob))
    throw ValidationError("TesterConfig: parameters must lie in (0, 1)");
  if (dprime != 0 && dprime % 2 == 0)
    throw ValidationError("TesterConfig: d' must be odd");
  if (sample && shots < 1) throw ValidationError("TesterConfig: shots must be >= 1");
}

Eigen::MatrixXcd poly_of_hermitian(const ChebyshevPoly& p, const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw ValidationError("poly_of_hermitian: square input");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw ValidationError("poly_of_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(h));
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) > 1.0 + 1e-9)
      throw ValidationError("poly_of_hermitian: spectrum outside [-1, 1]");
    vals[i] = eval_cheb(p, std::clamp(vals[i], -1.0, 1.0));
  }
  return es.eigenvectors() * vals.asDiagonal() *
         es.eigenvectors().adjoint();
}

double tester(const Circuit& q, const std::vector<int>& outputs,
              const BlockEncoding& e, const ChebyshevPoly& p,
              const TesterConfig& cfg) {
  cfg.validate();
  e.validate();
  if (std::abs(e.alpha - 1.0) > 1e-9)
    throw ValidationError("tester: encoding must have alpha = 1");
  StateTestInstance shim;  // reuse validation of the (q, outputs) pair
  shim.q0 = q;
  shim.q1 = q;
  shim.outputs = outputs;
  shim.validate();
  const DensityMatrix rho = shim.rho(0);
  const Eigen::MatrixXcd a = hermitize(e.extracted_block());
  if (a.rows() != rho.entries.rows())
    throw ValidationError("tester: encoded operator does not match the state dimension");
  const double weight = p.lcu_weight();
  if (weight == 0.0) return 0.5;  // zero polynomial: the coin never tilts
  const Eigen::MatrixXcd pa = poly_of_hermitian(p, a);
  // The encoding of P(A) carries scale max(||chat||_1, 1) (weights below 1
  // are padded to a valid scale), so that is the tester's divisor.
  const double prob =
      0.5 * (1.0 + (pa * rho.entries).trace().real() / std::max(weight, 1.0));
  if (!cfg.sample) return prob;
  return sample_bernoulli(std::clamp(prob, 0.0, 1.0), cfg.shots, cfg.seed);
}

TestOutcome gap_qsd(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.alpha > inst.beta && inst.beta >= 0.0))
    throw ValidationError("gap_qsd: needs thresholds alpha > beta >= 0");
  const ApproxConstants& c = ApproxConstants::calibrated();
  const int r = inst.r();
  const double eps = (inst.alpha - inst.beta) / 4.0;
  const double delta = eps / std::pow(2.0, r + 3);
  const double eps_qsvt =
      eps / (2.0 * (36.0 * c.chat_sgn + 2.0 * c.c_sgn + 37.0));
  const double eps_h = eps / 4.0;

  const ChebyshevPoly p = sign_poly(delta, eps_qsvt);
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const Eigen::MatrixXcd a = hermitize(0.5 * (rho0.entries - rho1.entries));
  const Eigen::MatrixXcd pa = poly_of_hermitian(p, a);
  const double x0 = (pa * rho0.entries).trace().real();
  const double x1 = (pa * rho1.entries).trace().real();
  const double x0h = estimate_x(x0, opt, 1);
  const double x1h = estimate_x(x1, opt, 2);

  TestOutcome out;
  out.estimate = 0.5 * (x0h - x1h);
  out.yes = out.estimate > 0.5 * (inst.alpha + inst.beta);
  out.schedule = {{"eps", eps},       {"delta", delta}, {"eps_qsvt", eps_qsvt},
                  {"eps_h", eps_h},   {"dprime", static_cast<double>(p.degree)},
                  {"l1_norm", p.l1_norm}};
  out.diagnostics = {{"x0", x0}, {"x1", x1}, {"x0_hat", x0h}, {"x1_hat", x1h}};
  return out;
}

TestOutcome gap_qed(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.g > 0.0)) throw ValidationError("gap_qed: needs a positive gap g");
  const ApproxConstants& c = ApproxConstants::calibrated();
  const int r = inst.r();
  const double eps = inst.g / 4.0;
  const double pow_r = std::pow(2.0, r + 6);
  const double beta_sched = std::min(eps / (pow_r * std::log(pow_r / eps)), 0.25);
  const double beta_run = std::max(beta_sched, opt.qed_beta_floor);
  const double ln_term = std::log(2.0 / beta_run);
  const double eps_h = eps / (8.0 * ln_term);
  const double eps_qsvt = eps / (8.0 * ln_term * (c.c_ln + c.chat_ln));
  // Scheduled-beta tail bound (Prop. entropy-technical): the low-eigenvalue
  // contribution at the scheduled beta must fit in eps/4.
  const double beta_tail =
      2.0 * std::log(2.0 / beta_sched) * std::pow(2.0, r + 1) * beta_sched;

  const ChebyshevPoly p = log_poly(beta_run, eps_qsvt);
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const double x0 =
      (poly_of_hermitian(p, hermitize(rho0.entries)) * rho0.entries).trace().real();
  const double x1 =
      (poly_of_hermitian(p, hermitize(rho1.entries)) * rho1.entries).trace().real();
  const double x0h = estimate_x(x0, opt, 1);
  const double x1h = estimate_x(x1, opt, 2);

  TestOutcome out;
  out.estimate = 2.0 * ln_term * (x0h - x1h);
  out.yes = out.estimate > 0.0;
  out.schedule = {{"eps", eps},
                  {"beta_sched", beta_sched},
                  {"beta_run", beta_run},
                  {"eps_qsvt", eps_qsvt},
                  {"eps_h", eps_h},
                  {"dprime", static_cast<double>(p.degree)},
                  {"l1_norm", p.l1_norm}};
  out.diagnostics = {{"x0", x0},
                     {"x1", x1},
                     {"beta_tail_sched", beta_tail},
                     {"beta_tail_ok", beta_tail <= eps / 4.0 ? 1.0 : 0.0}};
  return out;
}

TestOutcome gap_qhs(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.alpha > inst.beta && inst.beta >= 0.0))
    throw ValidationError("gap_qhs: needs thresholds alpha > beta >= 0");
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  double p00 = swap_test_prob(rho0, rho0);
  double p11 = swap_test_prob(rho1, rho1);
  double p01 = swap_test_prob(rho0, rho1);
  if (opt.sample) {
    p00 = sample_bernoulli(std::clamp(p00, 0.0, 1.0), opt.shots, Rng(opt.seed, 1).next_u64());
    p11 = sample_bernoulli(std::clamp(p11, 0.0, 1.0), opt.shots, Rng(opt.seed, 2).next_u64());
    p01 = sample_bernoulli(std::clamp(p01, 0.0, 1.0), opt.shots, Rng(opt.seed, 3).next_u64());
  }
  TestOutcome out;
  out.estimate = p00 + p11 - 2.0 * p01;  // = (Tr rho0^2 + Tr rho1^2)/2 - Tr rho0 rho1
  out.yes = out.estimate > 0.5 * (inst.alpha + inst.beta);
  out.schedule = {{"eps", (inst.alpha - inst.beta) / 100.0}};
  out.diagnostics = {{"p00", p00}, {"p11", p11}, {"p01", p01}};
  return out;
}

StateTestInstance qjs_to_qed_reduction(const StateTestInstance& inst) {
  inst.validate();
  if (!(inst.alpha > inst.beta && inst.beta >= 0.0))
    throw ValidationError("qjs_to_qed_reduction: needs thresholds alpha > beta >= 0");
  const int n = inst.q0.n_qubits;
  const double p = invert_binary_entropy(1.0 - 0.5 * (inst.alpha + inst.beta));

  // rho0' = (p|0><0| + (1-p)|1><1|) (x) (rho0 + rho1)/2 on outputs
  // {flag} + originals.  Qubits: 0 flag, 1 flag purifier, 2 mixture selector,
  // 3.. work register.
  StateTestInstance red;
  red.q0.n_qubits = n + 3;
  red.q0.ry(0, 2.0 * std::atan2(std::sqrt(1.0 - p), std::sqrt(p)));
  red.q0.cnot(0, 1);
  red.q0.h(2);
  std::vector<int> work0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) work0[static_cast<std::size_t>(i)] = 3 + i;
  red.q0.add(controlled_pair(inst.q0, inst.q1, 2, work0));

  // rho1' = (|0><0| (x) rho0 + |1><1| (x) rho1)/2.  Qubits: 0 flag (output),
  // 1 flag purifier, 2 idle (keeps the registers aligned with q0'),
  // 3.. work register.
  red.q1.n_qubits = n + 3;
  red.q1.h(0);
  red.q1.cnot(0, 1);
  red.q1.add(controlled_pair(inst.q0, inst.q1, 0, work0));

  red.outputs.push_back(0);
  for (int o : inst.outputs) red.outputs.push_back(3 + o);
  red.g = 0.5 * std::log(2.0) * (inst.alpha - inst.beta);
  red.validate();
  return red;
}

TestOutcome gap_qjs(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.alpha > inst.beta && inst.beta >= 0.0))
    throw ValidationError("gap_qjs: needs thresholds alpha > beta >= 0");
  const double eps = (inst.alpha - inst.beta) / 4.0;
  const double mid = 0.5 * (inst.alpha + inst.beta);

  // Route A: Karp reduction to GapQED.
  const StateTestInstance red = qjs_to_qed_reduction(inst);
  const TestOutcome qed = gap_qed(red, opt);
  const double qjs_a = qed.estimate / std::log(2.0) + mid;

  // Route B: three entropy estimates through the same log pipeline.
  const ApproxConstants& c = ApproxConstants::calibrated();
  const double ln_term = std::log(2.0 / opt.qed_beta_floor);
  const double eps_qsvt = eps / (8.0 * ln_term * (c.c_ln + c.chat_ln));
  const ChebyshevPoly p = log_poly(opt.qed_beta_floor, eps_qsvt);
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const DensityMatrix mix{0.5 * (rho0.entries + rho1.entries)};
  auto entropy_est = [&](const DensityMatrix& rho) {
    return 2.0 * ln_term *
           (poly_of_hermitian(p, hermitize(rho.entries)) * rho.entries)
               .trace()
               .real();
  };
  const double qjs_b = (entropy_est(mix) - 0.5 * (entropy_est(rho0) + entropy_est(rho1))) /
                       std::log(2.0);
  if (std::abs(qjs_a - qjs_b) > 2.0 * eps)
    throw OracleError("gap_qjs: route A and route B disagree beyond 2 eps");

  TestOutcome out;
  out.estimate = qjs_a;
  out.yes = out.estimate > mid;
  out.schedule = qed.schedule;
  out.schedule["eps"] = eps;
  out.diagnostics = {{"qjs2", qjs_a}, {"qjs_route_a", qjs_a},
                     {"qjs_route_b", qjs_b}, {"qed_estimate", qed.estimate}};
  return out;
}

TestOutcome cert_qsd(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.alpha > 0.0) || inst.beta != 0.0)
    throw ValidationError("cert_qsd: needs alpha > 0, beta = 0");
  const ApproxConstants& c = ApproxConstants::calibrated();
  const int r = inst.r();
  const double eps = inst.alpha / 4.0;
  const double delta = eps / std::pow(2.0, r + 3);
  const double eps_qsvt =
      eps / (2.0 * (36.0 * c.chat_sgn + 2.0 * c.c_sgn + 37.0));
  const ChebyshevPoly p = sign_poly(delta, eps_qsvt);
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const Eigen::MatrixXcd a = hermitize(0.5 * (rho0.entries - rho1.entries));
  const Eigen::MatrixXcd pa = poly_of_hermitian(p, a);
  const double p0 = 0.5 * (1.0 + (pa * rho0.entries).trace().real());
  const double p1 = 0.5 * (1.0 + (pa * rho1.entries).trace().real());
  // One Grover step per tester: amplitude sin(3 theta_i) on |0 0bar>,
  // with sin(theta_i) = sqrt(p_i / 2); accept when both registers hit.
  auto amplify = [](double pi) {
    const double theta = std::asin(std::sqrt(std::clamp(pi, 0.0, 1.0) / 2.0));
    const double s = std::sin(3.0 * theta);
    return s * s;
  };
  double accept = amplify(p0) * amplify(p1);
  if (opt.sample)
    accept = sample_bernoulli(std::clamp(accept, 0.0, 1.0), opt.shots, opt.seed);
  TestOutcome out;
  out.estimate = accept;
  out.yes = accept > 1.0 - inst.alpha * inst.alpha / 32.0;
  out.schedule = {{"eps", eps},
                  {"delta", delta},
                  {"eps_qsvt", eps_qsvt},
                  {"dprime", static_cast<double>(p.degree)},
                  {"soundness_bound", 1.0 - inst.alpha * inst.alpha / 16.0}};
  out.diagnostics = {{"p0", p0}, {"p1", p1}};
  return out;
}

TestOutcome cert_qhs(const StateTestInstance& inst, const AlgoOptions& opt) {
  inst.validate();
  if (!(inst.alpha > 0.0) || inst.beta != 0.0)
    throw ValidationError("cert_qhs: needs alpha > 0, beta = 0");
  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const double p00 = swap_test_prob(rho0, rho0);
  const double p11 = swap_test_prob(rho1, rho1);
  const double p01 = swap_test_prob(rho0, rho1);
  const double hs2 = p00 + p11 - 2.0 * p01;
  const double q = 0.5 + hs2 / 4.0;  // <0bar| V |0bar> of the LCU encoding
  const double x = q * q;
  double accept = 16.0 * x * x * x - 24.0 * x * x + 9.0 * x;  // sin^2(3 theta)
  if (opt.sample)
    accept = sample_bernoulli(std::clamp(accept, 0.0, 1.0), opt.shots, opt.seed);
  TestOutcome out;
  out.estimate = accept;
  out.yes = accept > 1.0 - inst.alpha * inst.alpha / 4.0;
  out.schedule = {{"soundness_bound", 1.0 - inst.alpha * inst.alpha / 2.0}};
  out.diagnostics = {{"hs2", hs2}, {"sin_theta", q}};
  return out;
}

HHMeasurement hh_measurement(const Circuit& q0, const Circuit& q1,
                             const std::vector<int>& outputs, double eps) {
  StateTestInstance inst;
  inst.q0 = q0;
  inst.q1 = q1;
  inst.outputs = outputs;
  inst.validate();
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("hh_measurement: eps must lie in (0, 1)");
  const ApproxConstants& c = ApproxConstants::calibrated();
  const int r = inst.r();
  const double delta = eps / std::pow(2.0, r + 2);
  const double eps_qsvt = eps / (4.0 * c.c_sgn);
  const ChebyshevPoly p = sign_poly(delta, eps_qsvt);

  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  const Eigen::MatrixXcd a = hermitize(0.5 * (rho0.entries - rho1.entries));
  const Eigen::MatrixXcd pa = poly_of_hermitian(p, a);
  const Eigen::Index d = pa.rows();

  HHMeasurement m;
  m.pi0 = hermitize(0.5 * (Eigen::MatrixXcd::Identity(d, d) + pa));
  m.pi1 = Eigen::MatrixXcd::Identity(d, d) - m.pi0;
  m.success =
      0.5 + 0.25 * (pa * (rho0.entries - rho1.entries)).trace().real();
  m.schedule = {{"eps", eps},
                {"delta", delta},
                {"eps_qsvt", eps_qsvt},
                {"dprime", static_cast<double>(p.degree)},
                {"l1_norm", p.l1_norm}};
  return m;
}

ProtocolResult hypothesis_protocol(const Circuit& q0, const Circuit& q1,
                                   const std::vector<int>& outputs, double eps,
                                   std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("hypothesis_protocol: trials must be >= 1");
  const HHMeasurement m = hh_measurement(q0, q1, outputs, eps);
  StateTestInstance inst;
  inst.q0 = q0;
  inst.q1 = q1;
  inst.outputs = outputs;
  const double t0 =
      std::clamp((m.pi0 * inst.rho(0).entries).trace().real(), 0.0, 1.0);
  const double t1 =
      std::clamp((m.pi0 * inst.rho(1).entries).trace().real(), 0.0, 1.0);
  Rng rng(seed);
  std::int64_t correct = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const int b = (rng.next_double() < 0.5) ? 0 : 1;
    const double p_hat0 = (b == 0) ? t0 : t1;  // Pr[measurement reports 0]
    const int bhat = (rng.next_double() < p_hat0) ? 0 : 1;
    if (bhat == b) ++correct;
  }
  ProtocolResult res;
  res.analytic_success = m.success;
  res.empirical_success = static_cast<double>(correct) / static_cast<double>(trials);
  return res;
}

double SvDiscriminator::accept_prob(double sigma) const {
  const double v = eval_cheb(q, std::clamp(sigma, -1.0, 1.0));
  return v * v;
}

SvDiscriminator sv_discriminator(const BlockEncoding& e, double alpha,
                                 double beta, double eps) {
  e.validate();
  if (std::abs(e.alpha - 1.0) > 1e-9)
    throw ValidationError("sv_discriminator: encoding must have alpha = 1");
  if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0))
    throw ValidationError("sv_discriminator: need 0 <= alpha < beta <= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("sv_discriminator: eps must lie in (0, 1)");

  SvDiscriminator d;
  d.alpha = alpha;
  d.beta = beta;
  d.eps = eps;
  d.q = sv_threshold_poly(alpha, beta, eps);

  // Odd polynomial acts on singular values: Q^(SV)(A) = U Q(Sigma) V^dag.
  const Eigen::MatrixXcd a = e.extracted_block();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    sv[i] = eval_cheb(d.q, std::clamp(sv[i], 0.0, 1.0));
  const Eigen::MatrixXcd mid = sv.cast<std::complex<double>>().asDiagonal();
  const Eigen::MatrixXcd qa = svd.matrixU().leftCols(sv.size()) * mid *
                              svd.matrixV().leftCols(sv.size()).adjoint();
  d.encoding = encode_contraction(qa);
  return d;
}

}  // namespace qsvt
