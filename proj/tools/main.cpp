// qsvt — command-line front end: coefficient generation (approx), QSVT
// application to matrix files (qsvt), and state-testing runs (test).
//
// Exit codes: 0 success, 2 validation error, 3 resource error, 4 oracle
// cross-check failure.  stdout carries the JSON report only; logs go to
// stderr.  The env var QSVT_MAX_DEGREE overrides the polynomial degree cap
// (the CLI defaults it to 262144 when unset).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qsvt/encoding.hpp"
#include "qsvt/errors.hpp"
#include "qsvt/io.hpp"
#include "qsvt/simulator.hpp"
#include "qsvt/state_testing.hpp"
#include "qsvt/targets.hpp"

namespace {

using nlohmann::json;
using namespace qsvt;

constexpr const char* kSchema = "qsvt-report-v1";

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string stem_of(const std::string& path) {
  const std::size_t dot = path.rfind('.');
  const std::size_t slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

// ---------------------------------------------------------------- approx --

double grid_max(const std::function<double(double)>& f, double lo, double hi,
                int n) {
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / static_cast<double>(n - 1);
    mx = std::max(mx, f(x));
  }
  return mx;
}

int cmd_approx(const std::string& spec_path, std::string out_csv, int grid_n) {
  const auto t0 = std::chrono::steady_clock::now();
  const TargetFunction f = read_target_function(spec_path);
  if (out_csv.empty()) out_csv = stem_of(spec_path) + ".csv";

  ChebyshevPoly p;
  std::map<std::string, double> params{{"eps", f.eps}};
  if (f.kind == "sign") {
    p = sign_poly(f.delta, f.eps);
    params["delta"] = f.delta;
  } else if (f.kind == "log") {
    p = log_poly(f.beta, f.eps);
    params["beta"] = f.beta;
  } else {
    p = piecewise_smooth_poly(f.taylor, f.x0, f.r, f.pw_delta, f.B, f.eps);
    params["x0"] = f.x0;
    params["r"] = f.r;
    params["delta"] = f.pw_delta;
    params["B"] = f.B;
  }

  write_poly_csv(out_csv, p);
  write_poly_sidecar(stem_of(out_csv) + ".meta.json", p, params);

  json report;
  report["schema"] = kSchema;
  report["command"] = "approx";
  report["kind"] = f.kind;
  report["out_csv"] = out_csv;
  report["degree"] = p.degree;
  report["parity"] = p.parity == Parity::even  ? "even"
                     : p.parity == Parity::odd ? "odd"
                                               : "none";
  report["l1_norm"] = p.l1_norm;
  report["max_abs"] =
      grid_max([&](double x) { return std::abs(eval_cheb(p, x)); }, -1.0, 1.0,
               grid_n);
  if (f.kind == "sign") {
    auto err = [&](double x) {
      return std::abs(eval_cheb(p, x) - (x >= 0.0 ? 1.0 : -1.0));
    };
    report["max_err_outside_gap"] =
        std::max(grid_max(err, -1.0, -f.delta, grid_n / 2 + 1),
                 grid_max(err, f.delta, 1.0, grid_n / 2 + 1));
  } else if (f.kind == "log") {
    const double norm = 2.0 * std::log(2.0 / f.beta);
    report["max_err_inside"] = grid_max(
        [&](double x) {
          return std::abs(eval_cheb(p, x) + std::log(x) / norm);
        },
        f.beta, 1.0, grid_n);
  } else {
    auto taylor_sum = [&](double x) {
      double acc = 0.0, pw = 1.0;
      const double u = (x - f.x0) / (f.r + f.pw_delta);
      for (double al : f.taylor) {
        acc += al * pw;
        pw *= u;
      }
      return acc;
    };
    const double lo = std::max(-1.0, f.x0 - f.r + f.pw_delta / 2.0);
    const double hi = std::min(1.0, f.x0 + f.r - f.pw_delta / 2.0);
    report["max_err_inside"] =
        lo < hi ? grid_max(
                      [&](double x) {
                        return std::abs(eval_cheb(p, x) - taylor_sum(x));
                      },
                      lo, hi, grid_n)
                : 0.0;
  }
  report["wall_time_s"] = wall_seconds(t0);
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ qsvt --

// SVD oracle for P^(SV)(A): odd parity maps to U P(S) V^dag, even to
// V P(S) V^dag; mixed parity is only defined for Hermitian A.
Eigen::MatrixXcd poly_sv_oracle(const ChebyshevPoly& p,
                                const Eigen::MatrixXcd& a) {
  if (p.parity == Parity::none) {
    if (a.rows() != a.cols() || (a - a.adjoint()).norm() > 1e-12 * a.rows())
      throw ValidationError(
          "qsvt: mixed-parity polynomial needs a Hermitian input matrix");
    return poly_of_hermitian(p, a);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  Eigen::VectorXcd vals(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    vals[i] = eval_cheb(p, std::clamp(sv[i], 0.0, 1.0));
  const Eigen::MatrixXcd mid = vals.asDiagonal();
  if (p.parity == Parity::odd)
    return svd.matrixU().leftCols(sv.size()) * mid *
           svd.matrixV().leftCols(sv.size()).adjoint();
  return svd.matrixV().leftCols(sv.size()) * mid *
         svd.matrixV().leftCols(sv.size()).adjoint();
}

int cmd_qsvt(const std::string& enc_path, const std::string& poly_path,
             std::string out_path, bool allow_scaled) {
  const auto t0 = std::chrono::steady_clock::now();
  const BlockEncoding e = read_encoding_json(enc_path);
  const ChebyshevPoly p = read_poly_csv(poly_path);
  if (e.alpha > 1.0 + 1e-12 && !allow_scaled)
    throw ValidationError(
        "qsvt: input encoding has alpha > 1 (a non-isometry); QSVT applies "
        "the polynomial to the singular values of A/alpha, not A.  Rerun "
        "with --allow-scaled to accept that semantics.");
  if (out_path.empty()) out_path = stem_of(enc_path) + ".out.json";

  const BlockEncoding out = apply_poly_qsvt(e, p);
  write_encoding_json(out_path, out);

  // In-process oracle: eigen/SVD transform of the encoded contraction.
  const Eigen::MatrixXcd block = out.alpha * out.extracted_block();
  const Eigen::MatrixXcd oracle = poly_sv_oracle(p, e.extracted_block());
  const double deviation = (block - oracle).operatorNorm();

  json report;
  report["schema"] = kSchema;
  report["command"] = "qsvt";
  report["out_json"] = out_path;
  report["degree"] = p.degree;
  report["alpha"] = out.alpha;
  report["ancillas"] = out.a;
  report["eps"] = out.eps;
  report["deviation"] = deviation;
  report["wall_time_s"] = wall_seconds(t0);
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------------ test --

struct TestReport {
  json body;
  bool oracle_ok = true;
};

TestReport run_one_test(const std::string& path, const std::string& algo,
                        bool sample, std::uint64_t seed, std::int64_t shots,
                        double eps, std::int64_t trials) {
  const auto t0 = std::chrono::steady_clock::now();
  const StateTestInstance inst = read_instance_json(path);
  AlgoOptions opt;
  opt.sample = sample;
  opt.seed = seed;
  opt.shots = shots;

  TestReport rep;
  rep.body["schema"] = kSchema;
  rep.body["command"] = "test";
  rep.body["instance"] = path;
  rep.body["algo"] = algo;
  rep.body["mode"] = sample ? "sample" : "exact";
  rep.body["seed"] = seed;

  const DensityMatrix rho0 = inst.rho(0), rho1 = inst.rho(1);
  // Hoeffding slack for sampled estimators (fail prob 1e-6 per estimate).
  const double band =
      sample ? std::sqrt(std::log(2.0 / 1e-6) / (2.0 * static_cast<double>(shots)))
             : 0.0;

  TestOutcome out;
  double oracle = 0.0, tol = 0.0;
  bool have_oracle = true;
  if (algo == "qsd") {
    out = gap_qsd(inst, opt);
    oracle = distance_oracle(rho0, rho1, DistanceMeasure::td);
    tol = (inst.alpha - inst.beta) / 4.0 + band;
  } else if (algo == "qed") {
    out = gap_qed(inst, opt);
    oracle = distance_oracle(rho0, rho1, DistanceMeasure::entropy_diff);
    tol = inst.g / 4.0 + 4.0 * std::log(2.0 / opt.qed_beta_floor) * band;
  } else if (algo == "qjs") {
    out = gap_qjs(inst, opt);
    out.estimate = out.diagnostics.at("qjs2");
    oracle = distance_oracle(rho0, rho1, DistanceMeasure::qjs2);
    tol = (inst.alpha - inst.beta) / 4.0 +
          6.0 * std::log(2.0 / opt.qed_beta_floor) * band;
  } else if (algo == "qhs") {
    out = gap_qhs(inst, opt);
    oracle = distance_oracle(rho0, rho1, DistanceMeasure::hs2);
    tol = (inst.alpha - inst.beta) / 100.0 + 4.0 * band;
  } else if (algo == "cert-qsd" || algo == "cert-qhs") {
    const bool qsd = algo == "cert-qsd";
    out = qsd ? cert_qsd(inst, opt) : cert_qhs(inst, opt);
    const double dist = distance_oracle(
        rho0, rho1, qsd ? DistanceMeasure::td : DistanceMeasure::hs2);
    const double ceiling = qsd ? 1.0 - inst.alpha * inst.alpha / 16.0
                               : 1.0 - inst.alpha * inst.alpha / 2.0;
    rep.body["distance"] = dist;
    rep.body["soundness_ceiling"] = ceiling;
    // Completeness on yes twins, soundness on no twins; in between there is
    // no promise and no oracle check.
    if (dist <= 1e-12) {
      oracle = 1.0;
      tol = 1e-9 + 2.0 * band;
      have_oracle = true;
    } else if (dist >= inst.alpha) {
      have_oracle = false;
      rep.body["oracle_check"] =
          out.estimate <= ceiling + 1e-9 + 2.0 * band ? "pass" : "fail";
      rep.oracle_ok = rep.body["oracle_check"] == "pass";
    } else {
      have_oracle = false;
      rep.body["oracle_check"] = "skipped (no promise)";
    }
  } else if (algo == "hh") {
    const HHMeasurement m = hh_measurement(inst.q0, inst.q1, inst.outputs, eps);
    const double td = distance_oracle(rho0, rho1, DistanceMeasure::td);
    out.estimate = m.success;
    out.yes = m.success > 0.5;
    out.schedule = m.schedule;
    rep.body["optimal_success"] = 0.5 + 0.5 * td;
    rep.body["oracle_check"] =
        (m.success <= 0.5 + 0.5 * td + 1e-9 &&
         m.success >= 0.5 + 0.5 * td - eps)
            ? "pass"
            : "fail";
    rep.oracle_ok = rep.body["oracle_check"] == "pass";
    have_oracle = false;
  } else if (algo == "protocol") {
    const ProtocolResult r =
        hypothesis_protocol(inst.q0, inst.q1, inst.outputs, eps, trials, seed);
    out.estimate = r.empirical_success;
    out.yes = r.empirical_success > 0.5;
    oracle = r.analytic_success;
    tol = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(trials)));
  } else if (algo == "svd-disc") {
    // Instance thresholds alpha > beta map to the discriminator's
    // (lower, upper) = (beta, alpha): decide sigma <= beta vs sigma >= alpha.
    const BlockEncoding e = purify_to_encoding(inst.q0, inst.outputs);
    const SvDiscriminator d = sv_discriminator(e, inst.beta, inst.alpha, eps);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e.extracted_block());
    const double top = svd.singularValues().maxCoeff();
    out.estimate = d.accept_prob(top);
    out.yes = top >= inst.alpha;
    rep.body["top_singular_value"] = top;
    bool ok = true;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double sv = svd.singularValues()[i];
      const double pr = d.accept_prob(sv);
      if (sv >= inst.alpha && pr < 1.0 - eps) ok = false;
      if (sv <= inst.beta && pr > eps) ok = false;
    }
    rep.body["oracle_check"] = ok ? "pass" : "fail";
    rep.oracle_ok = ok;
    have_oracle = false;
  } else {
    throw ValidationError("test: unknown --algo " + algo);
  }

  if (have_oracle) {
    rep.body["oracle"] = oracle;
    rep.body["tolerance"] = tol;
    rep.oracle_ok = std::abs(out.estimate - oracle) <= tol;
    rep.body["oracle_check"] = rep.oracle_ok ? "pass" : "fail";
  }
  rep.body["estimate"] = out.estimate;
  rep.body["decision"] = out.decision();
  rep.body["schedule"] = json::object();
  for (const auto& [k, v] : out.schedule) rep.body["schedule"][k] = v;
  rep.body["diagnostics"] = json::object();
  for (const auto& [k, v] : out.diagnostics) rep.body["diagnostics"][k] = v;
  rep.body["wall_time_s"] = wall_seconds(t0);
  return rep;
}

int cmd_test(const std::vector<std::string>& paths, const std::string& algo,
             const std::string& mode, std::uint64_t seed, std::int64_t shots,
             double eps, std::int64_t trials, int jobs) {
  if (mode != "exact" && mode != "sample")
    throw ValidationError("test: --mode must be exact or sample");
  const bool sample = mode == "sample";

  std::vector<TestReport> reports(paths.size());
  std::vector<std::string> errors(paths.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < paths.size(); i += step) {
      try {
        reports[i] = run_one_test(paths[i], algo, sample, seed, shots, eps,
                                  trials);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs > 1 && paths.size() > 1) {
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(jobs, paths.size());
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (!errors[i].empty()) throw ValidationError(errors[i]);
  } else {
    for (std::size_t i = 0; i < paths.size(); ++i)
      reports[i] = run_one_test(paths[i], algo, sample, seed, shots, eps,
                                trials);
  }

  bool all_ok = true;
  if (paths.size() == 1) {
    std::cout << reports[0].body.dump(2) << "\n";
    all_ok = reports[0].oracle_ok;
  } else {
    json arr = json::array();
    for (auto& r : reports) {
      arr.push_back(std::move(r.body));
      all_ok = all_ok && r.oracle_ok;
    }
    std::cout << arr.dump(2) << "\n";
  }
  if (!all_ok) throw OracleError("test: oracle check failed (see report)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Desk-scale default degree budget; the library default (4095) is too low
  // for the Algorithm 1/2 schedules.  An existing env value wins.
  setenv("QSVT_MAX_DEGREE", "262144", 0);

  CLI::App app{
      "qsvt — Chebyshev approximation, block-encoding QSVT, and quantum "
      "state-testing toolkit.  Env: QSVT_MAX_DEGREE caps polynomial degrees "
      "(default 262144)."};
  app.require_subcommand(1);

  std::string spec_path, out_path, enc_path, poly_path;
  int grid_n = 10001;
  auto* approx = app.add_subcommand("approx", "Build approximation coefficients");
  approx->add_option("spec", spec_path, "Function-spec JSON")->required();
  approx->add_option("--out", out_path, "Output CSV path");
  approx->add_option("--grid", grid_n, "Error-report grid size")
      ->check(CLI::PositiveNumber);

  bool allow_scaled = false;
  auto* qsvt_cmd = app.add_subcommand("qsvt", "Apply a polynomial to an encoding");
  qsvt_cmd->add_option("encoding", enc_path, "Encoding JSON")->required();
  qsvt_cmd->add_option("poly", poly_path, "Coefficient CSV")->required();
  qsvt_cmd->add_option("--out", out_path, "Output matrix JSON path");
  qsvt_cmd->add_flag("--allow-scaled", allow_scaled,
                     "Accept encodings with alpha > 1");

  std::vector<std::string> instance_paths;
  std::string algo, mode = "exact";
  std::uint64_t seed = 0;
  std::int64_t shots = 100000, trials = 10000;
  double eps = 0.01;
  int jobs = 1;
  auto* test = app.add_subcommand("test", "Run a state-testing algorithm");
  test->add_option("instances", instance_paths, "Instance JSON file(s)")
      ->required();
  test->add_option("--algo", algo,
                   "qsd|qed|qjs|qhs|cert-qsd|cert-qhs|hh|protocol|svd-disc")
      ->required();
  test->add_option("--mode", mode, "exact (default) or sample");
  test->add_option("--seed", seed, "RNG seed (default 0)");
  test->add_option("--shots", shots, "Samples per estimate in sample mode")
      ->check(CLI::PositiveNumber);
  test->add_option("--eps", eps, "Precision for hh/protocol/svd-disc")
      ->check(CLI::PositiveNumber);
  test->add_option("--trials", trials, "Protocol rounds")
      ->check(CLI::PositiveNumber);
  test->add_option("--jobs", jobs, "Parallel instance workers")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (*approx) return cmd_approx(spec_path, out_path, grid_n);
    if (*qsvt_cmd) return cmd_qsvt(enc_path, poly_path, out_path, allow_scaled);
    return cmd_test(instance_paths, algo, mode, seed, shots, eps, trials, jobs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const qsvt::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const qsvt::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const qsvt::OracleError& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
