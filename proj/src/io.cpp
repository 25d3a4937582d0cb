#include "qsvt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qsvt/errors.hpp"

namespace qsvt {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": JSON parse error: " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

double require_number(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(ctx + ": missing numeric field \"" + key + "\"");
  return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ValidationError(std::string("field \"") + key + "\" must be a number");
  return j[key].get<double>();
}

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "none";
  }
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows.push_back({m(i, j).real(), m(i, j).imag()});
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& entries, Eigen::Index rows,
                                          Eigen::Index cols,
                                          const std::string& ctx) {
  if (!entries.is_array() ||
      static_cast<Eigen::Index>(entries.size()) != rows * cols)
    throw ValidationError(ctx + ": entries must be a row-major array of " +
                          std::to_string(rows * cols) + " [re, im] pairs");
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index idx = 0;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ValidationError(ctx + ": each entry must be a [re, im] pair");
    m(idx / cols, idx % cols) =
        std::complex<double>(e[0].get<double>(), e[1].get<double>());
    ++idx;
  }
  return m;
}

Gate gate_from_json(const json& jg) {
  if (!jg.is_object() || !jg.contains("g") || !jg["g"].is_string())
    throw ValidationError("circuit JSON: gate must be an object with string \"g\"");
  Gate g;
  g.g = jg["g"].get<std::string>();
  if (!jg.contains("q") || !jg["q"].is_array())
    throw ValidationError("circuit JSON: gate \"" + g.g +
                          "\" needs an index array \"q\"");
  for (const auto& qi : jg["q"]) {
    if (!qi.is_number_integer())
      throw ValidationError("circuit JSON: qubit indices must be integers");
    g.q.push_back(qi.get<int>());
  }
  g.theta = number_or(jg, "theta", 0.0);
  if (jg.contains("matrix")) {
    const Eigen::Index d = Eigen::Index{1} << g.q.size();
    g.matrix = complex_matrix_from_json(jg["matrix"], d, d, "circuit JSON gate U");
  }
  return g;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_poly_csv(const std::string& path, const ChebyshevPoly& p) {
  std::ostringstream out;
  out << "k,c_k,chat_k\n";
  const bool have_raw = p.raw_coeffs.size() == p.coeffs.size();
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    const double raw = have_raw ? p.raw_coeffs[k] : p.coeffs[k];
    out << k << ',' << format_double(raw) << ',' << format_double(p.coeffs[k])
        << '\n';
  }
  write_file(path, out.str());
}

ChebyshevPoly read_poly_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,c_k,chat_k", 0) != 0)
    throw ValidationError(path + ": expected CSV header k,c_k,chat_k");
  std::vector<double> raw, chat;
  std::size_t expect = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t k = 0;
    double c = 0.0, ch = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &k, &c, &ch) != 3)
      throw ValidationError(path + ": malformed CSV row: " + line);
    if (k != expect++)
      throw ValidationError(path + ": CSV rows must be consecutive from k = 0");
    raw.push_back(c);
    chat.push_back(ch);
  }
  if (chat.empty()) throw ValidationError(path + ": no coefficient rows");
  ChebyshevPoly p = make_poly(std::move(chat));
  p.raw_coeffs = std::move(raw);
  return p;
}

void write_poly_sidecar(const std::string& path, const ChebyshevPoly& p,
                        const std::map<std::string, double>& params) {
  json j;
  j["degree"] = p.degree;
  j["parity"] = parity_name(p.parity);
  j["l1_norm"] = p.l1_norm;
  j["params"] = json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  write_file(path, j.dump(2) + "\n");
}

TargetFunction read_target_function(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ValidationError(path + ": function spec needs a string \"kind\"");
  TargetFunction f;
  f.kind = j["kind"].get<std::string>();
  const std::string ctx = path;
  if (f.kind == "sign") {
    f.delta = require_number(j, "delta", ctx);
    f.eps = require_number(j, "eps", ctx);
  } else if (f.kind == "log") {
    f.beta = require_number(j, "beta", ctx);
    f.eps = require_number(j, "eps", ctx);
  } else if (f.kind == "piecewise") {
    if (!j.contains("taylor") || !j["taylor"].is_array())
      throw ValidationError(ctx + ": piecewise spec needs a \"taylor\" array");
    for (const auto& a : j["taylor"]) {
      if (!a.is_number())
        throw ValidationError(ctx + ": taylor coefficients must be numbers");
      f.taylor.push_back(a.get<double>());
    }
    f.x0 = require_number(j, "x0", ctx);
    f.r = require_number(j, "r", ctx);
    f.pw_delta = require_number(j, "delta", ctx);
    f.B = require_number(j, "B", ctx);
    f.eps = require_number(j, "eps", ctx);
  } else {
    throw ValidationError(ctx + ": unknown kind \"" + f.kind +
                          "\" (expected sign | log | piecewise)");
  }
  return f;
}

void write_encoding_json(const std::string& path, const BlockEncoding& e) {
  const Eigen::MatrixXcd block = e.alpha * e.extracted_block();
  json j;
  j["dim"] = block.rows();
  j["cols"] = block.cols();
  j["s"] = e.s;
  j["a"] = e.a;
  j["alpha"] = e.alpha;
  j["eps"] = e.eps;
  j["entries"] = complex_matrix_to_json(block);
  write_file(path, j.dump(2) + "\n");
}

BlockEncoding read_encoding_json(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object()) throw ValidationError(path + ": expected a JSON object");
  const auto dim = static_cast<Eigen::Index>(require_number(j, "dim", path));
  const auto cols =
      static_cast<Eigen::Index>(number_or(j, "cols", static_cast<double>(dim)));
  if (dim < 1 || cols < 1)
    throw ValidationError(path + ": dim/cols must be positive");
  const double alpha = number_or(j, "alpha", 1.0);
  const double eps = number_or(j, "eps", 0.0);
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError(path + ": alpha must be positive and finite");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw ValidationError(path + ": eps must be nonnegative and finite");
  if (!j.contains("entries"))
    throw ValidationError(path + ": missing \"entries\"");
  const Eigen::MatrixXcd block =
      complex_matrix_from_json(j["entries"], dim, cols, path);
  BlockEncoding e = encode_contraction(block / alpha);
  e.alpha = alpha;
  e.eps = eps;
  return e;
}

Circuit circuit_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("circuit JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw ValidationError("circuit JSON: needs an integer field \"n\"");
  Circuit c;
  c.n_qubits = j["n"].get<int>();
  if (j.contains("gates")) {
    if (!j["gates"].is_array())
      throw ValidationError("circuit JSON: \"gates\" must be an array");
    for (const auto& jg : j["gates"]) c.add(gate_from_json(jg));
  }
  c.validate();
  return c;
}

StateTestInstance read_instance_json(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("q0") || !j.contains("q1"))
    throw ValidationError(path + ": instance needs circuits \"q0\" and \"q1\"");
  StateTestInstance inst;
  inst.q0 = circuit_from_json_text(j["q0"].dump());
  inst.q1 = circuit_from_json_text(j["q1"].dump());
  if (!j.contains("outputs") || !j["outputs"].is_array())
    throw ValidationError(path + ": instance needs an \"outputs\" array");
  for (const auto& o : j["outputs"]) {
    if (!o.is_number_integer())
      throw ValidationError(path + ": output indices must be integers");
    inst.outputs.push_back(o.get<int>());
  }
  inst.alpha = number_or(j, "alpha", 0.0);
  inst.beta = number_or(j, "beta", 0.0);
  inst.g = number_or(j, "g", 0.0);
  inst.validate();
  return inst;
}

std::string outcome_to_json(const TestOutcome& out,
                            const std::map<std::string, double>& extra) {
  json j;
  j["estimate"] = out.estimate;
  j["decision"] = out.decision();
  j["schedule"] = json::object();
  for (const auto& [k, v] : out.schedule) j["schedule"][k] = v;
  j["diagnostics"] = json::object();
  for (const auto& [k, v] : out.diagnostics) j["diagnostics"][k] = v;
  for (const auto& [k, v] : extra) j[k] = v;
  return j.dump(2) + "\n";
}

}  // namespace qsvt
