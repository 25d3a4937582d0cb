#include "qsvt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"

namespace qsvt {

namespace {

using cd = std::complex<double>;

int log2_dim(Eigen::Index dim, const char* what) {
  if (dim < 1) throw ValidationError(std::string(what) + ": empty state");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim)
    throw ValidationError(std::string(what) + ": dimension is not a power of two");
  return n;
}

Eigen::Matrix2cd single_qubit_matrix(const Gate& gate) {
  const double isq = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  if (gate.g == "H")
    m << isq, isq, isq, -isq;
  else if (gate.g == "X")
    m << 0, 1, 1, 0;
  else if (gate.g == "Y")
    m << 0, cd(0, -1), cd(0, 1), 0;
  else if (gate.g == "Z")
    m << 1, 0, 0, -1;
  else if (gate.g == "S")
    m << 1, 0, 0, cd(0, 1);
  else if (gate.g == "T")
    m << 1, 0, 0, std::polar(1.0, M_PI / 4.0);
  else if (gate.g == "RY") {
    const double c = std::cos(gate.theta / 2.0), s = std::sin(gate.theta / 2.0);
    m << c, -s, s, c;
  } else if (gate.g == "RZ") {
    m << std::polar(1.0, -gate.theta / 2.0), 0, 0, std::polar(1.0, gate.theta / 2.0);
  } else {
    throw ValidationError("unknown single-qubit gate: " + gate.g);
  }
  return m;
}

bool is_single_qubit(const std::string& g) {
  return g == "H" || g == "X" || g == "Y" || g == "Z" || g == "S" || g == "T" ||
         g == "RY" || g == "RZ";
}

void apply_single(const Eigen::Matrix2cd& m, int q, Eigen::VectorXcd& amps) {
  const Eigen::Index dim = amps.size();
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const cd a0 = amps[i];
    const cd a1 = amps[i | bit];
    amps[i] = m(0, 0) * a0 + m(0, 1) * a1;
    amps[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void apply_multi(const Eigen::MatrixXcd& m, const std::vector<int>& qs,
                 Eigen::VectorXcd& amps) {
  const int k = static_cast<int>(qs.size());
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (m.rows() != sub || m.cols() != sub)
    throw ValidationError("U gate: matrix dimension does not match qubit count");
  const Eigen::Index dim = amps.size();
  Eigen::Index mask = 0;
  for (int q : qs) mask |= Eigen::Index{1} << q;
  Eigen::VectorXcd gathered(sub), mixed(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & mask) continue;  // enumerate states with all targets = 0
    for (Eigen::Index s = 0; s < sub; ++s) {
      Eigen::Index idx = base;
      for (int b = 0; b < k; ++b)
        if (s & (Eigen::Index{1} << b)) idx |= Eigen::Index{1} << qs[static_cast<std::size_t>(b)];
      gathered[s] = amps[idx];
    }
    mixed = m * gathered;
    for (Eigen::Index s = 0; s < sub; ++s) {
      Eigen::Index idx = base;
      for (int b = 0; b < k; ++b)
        if (s & (Eigen::Index{1} << b)) idx |= Eigen::Index{1} << qs[static_cast<std::size_t>(b)];
      amps[idx] = mixed[s];
    }
  }
}

}  // namespace

void Circuit::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ValidationError("Circuit: qubit count must lie in [1, " +
                          std::to_string(kMaxQubits) + "]");
  for (const Gate& gate : gates) {
    for (int q : gate.q)
      if (q < 0 || q >= n_qubits)
        throw ValidationError("Circuit: gate qubit index out of range");
    std::vector<int> sorted = gate.q;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("Circuit: repeated qubit in gate");
    if (is_single_qubit(gate.g)) {
      if (gate.q.size() != 1)
        throw ValidationError("Circuit: " + gate.g + " takes one qubit");
    } else if (gate.g == "CNOT" || gate.g == "CZ" || gate.g == "SWAP") {
      if (gate.q.size() != 2)
        throw ValidationError("Circuit: " + gate.g + " takes two qubits");
    } else if (gate.g == "U") {
      if (gate.q.empty()) throw ValidationError("Circuit: U gate needs targets");
      const Eigen::Index sub = Eigen::Index{1} << gate.q.size();
      if (gate.matrix.rows() != sub || gate.matrix.cols() != sub)
        throw ValidationError("Circuit: U matrix dimension mismatch");
      const double dev = (gate.matrix.adjoint() * gate.matrix -
                          Eigen::MatrixXcd::Identity(sub, sub))
                             .cwiseAbs()
                             .maxCoeff();
      if (dev > 1e-10)
        throw ValidationError("Circuit: U matrix is not unitary to 1e-10");
    } else {
      throw ValidationError("Circuit: unknown gate " + gate.g);
    }
  }
}

Circuit& Circuit::add(Gate gate) {
  gates.push_back(std::move(gate));
  return *this;
}
Circuit& Circuit::h(int q) { return add({"H", {q}, 0.0, {}}); }
Circuit& Circuit::x(int q) { return add({"X", {q}, 0.0, {}}); }
Circuit& Circuit::y(int q) { return add({"Y", {q}, 0.0, {}}); }
Circuit& Circuit::z(int q) { return add({"Z", {q}, 0.0, {}}); }
Circuit& Circuit::s(int q) { return add({"S", {q}, 0.0, {}}); }
Circuit& Circuit::t(int q) { return add({"T", {q}, 0.0, {}}); }
Circuit& Circuit::ry(int q, double theta) { return add({"RY", {q}, theta, {}}); }
Circuit& Circuit::rz(int q, double theta) { return add({"RZ", {q}, theta, {}}); }
Circuit& Circuit::cnot(int c, int t) { return add({"CNOT", {c, t}, 0.0, {}}); }
Circuit& Circuit::cz(int c, int t) { return add({"CZ", {c, t}, 0.0, {}}); }
Circuit& Circuit::swap(int a, int b) { return add({"SWAP", {a, b}, 0.0, {}}); }
Circuit& Circuit::u(std::vector<int> qs, Eigen::MatrixXcd m) {
  return add({"U", std::move(qs), 0.0, std::move(m)});
}

int PureState::n_qubits() const { return log2_dim(amplitudes.size(), "PureState"); }

void PureState::validate() const {
  const int n = n_qubits();
  if (n > kMaxQubits) throw ResourceError("PureState: exceeds the qubit cap");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10)
    throw ValidationError("PureState: not normalized to 1e-10");
}

PureState PureState::zero(int n) {
  if (n < 1 || n > kMaxQubits)
    throw ValidationError("PureState: qubit count must lie in [1, " +
                          std::to_string(kMaxQubits) + "]");
  PureState psi;
  psi.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  psi.amplitudes[0] = 1.0;
  return psi;
}

int DensityMatrix::n_qubits() const { return log2_dim(entries.rows(), "DensityMatrix"); }

void DensityMatrix::validate() const {
  if (entries.rows() != entries.cols())
    throw ValidationError("DensityMatrix: matrix must be square");
  const int n = n_qubits();
  if (n > kMaxQubits) throw ResourceError("DensityMatrix: exceeds the qubit cap");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("DensityMatrix: not Hermitian to 1e-10");
  if (std::abs(entries.trace().real() - 1.0) > 1e-9 ||
      std::abs(entries.trace().imag()) > 1e-9)
    throw ValidationError("DensityMatrix: trace must equal 1 to 1e-9");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw ValidationError("DensityMatrix: negative eigenvalue beyond -1e-9");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  psi.validate();
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return {Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim)};
}

void apply_gate(const Gate& gate, int n, Eigen::VectorXcd& amps) {
  if (amps.size() != (Eigen::Index{1} << n))
    throw ValidationError("apply_gate: state dimension mismatch");
  if (is_single_qubit(gate.g)) {
    apply_single(single_qubit_matrix(gate), gate.q.at(0), amps);
    return;
  }
  const Eigen::Index dim = amps.size();
  if (gate.g == "CNOT") {
    const Eigen::Index cb = Eigen::Index{1} << gate.q.at(0);
    const Eigen::Index tb = Eigen::Index{1} << gate.q.at(1);
    for (Eigen::Index i = 0; i < dim; ++i)
      if ((i & cb) && !(i & tb)) std::swap(amps[i], amps[i | tb]);
  } else if (gate.g == "CZ") {
    const Eigen::Index cb = Eigen::Index{1} << gate.q.at(0);
    const Eigen::Index tb = Eigen::Index{1} << gate.q.at(1);
    for (Eigen::Index i = 0; i < dim; ++i)
      if ((i & cb) && (i & tb)) amps[i] = -amps[i];
  } else if (gate.g == "SWAP") {
    const Eigen::Index ab = Eigen::Index{1} << gate.q.at(0);
    const Eigen::Index bb = Eigen::Index{1} << gate.q.at(1);
    for (Eigen::Index i = 0; i < dim; ++i)
      if ((i & ab) && !(i & bb)) std::swap(amps[i], amps[(i & ~ab) | bb]);
  } else if (gate.g == "U") {
    apply_multi(gate.matrix, gate.q, amps);
  } else {
    throw ValidationError("apply_gate: unknown gate " + gate.g);
  }
}

PureState run_circuit(const Circuit& c, const PureState& initial) {
  c.validate();
  initial.validate();
  if (initial.n_qubits() != c.n_qubits)
    throw ValidationError("run_circuit: state/circuit qubit mismatch");
  PureState psi = initial;
  for (const Gate& gate : c.gates) apply_gate(gate, c.n_qubits, psi.amplitudes);
  return psi;
}

PureState run_circuit(const Circuit& c) { return run_circuit(c, PureState::zero(c.n_qubits)); }

DensityMatrix run_circuit(const Circuit& c, const DensityMatrix& initial) {
  c.validate();
  initial.validate();
  if (initial.n_qubits() != c.n_qubits)
    throw ValidationError("run_circuit: state/circuit qubit mismatch");
  Eigen::MatrixXcd rho = initial.entries;
  const int n = c.n_qubits;
  for (const Gate& gate : c.gates) {
    for (Eigen::Index col = 0; col < rho.cols(); ++col) {
      Eigen::VectorXcd v = rho.col(col);
      apply_gate(gate, n, v);
      rho.col(col) = v;
    }
    for (Eigen::Index row = 0; row < rho.rows(); ++row) {
      Eigen::VectorXcd v = rho.row(row).conjugate();
      apply_gate(gate, n, v);
      rho.row(row) = v.conjugate();
    }
  }
  return {rho};
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  c.validate();
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::VectorXcd v = U.col(col);
    for (const Gate& gate : c.gates) apply_gate(gate, c.n_qubits, v);
    U.col(col) = v;
  }
  return U;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  rho.validate();
  if (keep.empty()) throw ValidationError("partial_trace: keep set must be nonempty");
  const int n = rho.n_qubits();
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw ValidationError("partial_trace: repeated qubit in keep set");
  for (int q : kept)
    if (q < 0 || q >= n) throw ValidationError("partial_trace: qubit out of range");
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  const Eigen::Index dk = Eigen::Index{1} << kept.size();
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  auto full_index = [&](Eigen::Index k, Eigen::Index t) {
    Eigen::Index idx = 0;
    for (std::size_t b = 0; b < kept.size(); ++b)
      if (k & (Eigen::Index{1} << b)) idx |= Eigen::Index{1} << kept[b];
    for (std::size_t b = 0; b < traced.size(); ++b)
      if (t & (Eigen::Index{1} << b)) idx |= Eigen::Index{1} << traced[b];
    return idx;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index t = 0; t < dt; ++t)
        out(i, j) += rho.entries(full_index(i, t), full_index(j, t));
  return {out};
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep) {
  return partial_trace(DensityMatrix::from_pure(psi), keep);
}

double prob_all_zero(const PureState& psi, const std::vector<int>& qubits) {
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << q;
  double p = 0.0;
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    if (!(i & mask)) p += std::norm(psi.amplitudes[i]);
  return p;
}

double hadamard_test_prob(const Eigen::MatrixXcd& block, const DensityMatrix& rho) {
  rho.validate();
  if (block.rows() != rho.entries.rows() || block.cols() != rho.entries.cols())
    throw ValidationError("hadamard_test: operator/state dimension mismatch");
  return 0.5 * (1.0 + (block * rho.entries).trace().real());
}

double swap_test_prob(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  rho0.validate();
  rho1.validate();
  if (rho0.entries.rows() != rho1.entries.rows())
    throw ValidationError("swap_test: dimension mismatch");
  return 0.5 * (1.0 + (rho0.entries * rho1.entries).trace().real());
}

double sample_bernoulli(double p, std::int64_t trials, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sample_bernoulli: p outside [0,1]");
  if (trials < 1) throw ValidationError("sample_bernoulli: trials must be >= 1");
  Rng rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i)
    if (rng.next_double() < p) ++hits;
  return static_cast<double>(hits) / static_cast<double>(trials);
}

PureState exact_aa(const Eigen::MatrixXcd& U, const std::vector<bool>& good_mask,
                   int j) {
  const Eigen::Index dim = U.rows();
  if (U.cols() != dim || dim < 2)
    throw ValidationError("exact_aa: U must be square");
  if (static_cast<Eigen::Index>(good_mask.size()) != dim)
    throw ValidationError("exact_aa: projector mask size mismatch");
  if (j < 0) throw ValidationError("exact_aa: j must be >= 0");
  Eigen::VectorXcd psi = U.col(0);  // U |0...0>
  for (int it = 0; it < j; ++it) {
    // (I - 2 Pi_0)
    for (Eigen::Index i = 0; i < dim; ++i)
      if (good_mask[static_cast<std::size_t>(i)]) psi[i] = -psi[i];
    // -U (I - 2|0><0|) U^dag
    Eigen::VectorXcd y = U.adjoint() * psi;
    y[0] = -y[0];
    psi = -(U * y);
  }
  PureState out;
  out.amplitudes = psi;
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  rho.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries,
                                                     Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < 0.0) lam = 0.0;  // clipped per invariant (>= -1e-9 guaranteed)
    if (lam > 0.0) s -= lam * std::log(lam);
  }
  return s;
}

double distance_oracle(const DensityMatrix& rho0, const DensityMatrix& rho1,
                       DistanceMeasure measure) {
  rho0.validate();
  rho1.validate();
  if (rho0.entries.rows() != rho1.entries.rows())
    throw ValidationError("distance_oracle: dimension mismatch");
  switch (measure) {
    case DistanceMeasure::td: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          rho0.entries - rho1.entries, Eigen::EigenvaluesOnly);
      return 0.5 * es.eigenvalues().cwiseAbs().sum();
    }
    case DistanceMeasure::fidelity: {
      // F = Tr|sqrt(rho0) sqrt(rho1)| = sum of singular values.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(rho0.entries);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(rho1.entries);
      auto clipped_sqrt = [](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& e) {
        Eigen::VectorXd v = e.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return Eigen::MatrixXcd(e.eigenvectors() * v.asDiagonal() *
                                e.eigenvectors().adjoint());
      };
      const Eigen::MatrixXcd prod = clipped_sqrt(e0) * clipped_sqrt(e1);
      return prod.jacobiSvd().singularValues().sum();
    }
    case DistanceMeasure::hs2: {
      const Eigen::MatrixXcd d = rho0.entries - rho1.entries;
      return 0.5 * (d * d).trace().real();
    }
    case DistanceMeasure::entropy_diff:
      return von_neumann_entropy(rho0) - von_neumann_entropy(rho1);
    case DistanceMeasure::qjs2: {
      DensityMatrix mix{0.5 * (rho0.entries + rho1.entries)};
      const double qjs = von_neumann_entropy(mix) -
                         0.5 * (von_neumann_entropy(rho0) + von_neumann_entropy(rho1));
      return qjs / std::log(2.0);
    }
  }
  throw ValidationError("distance_oracle: unknown measure");
}

}  // namespace qsvt
