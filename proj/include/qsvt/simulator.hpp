#pragma once
// Small statevector / density-matrix simulator: circuits, measurements,
// Hadamard and SWAP tests, exact amplitude amplification, distance oracles.
// Qubit 0 is the least significant bit of the state index.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsvt {

inline constexpr int kMaxQubits = 14;

struct Gate {
  std::string g;            // H X Y Z S T RY RZ CNOT CZ SWAP U
  std::vector<int> q;       // target indices; for CNOT/CZ: {control, target}
  double theta = 0.0;       // RY / RZ only
  Eigen::MatrixXcd matrix;  // U only, dim 2^|q|
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  void validate() const;

  // Fluent builders.
  Circuit& add(Gate gate);
  Circuit& h(int q);
  Circuit& x(int q);
  Circuit& y(int q);
  Circuit& z(int q);
  Circuit& s(int q);
  Circuit& t(int q);
  Circuit& ry(int q, double theta);
  Circuit& rz(int q, double theta);
  Circuit& cnot(int control, int target);
  Circuit& cz(int control, int target);
  Circuit& swap(int a, int b);
  Circuit& u(std::vector<int> qs, Eigen::MatrixXcd m);
};

struct PureState {
  Eigen::VectorXcd amplitudes;

  int n_qubits() const;
  void validate() const;  // power-of-two length, unit norm to 1e-10
  static PureState zero(int n);
};

struct DensityMatrix {
  Eigen::MatrixXcd entries;

  int n_qubits() const;
  void validate() const;  // Hermitian 1e-10, eigenvalues >= -1e-9, trace 1e-9
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n);
};

// Apply `gate` in place to a length-2^n amplitude vector.
void apply_gate(const Gate& gate, int n, Eigen::VectorXcd& amps);

PureState run_circuit(const Circuit& c, const PureState& initial);
PureState run_circuit(const Circuit& c);  // from |0...0>
DensityMatrix run_circuit(const Circuit& c, const DensityMatrix& initial);

// Dense unitary of the whole circuit (guarded by the qubit cap).
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep);

// Probability that measuring the listed qubits yields all zeros.
double prob_all_zero(const PureState& psi, const std::vector<int>& qubits);

// Hadamard test on a (not necessarily unitary) operator block A acting on
// rho's space: probability of outcome 0 = (1 + Re Tr(A rho)) / 2.
double hadamard_test_prob(const Eigen::MatrixXcd& block, const DensityMatrix& rho);

// SWAP test: probability of outcome 0 = (1 + Tr(rho0 rho1)) / 2.
double swap_test_prob(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Empirical frequency of `trials` Bernoulli draws with success probability p.
double sample_bernoulli(double p, std::int64_t trials, std::uint64_t seed);

// G^j U|0...0> with G = -U (I - 2|0...0><0...0|) U^dag (I - 2 Pi_0), where
// Pi_0 projects onto the computational basis states flagged by `good_mask`.
PureState exact_aa(const Eigen::MatrixXcd& U, const std::vector<bool>& good_mask,
                   int j);

enum class DistanceMeasure { td, fidelity, hs2, entropy_diff, qjs2 };

// Exact eigendecomposition-based distances; entropy_diff = S(rho0) - S(rho1)
// in nats; qjs2 = QJS / ln 2.
double distance_oracle(const DensityMatrix& rho0, const DensityMatrix& rho1,
                       DistanceMeasure measure);

// S(rho) = -Tr rho ln rho in nats (0 ln 0 = 0), eigenvalues in [-1e-9, 0)
// clipped to zero.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace qsvt
