#pragma once
// Block-encodings / bitstring-indexed encodings as dense unitaries, plus the
// QSVT synthesis toolkit: Chebyshev phase modulation, linear combinations of
// unitaries, state preparation, and renormalization.

#include <vector>

#include <Eigen/Dense>

#include "qsvt/chebyshev.hpp"
#include "qsvt/simulator.hpp"

namespace qsvt {

// Ordered basis-index subsets spanning the left (Pi~) and right (Pi)
// projectors of a bitstring-indexed encoding.  The encoded operator is the
// |left| x |right| matrix alpha * <left_i| U |right_j>.
struct ProjectorSpec {
  std::vector<Eigen::Index> left;
  std::vector<Eigen::Index> right;

  // The standard block form |0...0><0...0| (x) I: both subsets are the first
  // 2^s basis indices of the 2^(s+a)-dimensional space (ancillas high).
  static ProjectorSpec block_form(int s);
};

struct BlockEncoding {
  Eigen::MatrixXcd unitary;  // dim 2^(s+a)
  int s = 0;                 // system qubits
  int a = 0;                 // ancilla qubits
  double alpha = 1.0;        // scale, >= 1
  double eps = 0.0;          // encoding error
  ProjectorSpec proj;

  void validate() const;
  Eigen::Index dim() const { return unitary.rows(); }
  // Pi~ U Pi as a |left| x |right| matrix (unscaled; multiply by alpha for
  // the encoded operator).
  Eigen::MatrixXcd extracted_block() const;
};

// Exact (alpha = 1, eps = 0) encoding of an arbitrary contraction A
// (any shape, spectral norm <= 1) by unitary dilation; A is zero-padded to a
// square power-of-two dimension and the projectors select its true shape.
BlockEncoding encode_contraction(const Eigen::MatrixXcd& A);

// Exact (alpha = 1, eps = 0) block-encoding of rho = Tr_{non-output}(Q|0><0|Q^dag)
// from the purification circuit Q; uses one application of Q and one of Q^dag
// around a register swap.  Output system = |output_qubits| fresh low qubits.
BlockEncoding purify_to_encoding(const Circuit& q, const std::vector<int>& output_qubits);

// Circuit of multiplexed RY rotations preparing sum_i sqrt(y_i/||y||_1)|i>
// via the telescoping weight decomposition; exact up to double rounding
// (eps is validated but the construction does not need to spend it).
Circuit prepare_amplitudes(const std::vector<double>& y, double eps);

// Encoding of sum_i y_i A_i with scale alpha' = sum_i |y_i| alpha_i and
// ceil(log2 m) selector ancillas (none when m = 1); negative weights are
// folded into the constituent unitary as a -1 global phase.
BlockEncoding lcu_combine(const std::vector<BlockEncoding>& encodings,
                          const std::vector<double>& y);

// Encoding of T_k^(SV)(A) by alternating phase modulation with angles
// phi_1 = (1-k)pi/2 and pi/2 thereafter; adds the single shared phase-kickback
// ancilla.  Requires alpha = 1.
BlockEncoding chebyshev_qsvt(const BlockEncoding& e, int k);

// LCU over chebyshev_qsvt(E, k) with weights chat_k (chat_0/2 on the identity
// term); non-isometry branch with alpha = l1 norm of the averaged
// coefficients.  Adds ceil(log2(d'+1)) selector ancillas on top of the phase
// ancilla.
BlockEncoding apply_poly_qsvt(const BlockEncoding& e, const ChebyshevPoly& p);

// Rescales an encoding of an isometry-up-to-scale to alpha = 1 via the
// gamma-rotation ancilla and a degree-k Chebyshev step; error grows to
// 36 eps.  Inputs with alpha <= 1 + 1e-12 are returned unchanged.
BlockEncoding renormalize(const BlockEncoding& e);

}  // namespace qsvt
