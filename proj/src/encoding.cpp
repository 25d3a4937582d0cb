#include "qsvt/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qsvt/errors.hpp"

namespace qsvt {

namespace {

using cd = std::complex<double>;

Eigen::Index next_pow2(Eigen::Index v) {
  Eigen::Index p = 1;
  while (p < v) p <<= 1;
  return p;
}

int int_log2(Eigen::Index pow2) {
  int n = 0;
  while ((Eigen::Index{1} << n) < pow2) ++n;
  return n;
}

void check_qubit_budget(Eigen::Index dim, const char* what) {
  if (dim > (Eigen::Index{1} << kMaxQubits))
    throw ResourceError(std::string(what) + ": encoding exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit budget");
}

// Diagonal phase operator e^{i phi (2 Pi - I)} over the full index space,
// where Pi projects onto the given basis-index subset.  This is the dense
// form of CPiNOT . (e^{-i phi Z} on the ancilla) . CPiNOT with the kickback
// ancilla in |b>; the b = 1 branch carries the conjugate phases.
Eigen::VectorXcd phase_diag(Eigen::Index dim, const std::vector<Eigen::Index>& subset,
                            double phi) {
  Eigen::VectorXcd d =
      Eigen::VectorXcd::Constant(dim, std::polar(1.0, -phi));
  for (Eigen::Index i : subset) d[i] = std::polar(1.0, phi);
  return d;
}

}  // namespace

ProjectorSpec ProjectorSpec::block_form(int s) {
  ProjectorSpec p;
  const Eigen::Index d = Eigen::Index{1} << s;
  p.left.resize(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) p.left[static_cast<std::size_t>(i)] = i;
  p.right = p.left;
  return p;
}

void BlockEncoding::validate() const {
  const Eigen::Index d = unitary.rows();
  if (d < 1 || unitary.cols() != d)
    throw ValidationError("BlockEncoding: unitary must be square");
  if (d != (Eigen::Index{1} << (s + a)))
    throw ValidationError("BlockEncoding: dimension must equal 2^(s+a)");
  check_qubit_budget(d, "BlockEncoding");
  if (!(alpha >= 1.0 - 1e-12))
    throw ValidationError("BlockEncoding: scale alpha must be >= 1");
  if (!(eps >= 0.0)) throw ValidationError("BlockEncoding: error must be >= 0");
  if (proj.left.empty() || proj.right.empty())
    throw ValidationError("BlockEncoding: projector subsets must be nonempty");
  for (Eigen::Index i : proj.left)
    if (i < 0 || i >= d) throw ValidationError("BlockEncoding: projector index range");
  for (Eigen::Index i : proj.right)
    if (i < 0 || i >= d) throw ValidationError("BlockEncoding: projector index range");
  // Unitarity: exhaustive below ~2^10, randomized probe above.
  if (d <= 1024) {
    const double dev =
        (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (dev > 1e-10)
      throw ValidationError("BlockEncoding: unitary deviates beyond 1e-10");
  } else {
    for (int probe = 0; probe < 8; ++probe) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v[(probe * 2654435761u) % d] = 1.0;
      if (std::abs((unitary * v).norm() - 1.0) > 1e-9)
        throw ValidationError("BlockEncoding: unitary deviates beyond tolerance");
    }
  }
}

Eigen::MatrixXcd BlockEncoding::extracted_block() const {
  Eigen::MatrixXcd b(proj.left.size(), proj.right.size());
  for (std::size_t i = 0; i < proj.left.size(); ++i)
    for (std::size_t j = 0; j < proj.right.size(); ++j)
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          unitary(proj.left[i], proj.right[j]);
  return b;
}

BlockEncoding encode_contraction(const Eigen::MatrixXcd& A) {
  if (A.rows() < 1 || A.cols() < 1)
    throw ValidationError("encode_contraction: empty matrix");
  const Eigen::Index d = next_pow2(std::max(A.rows(), A.cols()));
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d, d);
  P.topLeftCorner(A.rows(), A.cols()) = A;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      P, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().maxCoeff() > 1.0 + 1e-12)
    throw ValidationError("encode_contraction: spectral norm exceeds 1");
  const Eigen::VectorXd sv = svd.singularValues().cwiseMin(1.0);
  const Eigen::VectorXd root = (Eigen::VectorXd::Ones(d) - sv.cwiseProduct(sv))
                                   .cwiseMax(0.0)
                                   .cwiseSqrt();
  // W = [[A, sqrt(I - A A^dag)], [sqrt(I - A^dag A), -A^dag]].
  const Eigen::MatrixXcd su =
      svd.matrixU() * root.asDiagonal() * svd.matrixU().adjoint();
  const Eigen::MatrixXcd sl =
      svd.matrixV() * root.asDiagonal() * svd.matrixV().adjoint();
  BlockEncoding e;
  e.unitary.resize(2 * d, 2 * d);
  e.unitary.topLeftCorner(d, d) = P;
  e.unitary.topRightCorner(d, d) = su;
  e.unitary.bottomLeftCorner(d, d) = sl;
  e.unitary.bottomRightCorner(d, d) = -P.adjoint();
  e.s = int_log2(d);
  e.a = 1;
  e.alpha = 1.0;
  e.eps = 0.0;
  e.proj.left.resize(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    e.proj.left[static_cast<std::size_t>(i)] = i;
  e.proj.right.resize(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    e.proj.right[static_cast<std::size_t>(j)] = j;
  e.validate();
  return e;
}

BlockEncoding purify_to_encoding(const Circuit& q, const std::vector<int>& output_qubits) {
  q.validate();
  if (output_qubits.empty())
    throw ValidationError("purify_to_encoding: output set must be nonempty");
  std::vector<int> outs = output_qubits;
  std::sort(outs.begin(), outs.end());
  if (std::adjacent_find(outs.begin(), outs.end()) != outs.end())
    throw ValidationError("purify_to_encoding: repeated output qubit");
  for (int qb : outs)
    if (qb < 0 || qb >= q.n_qubits)
      throw ValidationError("purify_to_encoding: output qubit out of range");
  const int n = q.n_qubits;
  const int r = static_cast<int>(outs.size());
  const Eigen::Index dim = Eigen::Index{1} << (n + r);
  check_qubit_budget(dim, "purify_to_encoding");

  // Fresh system register on qubits [0, r); the purification register (Q's
  // qubits) sits on [r, r + n).  U = (Q^dag (x) I) SWAP (Q (x) I).
  Circuit full;
  full.n_qubits = n + r;
  const Eigen::MatrixXcd qu = circuit_unitary(q);
  std::vector<int> purif(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) purif[static_cast<std::size_t>(i)] = r + i;
  full.u(purif, qu);
  for (int j = 0; j < r; ++j) full.swap(j, r + outs[static_cast<std::size_t>(j)]);
  full.u(purif, qu.adjoint());

  BlockEncoding e;
  e.unitary = circuit_unitary(full);
  e.s = r;
  e.a = n;
  e.alpha = 1.0;
  e.eps = 0.0;
  e.proj = ProjectorSpec::block_form(r);
  e.validate();
  return e;
}

Circuit prepare_amplitudes(const std::vector<double>& y, double eps) {
  if (y.empty()) throw ValidationError("prepare_amplitudes: empty weight vector");
  if (!(eps >= 0.0)) throw ValidationError("prepare_amplitudes: eps must be >= 0");
  double total = 0.0;
  for (double v : y) {
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("prepare_amplitudes: weights must be finite and >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw ValidationError("prepare_amplitudes: all-zero weights");

  const Eigen::Index m = next_pow2(static_cast<Eigen::Index>(y.size()));
  const int t = std::max(int_log2(m), 1);
  std::vector<double> p(static_cast<std::size_t>(Eigen::Index{1} << t), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) p[i] = y[i] / total;

  Circuit c;
  c.n_qubits = t;
  // Telescoping weights: at the step for qubit qb (MSB downward), the
  // rotation conditioned on the already-fixed high bits `high` splits the
  // prefix weight W(high) into its qb=0 / qb=1 halves.
  for (int qb = t - 1; qb >= 0; --qb) {
    const int n_ctrl = t - 1 - qb;
    const Eigen::Index sub = Eigen::Index{1} << (n_ctrl + 1);
    Eigen::MatrixXcd mux = Eigen::MatrixXcd::Identity(sub, sub);
    bool nontrivial = false;
    for (Eigen::Index high = 0; high < (Eigen::Index{1} << n_ctrl); ++high) {
      double w0 = 0.0, w1 = 0.0;
      const Eigen::Index lows = Eigen::Index{1} << qb;
      for (Eigen::Index low = 0; low < lows; ++low) {
        const Eigen::Index base = (high << (qb + 1)) | low;
        w0 += p[static_cast<std::size_t>(base)];
        w1 += p[static_cast<std::size_t>(base | lows)];
      }
      const double w = w0 + w1;
      if (w <= 0.0) continue;
      const double theta = 2.0 * std::atan2(std::sqrt(w1), std::sqrt(w0));
      if (theta == 0.0) continue;
      nontrivial = true;
      // Local index layout: bit 0 = rotated qubit, bits 1.. = controls.
      const Eigen::Index r0 = high << 1;
      mux(r0, r0) = std::cos(theta / 2.0);
      mux(r0, r0 | 1) = -std::sin(theta / 2.0);
      mux(r0 | 1, r0) = std::sin(theta / 2.0);
      mux(r0 | 1, r0 | 1) = std::cos(theta / 2.0);
    }
    if (!nontrivial) continue;
    if (n_ctrl == 0) {
      c.ry(qb, 2.0 * std::atan2(mux(1, 0).real(), mux(0, 0).real()));
    } else {
      std::vector<int> qs{qb};
      for (int cq = qb + 1; cq < t; ++cq) qs.push_back(cq);
      c.u(qs, mux);
    }
  }
  c.validate();
  return c;
}

namespace {

// Shared LCU assembly: given constituent unitaries V_i (dim D, weights w_i
// >= 0 with signs already folded into V_i), returns
// (P^dag (x) I) [sum_i |i><i| (x) V_i] (P (x) I) with the selector register
// high.  Slots past the constituent count act as identity.
Eigen::MatrixXcd lcu_unitary(const std::vector<const Eigen::MatrixXcd*>& v,
                             const std::vector<double>& w) {
  const Eigen::Index D = v.at(0)->rows();
  const Circuit prep = prepare_amplitudes(w, 0.0);
  const Eigen::MatrixXcd P = circuit_unitary(prep);
  const Eigen::Index nsel = P.rows();
  const Eigen::Index full = nsel * D;
  check_qubit_budget(full, "lcu_combine");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(full, full);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(D, D);
  // Block (j, k) of the result is sum_i conj(P(i,j)) P(i,k) V_i.
  for (Eigen::Index i = 0; i < nsel; ++i) {
    const Eigen::MatrixXcd& vi =
        (i < static_cast<Eigen::Index>(v.size())) ? *v[static_cast<std::size_t>(i)] : eye;
    for (Eigen::Index j = 0; j < nsel; ++j) {
      if (P(i, j) == cd(0.0)) continue;
      for (Eigen::Index k = 0; k < nsel; ++k) {
        const cd coef = std::conj(P(i, j)) * P(i, k);
        if (coef == cd(0.0)) continue;
        out.block(j * D, k * D, D, D) += coef * vi;
      }
    }
  }
  return out;
}

}  // namespace

BlockEncoding lcu_combine(const std::vector<BlockEncoding>& encodings,
                          const std::vector<double>& y) {
  if (encodings.empty() || encodings.size() != y.size())
    throw ValidationError("lcu_combine: need one weight per encoding");
  const BlockEncoding& first = encodings.front();
  for (const BlockEncoding& e : encodings) {
    e.validate();
    if (e.s != first.s || e.a != first.a || e.dim() != first.dim())
      throw ValidationError("lcu_combine: encodings must share s and a");
    if (e.proj.left != first.proj.left || e.proj.right != first.proj.right)
      throw ValidationError("lcu_combine: encodings must share projectors");
  }
  double alpha_out = 0.0, y_l1 = 0.0, eps_max = 0.0;
  std::vector<double> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw ValidationError("lcu_combine: non-finite weight");
    w[i] = std::abs(y[i]) * encodings[i].alpha;
    alpha_out += w[i];
    y_l1 += std::abs(y[i]);
    eps_max = std::max(eps_max, encodings[i].eps);
  }
  if (!(alpha_out > 0.0)) throw ValidationError("lcu_combine: all weights vanish");

  if (encodings.size() == 1 && alpha_out >= 1.0) {
    BlockEncoding out = first;
    if (y[0] < 0.0) out.unitary = -out.unitary;
    out.alpha = alpha_out;
    out.eps = eps_max * y_l1;
    return out;
  }

  std::vector<Eigen::MatrixXcd> negated;
  std::vector<const Eigen::MatrixXcd*> v;
  negated.reserve(y.size() + 2);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) {
      negated.push_back(-encodings[i].unitary);
      v.push_back(&negated.back());
    } else {
      v.push_back(&encodings[i].unitary);
    }
  }
  // A combined weight below 1 is not a valid encoding scale; top it up with a
  // canceling +I/-I pair so the encoded operator is untouched.
  Eigen::MatrixXcd pos_pad, neg_pad;
  if (alpha_out < 1.0) {
    const double slack = 1.0 - alpha_out;
    pos_pad = Eigen::MatrixXcd::Identity(first.dim(), first.dim());
    neg_pad = -pos_pad;
    v.push_back(&pos_pad);
    v.push_back(&neg_pad);
    w.push_back(slack / 2.0);
    w.push_back(slack / 2.0);
    alpha_out = 1.0;
  }

  BlockEncoding out;
  out.unitary = lcu_unitary(v, w);
  const int t = int_log2(out.unitary.rows() / first.dim());
  out.s = first.s;
  out.a = first.a + t;
  out.alpha = alpha_out;
  out.eps = eps_max * y_l1;
  out.proj = first.proj;  // selector bits high and zero: indices unchanged
  out.validate();
  return out;
}

BlockEncoding chebyshev_qsvt(const BlockEncoding& e, int k) {
  e.validate();
  if (k < 1) throw ValidationError("chebyshev_qsvt: k must be >= 1");
  if (std::abs(e.alpha - 1.0) > 1e-9)
    throw ValidationError("chebyshev_qsvt: requires alpha = 1 (renormalize first)");
  const Eigen::Index D = e.dim();
  check_qubit_budget(2 * D, "chebyshev_qsvt");

  // Left-to-right sequence of k phase/(U or U^dag) pairs; phases phi_1 =
  // (1-k)pi/2 and pi/2 afterwards.  For odd k the leftmost operator pair is
  // (Pi~-phase, U); for even k it is (Pi-phase, U^dag).
  auto modulated = [&](double sign) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(D, D);
    const Eigen::MatrixXcd udag = e.unitary.adjoint();
    for (int j = 1; j <= k; ++j) {
      const double phi = sign * ((j == 1) ? (1 - k) * M_PI / 2.0 : M_PI / 2.0);
      const bool left_proj = (k % 2 == 1) ? (j % 2 == 1) : (j % 2 == 0);
      const Eigen::VectorXcd ph =
          phase_diag(D, left_proj ? e.proj.left : e.proj.right, phi);
      const bool use_u = (k % 2 == 1) ? (j % 2 == 1) : (j % 2 == 0);
      m = m * ph.asDiagonal() * (use_u ? e.unitary : udag);
    }
    return m;
  };

  BlockEncoding out;
  out.unitary = Eigen::MatrixXcd::Zero(2 * D, 2 * D);
  out.unitary.topLeftCorner(D, D) = modulated(1.0);
  out.unitary.bottomRightCorner(D, D) = modulated(-1.0);  // kickback |1> branch
  out.s = e.s;
  out.a = e.a + 1;
  out.alpha = 1.0;
  out.eps = (e.eps == 0.0) ? 0.0 : 4.0 * k * std::sqrt(e.eps);
  out.proj = e.proj;
  out.validate();
  return out;
}

BlockEncoding apply_poly_qsvt(const BlockEncoding& e, const ChebyshevPoly& p) {
  e.validate();
  if (p.coeffs.empty()) throw ValidationError("apply_poly_qsvt: empty polynomial");
  if (e.proj.left != e.proj.right)
    throw ValidationError("apply_poly_qsvt: constant term needs matching projectors");
  const int dprime = p.degree;
  const Eigen::Index D = 2 * e.dim();  // every constituent carries the phase ancilla

  // Constituents: slot k holds T_k(A) via chebyshev_qsvt (the constant term
  // is the identity at weight |chat_0|/2); zero-weight slots stay identity
  // and contribute nothing.
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(D, D);
  std::vector<Eigen::MatrixXcd> units(static_cast<std::size_t>(dprime) + 1);
  std::vector<const Eigen::MatrixXcd*> v;
  std::vector<double> w(static_cast<std::size_t>(dprime) + 1, 0.0);
  for (int k = 0; k <= dprime; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const double c = p.coeffs[i];
    w[i] = (k == 0) ? std::abs(c) / 2.0 : std::abs(c);
    if (w[i] == 0.0) {
      v.push_back(&eye);
      continue;
    }
    units[i] = (k == 0) ? eye : chebyshev_qsvt(e, k).unitary;
    if (c < 0.0) units[i] = -units[i];
    v.push_back(&units[i]);
  }
  if (p.lcu_weight() == 0.0)
    throw ValidationError("apply_poly_qsvt: zero polynomial");

  // A combined weight below 1 is not a valid scale; pad with a canceling
  // +I/-I pair (see lcu_combine).
  Eigen::MatrixXcd neg_eye;
  double alpha_out = p.lcu_weight();
  if (alpha_out < 1.0) {
    const double slack = 1.0 - alpha_out;
    neg_eye = -eye;
    v.push_back(&eye);
    v.push_back(&neg_eye);
    w.push_back(slack / 2.0);
    w.push_back(slack / 2.0);
    alpha_out = 1.0;
  }

  BlockEncoding out;
  out.unitary = lcu_unitary(v, w);
  const int t = int_log2(out.unitary.rows() / D);
  out.s = e.s;
  out.a = e.a + 1 + t;
  out.alpha = alpha_out;
  out.eps = (e.eps == 0.0) ? 0.0
                           : 4.0 * dprime * std::sqrt(e.eps) * p.lcu_weight() *
                                 p.lcu_weight();
  out.proj = e.proj;
  out.validate();
  return out;
}

BlockEncoding renormalize(const BlockEncoding& e) {
  e.validate();
  if (e.alpha <= 1.0 + 1e-12) return e;

  // Isometry-up-to-scale check: singular values of alpha * block must sit in
  // a band of width 10 eps around a common value <= 1.
  const Eigen::MatrixXcd scaled = e.alpha * e.extracted_block();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled);
  const double smax = svd.singularValues().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  const double band = 10.0 * std::max(e.eps, 1e-12);
  if (smax - smin > band || smax > 1.0 + band)
    throw ValidationError(
        "renormalize: encoded operator is not an isometry up to scale "
        "(unsupported shape)");

  const int k =
      2 * static_cast<int>(std::ceil(M_PI * (e.alpha + 1.0) / 2.0)) + 1;
  const double gamma = (e.alpha + e.eps) * std::sin(M_PI / (2.0 * k));
  const Eigen::Index D = e.dim();
  check_qubit_budget(4 * D, "renormalize");

  Eigen::Matrix2cd r;
  r << gamma, -std::sqrt(1.0 - gamma * gamma), std::sqrt(1.0 - gamma * gamma),
      gamma;
  BlockEncoding widened;
  widened.unitary = Eigen::MatrixXcd::Zero(2 * D, 2 * D);
  widened.unitary.topLeftCorner(D, D) = r(0, 0) * e.unitary;
  widened.unitary.topRightCorner(D, D) = r(0, 1) * e.unitary;
  widened.unitary.bottomLeftCorner(D, D) = r(1, 0) * e.unitary;
  widened.unitary.bottomRightCorner(D, D) = r(1, 1) * e.unitary;
  widened.s = e.s;
  widened.a = e.a + 1;
  widened.alpha = 1.0;  // encodes sin(pi/2k) * (near-isometry)
  widened.eps = e.eps;
  widened.proj = e.proj;

  BlockEncoding out = chebyshev_qsvt(widened, k);
  // T_k(sin(pi/2k)) = cos((k-1)pi/2); flip the (-1)^((k-1)/2) sign so the
  // fixed point maps to +1.
  if (((k - 1) / 2) % 2 == 1) out.unitary = -out.unitary;
  out.alpha = 1.0;
  out.eps = 36.0 * e.eps;
  out.validate();
  return out;
}

}  // namespace qsvt
