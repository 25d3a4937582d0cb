#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"

namespace oracles {

namespace {

using cd = std::complex<double>;

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

double best_uniform_error(const std::function<double(double)>& f, int d,
                          int grid_n) {
  std::vector<double> xs(static_cast<std::size_t>(grid_n));
  std::vector<double> fs(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    xs[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (grid_n - 1.0);
    fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
  }
  auto cheb_row = [&](double x, Eigen::RowVectorXd& row) {
    double tkm1 = 1.0, tk = x;
    row(0) = 1.0;
    if (d >= 1) row(1) = x;
    for (int k = 2; k <= d; ++k) {
      const double tnext = 2.0 * x * tk - tkm1;
      row(k) = tnext;
      tkm1 = tk;
      tk = tnext;
    }
  };

  // Initial references: Chebyshev points mapped onto the grid.
  const int m = d + 2;
  std::vector<int> ref(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double x = -std::cos(M_PI * i / (m - 1.0));
    ref[static_cast<std::size_t>(i)] =
        static_cast<int>(std::lround((x + 1.0) / 2.0 * (grid_n - 1)));
  }
  std::sort(ref.begin(), ref.end());
  ref.erase(std::unique(ref.begin(), ref.end()), ref.end());
  while (static_cast<int>(ref.size()) < m) ref.push_back(grid_n - 1 - static_cast<int>(ref.size()));
  std::sort(ref.begin(), ref.end());

  Eigen::VectorXd coef(d + 1);
  double levelled = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    // Solve sum_k b_k T_k(x_i) + (-1)^i E = f(x_i) on the references.
    Eigen::MatrixXd sys(m, d + 2);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
      Eigen::RowVectorXd row(d + 1);
      cheb_row(xs[static_cast<std::size_t>(ref[static_cast<std::size_t>(i)])], row);
      sys.block(i, 0, 1, d + 1) = row;
      sys(i, d + 1) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs(i) = fs[static_cast<std::size_t>(ref[static_cast<std::size_t>(i)])];
    }
    const Eigen::VectorXd sol = sys.colPivHouseholderQr().solve(rhs);
    coef = sol.head(d + 1);
    levelled = std::abs(sol(d + 1));

    // Error on the whole grid.
    std::vector<double> err(static_cast<std::size_t>(grid_n));
    double maxerr = 0.0;
    for (int i = 0; i < grid_n; ++i) {
      Eigen::RowVectorXd row(d + 1);
      cheb_row(xs[static_cast<std::size_t>(i)], row);
      err[static_cast<std::size_t>(i)] = fs[static_cast<std::size_t>(i)] - row * coef;
      maxerr = std::max(maxerr, std::abs(err[static_cast<std::size_t>(i)]));
    }
    if (maxerr <= levelled * (1.0 + 1e-9) || maxerr - levelled < 1e-15) break;

    // Multi-point exchange: local extremum of |err| in each sign-alternating
    // stretch, keeping m alternating references including the global max.
    std::vector<int> new_ref;
    int i = 0;
    while (i < grid_n) {
      const int sign = err[static_cast<std::size_t>(i)] >= 0.0 ? 1 : -1;
      int best = i;
      while (i < grid_n &&
             (err[static_cast<std::size_t>(i)] >= 0.0 ? 1 : -1) == sign) {
        if (std::abs(err[static_cast<std::size_t>(i)]) >
            std::abs(err[static_cast<std::size_t>(best)]))
          best = i;
        ++i;
      }
      new_ref.push_back(best);
    }
    if (static_cast<int>(new_ref.size()) < m) break;  // degenerate; accept
    // Trim to m consecutive alternating points containing the largest error.
    int gmax = 0;
    for (std::size_t j = 1; j < new_ref.size(); ++j)
      if (std::abs(err[static_cast<std::size_t>(new_ref[j])]) >
          std::abs(err[static_cast<std::size_t>(new_ref[static_cast<std::size_t>(gmax)])]))
        gmax = static_cast<int>(j);
    int lo = std::min<int>(std::max(0, gmax - (m - 1)),
                           static_cast<int>(new_ref.size()) - m);
    // Slide the window to include gmax.
    lo = std::clamp(lo, std::max(0, gmax - m + 1), gmax);
    std::vector<int> trimmed(new_ref.begin() + lo, new_ref.begin() + lo + m);
    if (trimmed == ref) break;
    ref = trimmed;
  }
  return levelled;
}

double eval_monomial_basis(const std::vector<double>& cheb_coeffs, double x) {
  const std::size_t n = cheb_coeffs.size();
  // Convert T_k recursively to monomials (exact integer-weighted recurrence);
  // the monomial coefficients grow like 2^k, so accumulate in long double.
  std::vector<std::vector<long double>> t(n);
  std::vector<long double> mono(n, 0.0L);
  for (std::size_t k = 0; k < n; ++k) {
    t[k].assign(k + 1, 0.0L);
    if (k == 0)
      t[k][0] = 1.0L;
    else if (k == 1)
      t[k][1] = 1.0L;
    else {
      for (std::size_t j = 0; j < k; ++j) t[k][j + 1] += 2.0L * t[k - 1][j];
      for (std::size_t j = 0; j < k - 1; ++j) t[k][j] -= t[k - 2][j];
    }
    const long double c = (k == 0) ? cheb_coeffs[0] / 2.0L : cheb_coeffs[k];
    for (std::size_t j = 0; j <= k; ++j) mono[j] += c * t[k][j];
  }
  long double acc = 0.0L;
  for (std::size_t j = n; j-- > 0;) acc = acc * x + mono[j];
  return static_cast<double>(acc);
}

Eigen::MatrixXcd partial_trace_loops(const Eigen::MatrixXcd& rho, int n,
                                     const std::vector<int>& keep) {
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  const Eigen::Index dk = Eigen::Index{1} << keep.size();
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index t = 0; t < dt; ++t) {
        Eigen::Index full_i = 0, full_j = 0;
        for (std::size_t b = 0; b < keep.size(); ++b) {
          if (i & (Eigen::Index{1} << b)) full_i |= Eigen::Index{1} << keep[b];
          if (j & (Eigen::Index{1} << b)) full_j |= Eigen::Index{1} << keep[b];
        }
        for (std::size_t b = 0; b < traced.size(); ++b) {
          if (t & (Eigen::Index{1} << b)) {
            full_i |= Eigen::Index{1} << traced[b];
            full_j |= Eigen::Index{1} << traced[b];
          }
        }
        out(i, j) += rho(full_i, full_j);
      }
  return out;
}

Eigen::MatrixXcd chebyshev_sv(const Eigen::MatrixXcd& a, int k) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    sv[i] = std::cos(k * std::acos(std::clamp(sv[i], -1.0, 1.0)));
  const Eigen::MatrixXcd mid = sv.cast<cd>().asDiagonal();
  if (k % 2 == 1)
    return svd.matrixU().leftCols(sv.size()) * mid *
           svd.matrixV().leftCols(sv.size()).adjoint();
  return svd.matrixV().leftCols(sv.size()) * mid *
         svd.matrixV().leftCols(sv.size()).adjoint();
}

Eigen::MatrixXcd poly_of_hermitian_monomial(const qsvt::ChebyshevPoly& p,
                                            const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    vals[i] = eval_monomial_basis(p.coeffs, std::clamp(vals[i], -1.0, 1.0));
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> arcsin_power_row(int k, int L) {
  std::vector<long double> row1(static_cast<std::size_t>(L) + 1, 0.0L);
  long double g = 1.0L;  // binom(l-1,(l-1)/2) 2^{-(l-1)}
  for (int l = 1; l <= L; l += 2) {
    row1[static_cast<std::size_t>(l)] = (2.0L / M_PIl) * g / l;
    g *= static_cast<long double>(l) / (l + 1);
  }
  std::vector<long double> acc(static_cast<std::size_t>(L) + 1, 0.0L);
  acc[0] = 1.0L;
  for (int rep = 0; rep < k; ++rep) {
    std::vector<long double> next(static_cast<std::size_t>(L) + 1, 0.0L);
    for (int i = 0; i <= L; ++i) {
      if (acc[static_cast<std::size_t>(i)] == 0.0L) continue;
      for (int j = 1; i + j <= L; j += 2)
        next[static_cast<std::size_t>(i + j)] +=
            acc[static_cast<std::size_t>(i)] * row1[static_cast<std::size_t>(j)];
    }
    acc = std::move(next);
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i]);
  return out;
}

double hoeffding_band(std::int64_t trials, double fail) {
  return std::sqrt(std::log(2.0 / fail) / (2.0 * static_cast<double>(trials)));
}

Eigen::MatrixXcd random_unitary(int dim, std::uint64_t seed) {
  qsvt::Rng rng(seed);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = cd(rng.next_normal(), rng.next_normal());
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i)
    q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

Eigen::MatrixXcd random_density(int dim, std::uint64_t seed) {
  qsvt::Rng rng(seed);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = cd(rng.next_normal(), rng.next_normal());
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Eigen::MatrixXcd random_contraction(int rows, int cols, double max_norm,
                                    bool hermitian, std::uint64_t seed) {
  qsvt::Rng rng(seed);
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      g(i, j) = cd(rng.next_normal(), rng.next_normal());
  if (hermitian) {
    if (rows != cols) throw qsvt::ValidationError("hermitian needs square");
    g = 0.5 * (g + g.adjoint()).eval();
  }
  const double norm = g.jacobiSvd().singularValues().maxCoeff();
  return g * (max_norm * (0.25 + 0.75 * rng.next_double()) / norm);
}

qsvt::Circuit random_circuit(int n, int n_gates, std::uint64_t seed) {
  qsvt::Rng rng(seed);
  qsvt::Circuit c;
  c.n_qubits = n;
  for (int i = 0; i < n_gates; ++i) {
    const int kind = static_cast<int>(rng.next_u64() % 6);
    const int q = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    switch (kind) {
      case 0: c.h(q); break;
      case 1: c.t(q); break;
      case 2: c.ry(q, 2.0 * M_PI * rng.next_double()); break;
      case 3: c.rz(q, 2.0 * M_PI * rng.next_double()); break;
      default: {
        if (n == 1) { c.h(q); break; }
        int q2 = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
        while (q2 == q) q2 = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
        if (kind == 4) c.cnot(q, q2); else c.cz(q, q2);
        break;
      }
    }
  }
  return c;
}

}  // namespace oracles
