#pragma once
// Independent reference implementations used only by tests: quadrature,
// best-uniform (minimax) approximation, matrix transforms, and random
// instance generators.  These deliberately avoid the library's code paths.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qsvt/chebyshev.hpp"
#include "qsvt/simulator.hpp"

namespace oracles {

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Best uniform approximation error of f on [-1, 1] among polynomials of
// degree <= d, computed by a discrete Remez exchange on a grid of
// `grid_n` points.
double best_uniform_error(const std::function<double(double)>& f, int d,
                          int grid_n = 10001);

// Evaluate a Chebyshev series (halved-c0 convention, same as the library) by
// converting to the monomial basis and using compensated Horner summation.
double eval_monomial_basis(const std::vector<double>& cheb_coeffs, double x);

// Definition-level partial trace by explicit index summation.
Eigen::MatrixXcd partial_trace_loops(const Eigen::MatrixXcd& rho, int n,
                                     const std::vector<int>& keep);

// T_k applied to singular values: odd k -> U T_k(S) V^dag,
// even k -> V T_k(S) V^dag.
Eigen::MatrixXcd chebyshev_sv(const Eigen::MatrixXcd& a, int k);

// P(H) for Hermitian H via eigendecomposition + monomial-basis evaluation.
Eigen::MatrixXcd poly_of_hermitian_monomial(const qsvt::ChebyshevPoly& p,
                                            const Eigen::MatrixXcd& h);

// Coefficients of (arcsin(y)/(pi/2))^k up to power L by repeated Cauchy
// products in long double.
std::vector<double> arcsin_power_row(int k, int L);

// Half-width of the two-sided (1 - fail) Hoeffding confidence band for the
// mean of `trials` Bernoulli draws.
double hoeffding_band(std::int64_t trials, double fail);

// --- seeded random generators -------------------------------------------

Eigen::MatrixXcd random_unitary(int dim, std::uint64_t seed);
Eigen::MatrixXcd random_density(int dim, std::uint64_t seed);
// Random matrix with spectral norm <= max_norm (Hermitian when asked).
Eigen::MatrixXcd random_contraction(int rows, int cols, double max_norm,
                                    bool hermitian, std::uint64_t seed);
// Random circuit on n qubits with `n_gates` gates from the named gate set.
qsvt::Circuit random_circuit(int n, int n_gates, std::uint64_t seed);

}  // namespace oracles
