#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsvt/simulator.hpp"
#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace qsvt;
using std::complex;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

double binary_entropy_nats(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

}  // namespace

TEST_CASE("run_circuit: single Hadamard") {
    Circuit c; c.n_qubits = 1; c.h(0);
    auto psi = run_circuit(c);
    CHECK(std::abs(psi.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(psi.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("run_circuit: Bell state") {
    Circuit c; c.n_qubits = 2; c.h(0).cnot(0, 1);
    auto psi = run_circuit(c);
    CHECK(std::abs(psi.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(psi.amplitudes(3) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(psi.amplitudes(1)) < 1e-14);
    CHECK(std::abs(psi.amplitudes(2)) < 1e-14);
}

TEST_CASE("run_circuit: random circuits preserve the norm") {
    for (int t = 0; t < 5; ++t) {
        auto c = oracles::random_circuit(3, 8, 50 + t);
        auto psi = run_circuit(c);
        CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("circuit validation rejects bad circuits") {
    Circuit c; c.n_qubits = 2; c.h(3);
    CHECK_THROWS_AS(c.validate(), ValidationError);
    Circuit big; big.n_qubits = kMaxQubits + 1;
    CHECK_THROWS_AS(big.validate(), ValidationError);
    Circuit u; u.n_qubits = 1;
    Eigen::MatrixXcd notu = Eigen::MatrixXcd::Constant(2, 2, 0.5);
    u.u({0}, notu);
    CHECK_THROWS_AS(u.validate(), ValidationError);
}

TEST_CASE("partial_trace: Bell state reduces to I/2") {
    Circuit c; c.n_qubits = 2; c.h(0).cnot(0, 1);
    auto rho = partial_trace(run_circuit(c), {0});
    Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK(max_abs(rho.entries - half) < 1e-12);
}

TEST_CASE("partial_trace: product state |0> x |+>") {
    Circuit c; c.n_qubits = 2; c.h(1);
    auto rho = partial_trace(run_circuit(c), {1});
    Eigen::MatrixXcd plus = Eigen::MatrixXcd::Constant(2, 2, 0.5);
    CHECK(max_abs(rho.entries - plus) < 1e-12);
}

TEST_CASE("partial_trace: random 3-qubit pure state vs index-summation oracle") {
    for (int t = 0; t < 4; ++t) {
        auto c = oracles::random_circuit(3, 20, 70 + t);
        auto psi = run_circuit(c);
        auto full = DensityMatrix::from_pure(psi);
        for (const auto& keep : std::vector<std::vector<int>>{{0}, {2}, {0, 2}, {1, 2}}) {
            auto got = partial_trace(psi, keep);
            auto ref = oracles::partial_trace_loops(full.entries, 3, keep);
            CHECK(max_abs(got.entries - ref) < 1e-12);
            auto got2 = partial_trace(full, keep);
            CHECK(max_abs(got2.entries - ref) < 1e-12);
        }
    }
}

TEST_CASE("hadamard_test_prob: identity and Z trivials") {
    DensityMatrix one;
    one.entries = Eigen::MatrixXcd::Zero(2, 2);
    one.entries(1, 1) = 1.0;
    CHECK(hadamard_test_prob(Eigen::MatrixXcd::Identity(2, 2), one) ==
          doctest::Approx(1.0).epsilon(1e-14));
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(2, 2);
    z(1, 1) = -1.0;
    CHECK(hadamard_test_prob(z, one) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hadamard_test_prob: random Hermitian vs trace oracle") {
    for (int t = 0; t < 6; ++t) {
        auto a = oracles::random_contraction(4, 4, 1.0, true, 100 + t);
        DensityMatrix rho; rho.entries = oracles::random_density(4, 200 + t);
        double want = 0.5 * (1.0 + (a * rho.entries).trace().real());
        CHECK(std::abs(hadamard_test_prob(a, rho) - want) < 1e-10);
    }
}

TEST_CASE("swap_test_prob: trivials and random pairs") {
    Circuit c; c.n_qubits = 1; c.h(0);
    auto plus = DensityMatrix::from_pure(run_circuit(c));
    CHECK(swap_test_prob(plus, plus) == doctest::Approx(1.0).epsilon(1e-12));

    DensityMatrix zero; zero.entries = Eigen::MatrixXcd::Zero(2, 2); zero.entries(0, 0) = 1.0;
    DensityMatrix one;  one.entries  = Eigen::MatrixXcd::Zero(2, 2); one.entries(1, 1)  = 1.0;
    CHECK(swap_test_prob(zero, one) == doctest::Approx(0.5).epsilon(1e-12));

    for (int t = 0; t < 6; ++t) {
        DensityMatrix r0; r0.entries = oracles::random_density(4, 300 + t);
        DensityMatrix r1; r1.entries = oracles::random_density(4, 400 + t);
        double want = 0.5 * (1.0 + (r0.entries * r1.entries).trace().real());
        CHECK(std::abs(swap_test_prob(r0, r1) - want) < 1e-10);
    }
}

TEST_CASE("exact_aa: j=0 leaves the prepared state unchanged") {
    auto u = oracles::random_unitary(8, 11);
    auto psi = exact_aa(u, std::vector<bool>(8, false), 0);
    Eigen::VectorXcd want = u.col(0);
    CHECK((psi.amplitudes - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact_aa: sin(theta)=1/2 amplifies to certainty in one round") {
    const double theta = M_PI / 6.0;
    Circuit c; c.n_qubits = 1; c.ry(0, 2.0 * theta);
    auto u = circuit_unitary(c);
    std::vector<bool> good = {false, true};
    auto psi = exact_aa(u, good, 1);
    CHECK(std::norm(psi.amplitudes(1)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact_aa: amplitude follows sin((2j+1) theta)") {
    for (int t = 0; t < 4; ++t) {
        auto u = oracles::random_unitary(8, 600 + t);
        std::vector<bool> good(8, false);
        good[1] = good[3] = good[5] = good[7] = true;  // bit-0 == 1
        auto base = exact_aa(u, good, 0);
        double p0 = 0.0;
        for (int i = 1; i < 8; i += 2) p0 += std::norm(base.amplitudes(i));
        double theta = std::asin(std::sqrt(p0));
        auto amped = exact_aa(u, good, 2);
        double p2 = 0.0;
        for (int i = 1; i < 8; i += 2) p2 += std::norm(amped.amplitudes(i));
        double want = std::sin(5.0 * theta);
        CHECK(std::abs(p2 - want * want) < 1e-8);
    }
}

TEST_CASE("distance_oracle: trivial identities") {
    DensityMatrix rho; rho.entries = oracles::random_density(4, 21);
    CHECK(distance_oracle(rho, rho, DistanceMeasure::td) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(distance_oracle(rho, rho, DistanceMeasure::fidelity) == doctest::Approx(1.0).epsilon(1e-10));

    DensityMatrix zero; zero.entries = Eigen::MatrixXcd::Zero(2, 2); zero.entries(0, 0) = 1.0;
    DensityMatrix one;  one.entries  = Eigen::MatrixXcd::Zero(2, 2); one.entries(1, 1)  = 1.0;
    CHECK(distance_oracle(zero, one, DistanceMeasure::td) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance_oracle(zero, one, DistanceMeasure::hs2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance_oracle(zero, one, DistanceMeasure::qjs2) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Fuchs-van de Graaf and QJS sandwiches on 100 random pairs") {
    int idx = 0;
    for (int dim : {2, 4, 8}) {
        int n_pairs = (dim == 8) ? 34 : 33;
        for (int t = 0; t < n_pairs; ++t, ++idx) {
            DensityMatrix r0; r0.entries = oracles::random_density(dim, 1000 + idx);
            DensityMatrix r1; r1.entries = oracles::random_density(dim, 5000 + idx);
            double td = distance_oracle(r0, r1, DistanceMeasure::td);
            double f  = distance_oracle(r0, r1, DistanceMeasure::fidelity);
            CHECK(1.0 - f <= td + 1e-9);
            CHECK(td <= std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-9);
            double qjs2 = distance_oracle(r0, r1, DistanceMeasure::qjs2);
            double lower = 1.0 - binary_entropy_nats((1.0 - td) / 2.0) / std::log(2.0);
            CHECK(lower <= qjs2 + 1e-9);
            CHECK(qjs2 <= td + 1e-9);
        }
    }
    CHECK(idx == 100);
}

TEST_CASE("joint entropy identity on random ensembles") {
    for (int t = 0; t < 5; ++t) {
        Rng rng(800 + t);
        const int m = 4, dim = 4;
        std::vector<double> p(m);
        double tot = 0.0;
        for (auto& v : p) { v = rng.next_double() + 0.05; tot += v; }
        for (auto& v : p) v /= tot;
        DensityMatrix joint;
        joint.entries = Eigen::MatrixXcd::Zero(m * dim, m * dim);
        double want = 0.0;
        for (int i = 0; i < m; ++i) {
            DensityMatrix rho; rho.entries = oracles::random_density(dim, 8800 + 10 * t + i);
            joint.entries.block(i * dim, i * dim, dim, dim) = p[i] * rho.entries;
            want += p[i] * von_neumann_entropy(rho) - p[i] * std::log(p[i]);
        }
        CHECK(std::abs(von_neumann_entropy(joint) - want) < 1e-8);
    }
}

TEST_CASE("sample_bernoulli matches exact probability within the Hoeffding band") {
    const std::int64_t m = 100000;
    const double band = oracles::hoeffding_band(m, 0.01);
    int inside = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        double p = 0.05 + 0.9 * (t / double(trials - 1));
        double est = sample_bernoulli(p, m, 4242 + t);
        if (std::abs(est - p) <= band) ++inside;
    }
    CHECK(inside >= 97);  // 99% confidence per draw
}

TEST_CASE("circuit_unitary stays unitary after 1000 gates") {
    auto c = oracles::random_circuit(4, 1000, 31337);
    auto u = circuit_unitary(c);
    Eigen::MatrixXcd gram = u.adjoint() * u;
    CHECK(max_abs(gram - Eigen::MatrixXcd::Identity(16, 16)) < 1e-9);
    // Column 0 agrees with running the circuit from |0...0>.
    auto psi = run_circuit(c);
    CHECK((u.col(0) - psi.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("density-matrix evolution matches pure-state evolution") {
    auto c = oracles::random_circuit(3, 15, 77);
    auto psi = run_circuit(c);
    auto rho0 = DensityMatrix::from_pure(PureState::zero(3));
    auto rho = run_circuit(c, rho0);
    CHECK(max_abs(rho.entries - psi.amplitudes * psi.amplitudes.adjoint()) < 1e-11);
}
