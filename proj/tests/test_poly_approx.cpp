#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsvt/chebyshev.hpp"
#include "qsvt/fourier.hpp"
#include "qsvt/targets.hpp"
#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace qsvt;

TEST_CASE("chebyshev_coeff: constant function") {
    // f = 1: c_0 = 2, higher coefficients vanish.
    auto one = [](double) { return 1.0; };
    CHECK(std::abs(chebyshev_coeff(one, 0, 1000) - 2.0) < 1e-9);
    CHECK(std::abs(chebyshev_coeff(one, 1, 1000)) < 1e-9);
}

TEST_CASE("chebyshev_coeff: identity function") {
    auto ident = [](double x) { return x; };
    CHECK(std::abs(chebyshev_coeff(ident, 1, 512) - 1.0) < 1e-6);
    CHECK(std::abs(chebyshev_coeff(ident, 2, 512)) < 1e-6);
}

TEST_CASE("chebyshev_coeff: erf(2x) k=1 against adaptive-quadrature oracle") {
    auto f = [](double x) { return std::erf(2.0 * x); };
    // c_k = (2/pi) * integral_0^pi f(cos t) cos(k t) dt
    double ref = (2.0 / M_PI) * oracles::integrate(
        [&](double t) { return f(std::cos(t)) * std::cos(t); }, 0.0, M_PI, 1e-12);
    double got = chebyshev_coeff(f, 1, 4096);
    CHECK(std::abs(got - ref) < 1e-8);
}

TEST_CASE("chebyshev_coeffs_batch matches per-coefficient evaluation") {
    auto f = [](double x) { return std::exp(x) * std::cos(3.0 * x); };
    auto batch = chebyshev_coeffs_batch(f, 20, 512);
    for (int k = 0; k <= 20; ++k) {
        CHECK(std::abs(batch[k] - chebyshev_coeff(f, k, 512)) < 1e-10);
    }
}

TEST_CASE("averaged_truncation: d=2 weighting pattern") {
    // With d=2 the averaged coefficients are (c0, c1, c2, c3/2) and d'=3.
    std::vector<double> c = {0.3, -0.7, 0.11, 0.425};
    auto p = averaged_truncation(c, 2);
    REQUIRE(p.degree == 3);
    CHECK(p.coeffs[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p.coeffs[1] == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(p.coeffs[2] == doctest::Approx(0.11).epsilon(1e-15));
    CHECK(p.coeffs[3] == doctest::Approx(0.425 / 2.0).epsilon(1e-15));
    // Raw (pre-averaging) coefficients are preserved for reporting.
    REQUIRE(p.raw_coeffs.size() == c.size());
    CHECK(p.raw_coeffs[3] == doctest::Approx(0.425).epsilon(1e-15));
}

TEST_CASE("averaged_truncation: erf(4x), d=24, within 4x best uniform error") {
    auto f = [](double x) { return std::erf(4.0 * x); };
    const int d = 24;
    auto c = chebyshev_coeffs_adaptive(f, 2 * d - 1, 1e-13);
    auto p = averaged_truncation(c, d);
    double remez = oracles::best_uniform_error(f, d);
    double err = grid_max_err(p, f, -1.0, 1.0, 20001);
    CHECK(err <= 4.0 * remez * (1.0 + 1e-6));
    CHECK(remez > 0.0);
}

TEST_CASE("eval_cheb: pure T_3") {
    ChebyshevPoly p = make_poly({0.0, 0.0, 0.0, 1.0});
    // T_3(0.5) = 4*(0.125) - 3*(0.5) = -1
    CHECK(eval_cheb(p, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eval_cheb(p, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval_cheb(p, -1.0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("eval_cheb: random degree-20 polynomial vs monomial-basis oracle") {
    Rng rng(1234);
    std::vector<double> c(21);
    for (auto& v : c) v = 2.0 * rng.next_double() - 1.0;
    ChebyshevPoly p = make_poly(c);
    for (int i = 0; i <= 200; ++i) {
        double x = -1.0 + 2.0 * i / 200.0;
        double ref = oracles::eval_monomial_basis(c, x);
        CHECK(std::abs(eval_cheb(p, x) - ref) < 1e-10);
    }
}

TEST_CASE("eval_cheb: rejects points outside the domain") {
    ChebyshevPoly p = make_poly({1.0, 0.5});
    CHECK_THROWS_AS(eval_cheb(p, 1.5), ValidationError);
    CHECK_THROWS_AS(eval_cheb(p, -1.001), ValidationError);
}

TEST_CASE("sign_poly: odd parity, P(0)=0, accuracy outside the gap") {
    auto p = sign_poly(0.1, 0.01);
    CHECK(p.parity == Parity::odd);
    CHECK(std::abs(eval_cheb(p, 0.0)) < 1e-14);
    CHECK(grid_max_abs(p) <= 1.0 + 1e-12);
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double x = 0.05 + (1.0 - 0.05) * i / 4000.0;
        worst = std::max(worst, std::abs(eval_cheb(p, x) - 1.0));
        worst = std::max(worst, std::abs(eval_cheb(p, -x) + 1.0));
    }
    CHECK(worst <= 0.05);
}

TEST_CASE("sign_poly: l1 norm stays bounded as the degree grows") {
    const auto& C = ApproxConstants::calibrated();
    int prev_degree = 0;
    for (double delta : {0.4, 0.2, 0.1, 0.05}) {
        auto p = sign_poly(delta, 0.01);
        CHECK(p.degree > prev_degree);
        prev_degree = p.degree;
        CHECK(p.l1_norm <= C.chat_sgn);
    }
}

TEST_CASE("log_poly: even parity, bounded, approximates ln(1/x)/(2 ln(2/beta))") {
    const double beta = 0.1, eps = 0.01;
    auto p = log_poly(beta, eps);
    CHECK(p.parity == Parity::even);
    CHECK(grid_max_abs(p) <= 1.0 + 1e-12);
    const auto& C = ApproxConstants::calibrated();
    auto f = [&](double x) { return std::log(1.0 / std::abs(x)) / (2.0 * std::log(2.0 / beta)); };
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double x = beta + (1.0 - beta) * i / 4000.0;
        worst = std::max(worst, std::abs(eval_cheb(p, x) - f(x)));
        worst = std::max(worst, std::abs(eval_cheb(p, -x) - f(x)));
    }
    CHECK(worst <= C.c_ln * eps);
}

TEST_CASE("arcsin_power_table: first row closed form and parity") {
    auto tbl = arcsin_power_table(4, 15);
    REQUIRE(tbl.K == 4);
    // b^{(1)}_1 = 2/pi
    CHECK(tbl.b[1][1] == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
    // Odd power of arcsin has only odd coefficients; even rows only even.
    for (int k = 1; k <= 4; ++k) {
        for (int l = 0; l <= 15; ++l) {
            if ((l - k) % 2 != 0) CHECK(tbl.b[k][l] == 0.0);
            CHECK(tbl.b[k][l] >= 0.0);
        }
    }
}

TEST_CASE("arcsin_power_table: row 2 vs long-double Cauchy-product oracle") {
    auto tbl = arcsin_power_table(3, 15);
    auto ref = oracles::arcsin_power_row(2, 15);
    for (int l = 0; l <= 15; ++l) {
        CHECK(tbl.b[2][l] == doctest::Approx(ref[l]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("arcsin_power_table: truncated mass plus tail is exactly the full mass") {
    // The full series mass for each row is 1 ((arcsin 1)/(pi/2) = 1); the
    // truncation tail at finite L is retained explicitly so the stochastic
    // interpretation stays exact.
    auto tbl = arcsin_power_table(8, 400);
    for (int k = 0; k <= 8; ++k) {
        double sum = std::accumulate(tbl.b[k].begin(), tbl.b[k].end(), 0.0);
        CHECK(sum + tbl.tail[k] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tbl.tail[k] >= -1e-12);
        CHECK(sum <= 1.0 + 1e-12);
    }
    // Row sums converge to 1 from below as L grows.
    auto small = arcsin_power_table(2, 50);
    double s_small = std::accumulate(small.b[1].begin(), small.b[1].end(), 0.0);
    double s_large = std::accumulate(tbl.b[1].begin(), tbl.b[1].end(), 0.0);
    CHECK(s_large > s_small);
}

TEST_CASE("substochastic powers: 1x1 and nilpotent cases") {
    SubStochasticMatrix m1;
    m1.entries = Eigen::MatrixXd::Constant(1, 1, 0.5);
    CHECK(substochastic_power_exact(m1, 3, 1, 1) == doctest::Approx(0.125).epsilon(1e-15));

    SubStochasticMatrix m2;
    m2.entries = Eigen::MatrixXd::Zero(3, 3);
    m2.entries(0, 1) = 0.5;
    m2.entries(1, 2) = 0.5;
    // Strictly upper triangular: third power vanishes.
    CHECK(substochastic_power_exact(m2, 3, 1, 3) == 0.0);
    CHECK(substochastic_power_exact(m2, 2, 1, 3) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("substochastic walk estimate agrees with exact power at 3 sigma") {
    SubStochasticMatrix m;
    m.entries = Eigen::MatrixXd::Zero(3, 3);
    m.entries(0, 0) = 0.3; m.entries(0, 1) = 0.4; m.entries(0, 2) = 0.2;
    m.entries(1, 1) = 0.5; m.entries(1, 2) = 0.3;
    m.entries(2, 2) = 0.6;
    const std::size_t n = 1000000;
    double p = substochastic_power_exact(m, 4, 1, 3);
    double est = substochastic_power_walk(m, 4, 1, 3, n, 42);
    double sigma = std::sqrt(p * (1.0 - p) / double(n));
    CHECK(std::abs(est - p) <= 3.0 * sigma);
}

TEST_CASE("substochastic walk agreement across random matrices") {
    int ok = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        Rng rng(900 + t);
        int n = 4;
        SubStochasticMatrix m;
        m.entries = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double budget = 0.95;
            for (int j = i; j < n; ++j) {
                double v = rng.next_double() * budget * 0.5;
                m.entries(i, j) = v;
                budget -= v;
            }
        }
        m.validate();
        double p = substochastic_power_exact(m, 3, 1, n);
        std::size_t samples = 200000;
        double est = substochastic_power_walk(m, 3, 1, n, samples, 7000 + t);
        double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(samples));
        if (std::abs(est - p) <= 4.0 * sigma) ++ok;
    }
    CHECK(ok >= trials - 1);  // 99%-style agreement allowing one 4-sigma outlier
}

TEST_CASE("fourier_low_weight: sin-like target a=(0,1)") {
    // a = (0,1) odd series: target g(x) = sin(pi x / 2)... the degree-1 odd
    // Taylor-style input with delta=0.1, eps=0.01 must reproduce x itself on
    // [-0.9, 0.9] to within eps.
    std::vector<double> a = {0.0, 1.0};
    auto s = fourier_low_weight(a, 0.1, 0.01, Parity::odd);
    REQUIRE(!s.empty());
    CHECK(s.l1_norm() <= 1.0 + 1e-12);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double x = -0.9 + 1.8 * i / 2000.0;
        worst = std::max(worst, std::abs(s.evaluate(x) - x));
    }
    CHECK(worst <= 0.01);
}

TEST_CASE("fourier_low_weight: negligible input collapses to the empty series") {
    std::vector<double> a = {0.0, 1e-6};
    auto s = fourier_low_weight(a, 0.1, 0.01, Parity::odd);
    CHECK(s.empty());
    CHECK(s.M == 0);
}

TEST_CASE("fourier_low_weight: l1 norm never exceeds the input weight") {
    for (int t = 0; t < 10; ++t) {
        Rng rng(333 + t);
        int n = 6;
        std::vector<double> a(n, 0.0);
        double l1 = 0.0;
        Parity par = (t % 2 == 0) ? Parity::odd : Parity::even;
        for (int l = (par == Parity::odd ? 1 : 0); l < n; l += 2) {
            a[l] = (2.0 * rng.next_double() - 1.0) * 0.8;
            l1 += std::abs(a[l]);
        }
        if (l1 > 5.0) for (auto& v : a) v *= 5.0 / l1;
        auto s = fourier_low_weight(a, 0.08, 0.005, par);
        CHECK(s.l1_norm() <= std::accumulate(a.begin(), a.end(), 0.0,
              [](double acc, double v) { return acc + std::abs(v); }) + 1e-12);
        // Accuracy on a 10^3 grid of [-1+delta, 1-delta].
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            double x = -0.92 + 1.84 * i / 1000.0;
            double g = 0.0, xp = 1.0;
            for (int l = 0; l < n; ++l) { g += a[l] * xp; xp *= x; }
            worst = std::max(worst, std::abs(s.evaluate(x) - g));
        }
        CHECK(worst <= 0.005 + 1e-12);
    }
}

TEST_CASE("piecewise_smooth_poly: sqrt branch around x0=0") {
    // f(x) = sqrt((x+1)/2 + 0.1) expanded at x0 = 0, r = 0.5, delta = 0.25.
    const double x0 = 0.0, r = 0.5, dlt = 0.25, eps = 0.01, B = 1.1;
    auto f = [](double x) { return std::sqrt((x + 1.0) / 2.0 + 0.1); };
    // Taylor coefficients of sqrt(0.6 + x/2) about 0: sqrt(0.6) * C(1/2,l) / 1.2^l.
    std::vector<double> a(60);
    double coef = std::sqrt(0.6);
    a[0] = coef;
    for (std::size_t l = 1; l < a.size(); ++l) {
        coef *= (0.5 - double(l - 1)) / double(l) / 1.2;
        a[l] = coef;
    }
    auto p = piecewise_smooth_poly(a, x0, r, dlt, B, eps);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double x = x0 - r + 2.0 * r * i / 2000.0;
        worst = std::max(worst, std::abs(eval_cheb(p, x) - f(x)));
    }
    CHECK(worst <= 10.0 * eps);
    CHECK(grid_max_abs(p) <= B + 10.0 * eps);
}

TEST_CASE("piecewise_smooth_poly: suppression far outside the active window") {
    // The log instance at beta = 0.2: expansion of ln(1/x)/(2 ln(2/beta)) at
    // x0 = 1 with r = 1 - beta. Far below the window the construction must
    // decay toward zero.
    const double beta = 0.2, eps = 0.01;
    const double scale = 2.0 * std::log(2.0 / beta);
    std::vector<double> a(80, 0.0);
    for (std::size_t l = 1; l < a.size(); ++l) {
        a[l] = ((l % 2 == 0) ? -1.0 : 1.0) / (double(l) * scale) * -1.0;
        // ln(1/x) = -ln(1+(x-1)) = sum_{l>=1} (-1)^l (x-1)^l / l
        a[l] = ((l % 2 == 0) ? 1.0 : -1.0) / (double(l) * scale);
    }
    auto p = piecewise_smooth_poly(a, 1.0, 1.0 - beta, beta / 2.0, 0.5, eps);
    // In-window accuracy.
    auto f = [&](double x) { return std::log(1.0 / x) / scale; };
    double worst_in = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double x = beta + (1.0 - beta) * i / 2000.0;
        worst_in = std::max(worst_in, std::abs(eval_cheb(p, x) - f(x)));
    }
    CHECK(worst_in <= 10.0 * eps);
    // Outside suppression: well below the window the magnitude is small.
    double worst_out = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double x = -1.0 + (1.0 - 2.0 * beta) * i / 2000.0;  // [-1, -2*beta]
        worst_out = std::max(worst_out, std::abs(eval_cheb(p, x)));
    }
    CHECK(worst_out <= 10.0 * eps);
}

TEST_CASE("piecewise_smooth_poly: input validation") {
    std::vector<double> a = {10.0};  // violates sum |a_l| (r+delta)^l <= B
    CHECK_THROWS_AS(piecewise_smooth_poly(a, 0.0, 0.5, 0.25, 0.5, 0.01), ValidationError);
    std::vector<double> ok = {0.1};
    CHECK_THROWS_AS(piecewise_smooth_poly(ok, 0.0, 0.0, 0.25, 0.5, 0.01), ValidationError);
}

TEST_CASE("sv_threshold_poly: symmetric two-sided threshold shape") {
    const double alpha = 0.6, beta = 0.2, eps = 0.05;
    auto p = sv_threshold_poly(beta, alpha, eps);
    CHECK(p.parity == Parity::odd);
    CHECK(grid_max_abs(p) <= 1.0 + 1e-12);
    const double t = (alpha + beta) / 2.0;
    // Above the upper threshold: close to 1; inside [0, beta]: close to 0 up
    // to the deliberate eps*sgn(x) bleed-through.
    for (double x : {alpha, 0.8, 1.0}) {
        CHECK(eval_cheb(p, x) >= 1.0 - eps);
        CHECK(eval_cheb(p, -x) <= -(1.0 - eps));
    }
    for (double x : {0.05, 0.1, beta}) {
        CHECK(std::abs(eval_cheb(p, x)) <= 1.5 * eps);
    }
    (void)t;
}
