#include "qsvt/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>

#include "qsvt/errors.hpp"
#include "qsvt/fourier.hpp"

namespace qsvt {

const ApproxConstants& ApproxConstants::calibrated() {
  static const ApproxConstants c{};
  return c;
}

int max_poly_degree() {
  static const int cap = [] {
    if (const char* env = std::getenv("QSVT_MAX_DEGREE")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1)
        throw ValidationError("QSVT_MAX_DEGREE must be a positive integer");
      return static_cast<int>(v);
    }
    return 4095;
  }();
  return cap;
}

namespace {

// Smallest d such that the computed coefficient tail beyond d is <= tol.
// Doubles the coefficient horizon until the top end of the series is
// negligible, so the finite tail is a faithful proxy for the infinite one.
// Returns the averaged truncation of the result (degree 2d - 1).
ChebyshevPoly averaged_from_function(const std::function<double(double)>& f,
                                     double tol, const char* what) {
  const int cap = max_poly_degree();
  // Escalate the sampling resolution m once, reusing nothing across levels
  // but never restarting an inner search: at each level the coefficients
  // c_0..c_{m/4} are cross-checked against the previous level (aliasing
  // guard), then the usual horizon test runs on that alias-free prefix.
  std::vector<double> prev;  // batch from the previous resolution
  const long long m_lim =
      std::min(1LL << 24, 16LL * std::max(static_cast<long long>(cap), 256LL));
  for (int m = 256; m <= m_lim; m <<= 1) {
    std::vector<double> c = chebyshev_coeffs_batch(f, m / 2, m);
    double diff = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i)
      diff = std::max(diff, std::abs(c[i] - prev[i]));
    const bool stable = !prev.empty() && diff < tol * 1e-3;
    prev = std::move(c);
    if (!stable) continue;
    const int kmax = m / 4;  // verified against the coarser level
    // Trustworthy only if the series has visibly died out by the horizon.
    double top = 0.0;
    for (int k = kmax - 8; k <= kmax; ++k)
      top = std::max(top, std::abs(prev[static_cast<std::size_t>(k)]));
    if (top >= tol * 1e-6) continue;
    double tail = 0.0;
    int d = -1;
    for (int k = kmax; k >= 1; --k) {
      tail += std::abs(prev[static_cast<std::size_t>(k)]);
      if (tail > tol) {
        d = k;  // tail beyond k exceeds tol; keep degree k
        break;
      }
    }
    if (d < 1) d = 1;
    if (2 * d - 1 > cap)
      throw ResourceError(std::string(what) + ": required degree " +
                          std::to_string(2 * d - 1) + " exceeds cap " +
                          std::to_string(cap) +
                          " (set QSVT_MAX_DEGREE to raise)");
    if (2 * d <= kmax) {
      std::vector<double> head(prev.begin(), prev.begin() + 2 * d);
      return averaged_truncation(head, d);
    }
  }
  throw ResourceError(std::string(what) +
                      ": coefficient series does not settle below the "
                      "degree cap");
}

void zero_parity(ChebyshevPoly& p, Parity parity) {
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    const bool keep = (parity == Parity::odd) ? (k % 2 == 1) : (k % 2 == 0);
    if (!keep) p.coeffs[k] = 0.0;
  }
  p.parity = parity;
  p.refresh();
}

}  // namespace

namespace {

// The algorithm schedules request the same (parameter, precision) pairs over
// and over; constructing a high-degree series is the dominant cost, so both
// named targets are memoized.
ChebyshevPoly memoized(char tag, double p1, double p2,
                       const std::function<ChebyshevPoly()>& build) {
  static std::mutex mu;
  static std::map<std::tuple<char, double, double>, ChebyshevPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  const std::tuple<char, double, double> key{tag, p1, p2};
  auto it = cache.find(key);
  if (it == cache.end()) {
    // Build before inserting so a throwing builder leaves no stale entry.
    ChebyshevPoly p = build();
    it = cache.emplace(key, std::move(p)).first;
  }
  return it->second;
}

}  // namespace

ChebyshevPoly sign_poly(double delta, double eps) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("sign_poly: delta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("sign_poly: eps must lie in (0, 1)");
  return memoized('s', delta, eps, [&] {
    const double kappa = (2.0 / delta) *
        std::sqrt(std::log(std::sqrt(2.0) / (std::sqrt(M_PI) * eps)));
    ChebyshevPoly p = averaged_from_function(
        [kappa](double x) { return std::erf(kappa * x); }, eps / 2.0,
        "sign_poly");
    zero_parity(p, Parity::odd);
    enforce_bounded(p);
    return p;
  });
}

ChebyshevPoly piecewise_smooth_poly(const std::vector<double>& a, double x0,
                                    double r, double delta, double B,
                                    double eps) {
  if (a.empty()) throw ValidationError("piecewise_smooth_poly: empty Taylor series");
  if (!(x0 >= -1.0 && x0 <= 1.0))
    throw ValidationError("piecewise_smooth_poly: x0 must lie in [-1, 1]");
  if (!(r > 0.0 && delta > 0.0 && r + delta <= 4.0))
    throw ValidationError("piecewise_smooth_poly: need r, delta > 0");
  if (!(B > 0.0)) throw ValidationError("piecewise_smooth_poly: B must be positive");
  if (!(eps > 0.0 && eps <= 2.0 * B))
    throw ValidationError("piecewise_smooth_poly: eps must lie in (0, 2B]");
  double weighted = 0.0;
  double scale_pow = 1.0;
  for (double al : a) {
    if (!std::isfinite(al))
      throw ValidationError("piecewise_smooth_poly: non-finite Taylor coefficient");
    weighted += std::abs(al) * scale_pow;
    scale_pow *= (r + delta);
  }
  if (weighted > B * (1.0 + 1e-9))
    throw ValidationError(
        "piecewise_smooth_poly: sum |a_l| (r+delta)^l exceeds the bound B");

  const double scale = r + delta;
  const double dprime = delta / (2.0 * scale);
  const std::size_t J = static_cast<std::size_t>(
      std::ceil(std::log(12.0 * B / eps) / dprime));
  std::vector<double> b(std::min(a.size(), J + 1));
  scale_pow = 1.0;
  for (std::size_t l = 0; l < b.size(); ++l) {
    b[l] = a[l] * scale_pow;
    scale_pow *= scale;
  }
  const FourierSeries g = fourier_low_weight(b, dprime, eps / 6.0, Parity::none);

  const double kappa =
      (8.0 / delta) *
      std::sqrt(std::log(std::sqrt(18.0) * B / (std::sqrt(M_PI) * eps)));
  auto window = [=](double x) {
    return 0.5 * (std::erf(kappa * (x - x0 + r + delta / 4.0)) -
                  std::erf(kappa * (x - x0 - r - delta / 4.0)));
  };
  // Fold the two-sided series into one-sided arrays (cos(-m t) = cos(m t),
  // sin((-m-1+1/2) t) = -sin((m+1/2) t)) so each evaluation walks a single
  // phasor over M+1 terms instead of 2M+1.
  std::vector<double> ce, co;
  if (!g.empty()) {
    ce.assign(static_cast<std::size_t>(g.M) + 1, 0.0);
    co.assign(static_cast<std::size_t>(g.M) + 1, 0.0);
    for (int m = 0; m <= g.M; ++m) {
      ce[static_cast<std::size_t>(m)] =
          g.c_even[static_cast<std::size_t>(g.M + m)] +
          (m >= 1 ? g.c_even[static_cast<std::size_t>(g.M - m)] : 0.0);
      co[static_cast<std::size_t>(m)] =
          g.c_odd[static_cast<std::size_t>(g.M + m)] -
          (m + 1 <= g.M ? g.c_odd[static_cast<std::size_t>(g.M - m - 1)] : 0.0);
    }
  }
  auto g_eval = [&ce, &co](double u) {
    if (ce.empty()) return 0.0;
    const std::complex<double> step(std::cos(M_PI * u), std::sin(M_PI * u));
    const std::complex<double> half(std::cos(0.5 * M_PI * u),
                                    std::sin(0.5 * M_PI * u));
    std::complex<double> ph;
    double s = 0.0;
    for (std::size_t m = 0; m < ce.size(); ++m) {
      if (m % 512 == 0)  // re-seed the phasor to cap drift
        ph = std::complex<double>(std::cos(M_PI * u * static_cast<double>(m)),
                                  std::sin(M_PI * u * static_cast<double>(m)));
      s += ce[m] * ph.real() + co[m] * (ph * half).imag();
      ph *= step;
    }
    return s;
  };
  auto h = [&, x0, scale](double x) {
    return g_eval((x - x0) / scale) * window(x);
  };
  return averaged_from_function(h, eps / 4.0, "piecewise_smooth_poly");
}

ChebyshevPoly log_poly(double beta, double eps) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ValidationError("log_poly: beta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("log_poly: eps must lie in (0, 1)");
  return memoized('l', beta, eps, [&] {
  // f(x) = ln(1/x) / (2 ln(2/beta)) on [beta, 1]; Taylor about x0 = 1 in the
  // variable x - 1: ln(1/x) = sum_{l>=1} (-1)^l (x-1)^l / l.
  const double norm = 2.0 * std::log(2.0 / beta);
  const double r = 1.0 - beta;
  const double delta = beta / 2.0;
  const double scale = r + delta;  // 1 - beta/2
  const std::size_t nterms = static_cast<std::size_t>(std::ceil(
      std::log(12.0 * 0.5 / (eps / 2.0)) * 2.0 * scale / delta)) + 2;
  std::vector<double> a(nterms + 1, 0.0);
  double sgn = -1.0;
  for (std::size_t l = 1; l <= nterms; ++l) {
    a[l] = sgn / (static_cast<double>(l) * norm);
    sgn = -sgn;
  }
  ChebyshevPoly pt = piecewise_smooth_poly(a, 1.0, r, delta, 0.5, eps / 2.0);
  // Symmetrize: P(x) = P~(x) + P~(-x) doubles even coefficients, kills odd.
  for (std::size_t k = 0; k < pt.coeffs.size(); ++k)
    pt.coeffs[k] = (k % 2 == 0) ? 2.0 * pt.coeffs[k] : 0.0;
  pt.parity = Parity::even;
  pt.refresh();
  enforce_bounded(pt);
  return pt;
  });
}

ChebyshevPoly sv_threshold_poly(double a, double b, double eps) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw ValidationError("sv_threshold_poly: need 0 <= a < b <= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("sv_threshold_poly: eps must lie in (0, 1)");
  // Q(x) = (1/2)[(1-eps/2)(sgn(x+t) + sgn(x-t)) + eps sgn(x)] with
  // t = (a+b)/2: Q is odd, ~1 on [b, 1], and |Q| <= eps/2 on [-a, a].  Each
  // sgn is smoothed by the erf surrogate over the half-gap (b-a)/2.
  const double t = 0.5 * (a + b);
  const double half_gap = 0.5 * (b - a);
  const double kappa = (2.0 / half_gap) *
                       std::sqrt(std::log(std::sqrt(2.0) /
                                          (std::sqrt(M_PI) * (eps / 2.0))));
  ChebyshevPoly p = averaged_from_function(
      [=](double x) {
        return 0.5 * ((1.0 - eps / 2.0) *
                          (std::erf(kappa * (x + t)) + std::erf(kappa * (x - t))) +
                      eps * std::erf(kappa * x));
      },
      eps / 4.0, "sv_threshold_poly");
  zero_parity(p, Parity::odd);
  enforce_bounded(p);
  return p;
}

}  // namespace qsvt
