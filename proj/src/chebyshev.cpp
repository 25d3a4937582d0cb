#include "qsvt/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qsvt/errors.hpp"

namespace qsvt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Iterative radix-2 complex FFT (in place, size must be a power of two).
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Samples f at the trapezium nodes x_l = cos(pi l / m - pi) = -cos(pi l / m),
// l = 0..m, validating finiteness.
std::vector<double> sample_nodes(const std::function<double(double)>& f, int m) {
  std::vector<double> s(static_cast<std::size_t>(m) + 1);
  for (int l = 0; l <= m; ++l) {
    const double x = -std::cos(kPi * static_cast<double>(l) / static_cast<double>(m));
    const double v = f(x);
    if (!std::isfinite(v))
      throw ValidationError("chebyshev_coeff: target function returned a non-finite value");
    s[static_cast<std::size_t>(l)] = v;
  }
  return s;
}

// DCT-I of the sample vector via a length-2m complex FFT:
//   out_k = sum_{l=0}^{m}'' s_l cos(pi k l / m)   (halved end terms).
std::vector<double> dct1(const std::vector<double>& s, int kmax) {
  const int m = static_cast<int>(s.size()) - 1;
  std::vector<std::complex<double>> ext(2 * static_cast<std::size_t>(m));
  for (int l = 0; l <= m; ++l) ext[static_cast<std::size_t>(l)] = s[static_cast<std::size_t>(l)];
  for (int l = m + 1; l < 2 * m; ++l)
    ext[static_cast<std::size_t>(l)] = s[static_cast<std::size_t>(2 * m - l)];
  fft_inplace(ext);
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    // FFT of the even extension gives 2 * (DCT-I with halved end terms).
    out[static_cast<std::size_t>(k)] =
        0.5 * ext[static_cast<std::size_t>(k % (2 * m))].real();
  }
  return out;
}

}  // namespace

double ChebyshevPoly::lcu_weight() const {
  if (coeffs.empty()) return 0.0;
  double w = 0.5 * std::abs(coeffs[0]);
  for (std::size_t k = 1; k < coeffs.size(); ++k) w += std::abs(coeffs[k]);
  return w;
}

void ChebyshevPoly::refresh() {
  degree = coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
  l1_norm = 0.0;
  for (double c : coeffs) l1_norm += std::abs(c);
}

ChebyshevPoly make_poly(std::vector<double> coeffs) {
  ChebyshevPoly P;
  P.coeffs = std::move(coeffs);
  P.refresh();
  bool odd = true, even = true;
  for (std::size_t k = 0; k < P.coeffs.size(); ++k) {
    if (P.coeffs[k] == 0.0) continue;
    if (k % 2 == 0) odd = false; else even = false;
  }
  P.parity = odd && !P.coeffs.empty() ? Parity::odd : (even ? Parity::even : Parity::none);
  if (odd && even) P.parity = Parity::even;  // zero polynomial: call it even
  return P;
}

double eval_cheb(const ChebyshevPoly& P, double x) {
  if (std::abs(x) > 1.0 + 1e-12)
    throw ValidationError("eval_cheb: x outside [-1, 1]");
  x = std::clamp(x, -1.0, 1.0);
  if (P.coeffs.empty()) return 0.0;
  const int n = static_cast<int>(P.coeffs.size()) - 1;
  double b1 = 0.0, b2 = 0.0;
  for (int k = n; k >= 1; --k) {
    const double b = P.coeffs[static_cast<std::size_t>(k)] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b;
  }
  return 0.5 * P.coeffs[0] + x * b1 - b2;
}

double chebyshev_coeff(const std::function<double(double)>& f, int k, int m) {
  if (k < 0) throw ValidationError("chebyshev_coeff: k must be >= 0");
  if (m < 2) throw ValidationError("chebyshev_coeff: need m >= 2 intervals");
  // theta_l = -pi + pi l / m, x_l = cos(theta_l) = -cos(pi l / m);
  // cos(k theta_l) = (-1)^k cos(pi k l / m).
  const std::vector<double> s = sample_nodes(f, m);
  double acc = 0.0;
  for (int l = 0; l <= m; ++l) {
    const double w = (l == 0 || l == m) ? 0.5 : 1.0;
    acc += w * s[static_cast<std::size_t>(l)] *
           std::cos(kPi * static_cast<double>(k) * static_cast<double>(l) /
                    static_cast<double>(m));
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * 2.0 * acc / static_cast<double>(m);
}

std::vector<double> chebyshev_coeffs_batch(const std::function<double(double)>& f,
                                           int kmax, int m) {
  if (kmax < 0) throw ValidationError("chebyshev_coeffs_batch: kmax must be >= 0");
  if (!is_pow2(m) || m < 2)
    throw ValidationError("chebyshev_coeffs_batch: m must be a power of two >= 2");
  if (kmax > m)
    throw ValidationError("chebyshev_coeffs_batch: kmax exceeds the sampling resolution");
  const std::vector<double> s = sample_nodes(f, m);
  std::vector<double> sums = dct1(s, kmax);
  std::vector<double> c(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(k)] = sign * 2.0 * sums[static_cast<std::size_t>(k)] /
                                     static_cast<double>(m);
  }
  return c;
}

std::vector<double> chebyshev_coeffs_adaptive(const std::function<double(double)>& f,
                                              int kmax, double tol, int m0) {
  constexpr int kCap = 1 << 24;
  int m = 2;
  while (m < m0 || m < 2 * (kmax + 1)) m <<= 1;
  std::vector<double> prev = chebyshev_coeffs_batch(f, kmax, m);
  while (m < kCap) {
    m <<= 1;
    std::vector<double> cur = chebyshev_coeffs_batch(f, kmax, m);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      diff = std::max(diff, std::abs(cur[i] - prev[i]));
    prev = std::move(cur);
    if (diff < tol) break;
  }
  return prev;
}

ChebyshevPoly averaged_truncation(const std::vector<double>& c, int d) {
  if (d < 1) throw ValidationError("averaged_truncation: d must be >= 1");
  if (static_cast<int>(c.size()) != 2 * d)
    throw ValidationError("averaged_truncation: coefficient vector must have length 2d");
  std::vector<double> chat(c.size());
  for (int k = 0; k < 2 * d; ++k) {
    const double w = (k <= d) ? 1.0 : (static_cast<double>(2 * d - k) / static_cast<double>(d));
    chat[static_cast<std::size_t>(k)] = w * c[static_cast<std::size_t>(k)];
  }
  ChebyshevPoly p = make_poly(std::move(chat));
  p.raw_coeffs = c;
  return p;
}

double grid_max_abs(const ChebyshevPoly& P, int n) {
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    mx = std::max(mx, std::abs(eval_cheb(P, x)));
  }
  return mx;
}

double grid_max_err(const ChebyshevPoly& P, const std::function<double(double)>& f,
                    double lo, double hi, int n) {
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    mx = std::max(mx, std::abs(eval_cheb(P, x) - f(x)));
  }
  return mx;
}

double enforce_bounded(ChebyshevPoly& P, int grid_n) {
  const double mx = grid_max_abs(P, grid_n);
  if (mx <= 1.0) return 0.0;
  const double eta = mx - 1.0;
  for (double& c : P.coeffs) c /= (1.0 + eta);
  P.refresh();
  return eta;
}

}  // namespace qsvt
