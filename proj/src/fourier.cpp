#include "qsvt/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "qsvt/errors.hpp"
#include "qsvt/rng.hpp"

namespace qsvt {

namespace {

using cd = std::complex<double>;

// The powers y_k = ((2/pi) asin z)^k satisfy (1-z^2) y_k'' - z y_k' =
// (2/pi)^2 k(k-1) y_{k-2}, which in coefficients reads
//   l(l-1) b^{(k)}_l = (l-2)^2 b^{(k)}_{l-2} + (2/pi)^2 k(k-1) b^{(k-2)}_{l-2}.
// All terms are nonnegative, so the forward recurrence is stable and exact
// parity (b^{(k)}_l = 0 unless l >= k and l = k mod 2) is automatic.
//
// Rows are stored compactly over their parity class: entry j of a row for
// power k holds b^{(k)}_{2j + (k mod 2)}.  next_row advances a parity chain
// from the row for power k-2 to the row for power k in place.
void next_arcsin_row(std::vector<double>& cur, const std::vector<double>& prev,
                     int k) {
  const double c = (2.0 / M_PI) * (2.0 / M_PI) * static_cast<double>(k) *
                   static_cast<double>(k - 1);
  const int par = k % 2;
  cur[0] = 0.0;  // b^{(k)}_par = 0 for k >= 2
  for (std::size_t j = 1; j < cur.size(); ++j) {
    const double l = static_cast<double>(2 * j + par);
    cur[j] = ((l - 2.0) * (l - 2.0) * cur[j - 1] + c * prev[j - 1]) /
             (l * (l - 1.0));
  }
}

// Row for k = 1 from the closed form b^{(1)}_l = (2/pi) g_l / l (odd l) with
// g_1 = 1, g_{l+2} = g_l * l/(l+1)  (g_l = binom(l-1,(l-1)/2) 2^{-(l-1)}).
std::vector<double> arcsin_row1(std::size_t n) {
  std::vector<double> row(n, 0.0);
  double g = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const int l = static_cast<int>(2 * j) + 1;
    row[j] = (2.0 / M_PI) * g / static_cast<double>(l);
    g *= static_cast<double>(l) / static_cast<double>(l + 1);
  }
  return row;
}

}  // namespace

ArcsinPowerTable arcsin_power_table(int K, int L) {
  if (K < 0 || L < 0) throw ValidationError("arcsin_power_table: K, L must be >= 0");
  ArcsinPowerTable t;
  t.K = K;
  t.L = L;
  t.b.assign(static_cast<std::size_t>(K) + 1,
             std::vector<double>(static_cast<std::size_t>(L) + 1, 0.0));
  t.tail.assign(static_cast<std::size_t>(K) + 1, 0.0);
  t.b[0][0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    auto& row = t.b[static_cast<std::size_t>(k)];
    const int par = k % 2;
    if (L < par) continue;
    const std::size_t n = static_cast<std::size_t>((L - par) / 2) + 1;
    std::vector<double> compact;
    if (k == 1) {
      compact = arcsin_row1(n);
    } else {
      compact.assign(n, 0.0);
      // Re-pack the row for k-2 (same parity) into compact form.
      std::vector<double> prev(n, 0.0);
      const auto& full_prev = t.b[static_cast<std::size_t>(k) - 2];
      for (std::size_t j = 0; j < n; ++j)
        prev[j] = full_prev[2 * j + static_cast<std::size_t>(par)];
      next_arcsin_row(compact, prev, k);
    }
    for (std::size_t j = 0; j < n; ++j)
      row[2 * j + static_cast<std::size_t>(par)] = compact[j];
  }
  for (int k = 0; k <= K; ++k) {
    const auto& row = t.b[static_cast<std::size_t>(k)];
    t.tail[static_cast<std::size_t>(k)] =
        1.0 - std::accumulate(row.begin(), row.end(), 0.0);
  }
  return t;
}

double FourierSeries::evaluate(double x) const {
  if (empty()) return 0.0;
  // Walk e^{i pi x m} by phasor multiplication (re-seeded from sin/cos every
  // 512 steps to cap drift); the half-integer odd modes share the phasor via
  // a fixed e^{i pi x / 2} offset.
  const cd step(std::cos(M_PI * x), std::sin(M_PI * x));
  const cd half(std::cos(0.5 * M_PI * x), std::sin(0.5 * M_PI * x));
  double s = 0.0;
  cd ph;
  for (int m = -M; m <= M; ++m) {
    if ((m + M) % 512 == 0)
      ph = cd(std::cos(M_PI * x * m), std::sin(M_PI * x * m));
    const std::size_t i = static_cast<std::size_t>(m + M);
    if (c_even[i] != 0.0) s += c_even[i] * ph.real();
    if (c_odd[i] != 0.0) s += c_odd[i] * (ph * half).imag();
    ph *= step;
  }
  return s;
}

double FourierSeries::l1_norm() const {
  double s = 0.0;
  for (double v : c_even) s += std::abs(v);
  for (double v : c_odd) s += std::abs(v);
  return s;
}

FourierSeries fourier_low_weight(const std::vector<double>& a, double delta,
                                 double eps, Parity parity) {
  if (a.empty()) throw ValidationError("fourier_low_weight: empty coefficient list");
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("fourier_low_weight: delta must lie in (0, 1)");
  if (!(eps > 0.0)) throw ValidationError("fourier_low_weight: eps must be positive");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k]))
      throw ValidationError("fourier_low_weight: non-finite coefficient");
    if (parity == Parity::odd && k % 2 == 0 && a[k] != 0.0)
      throw ValidationError("fourier_low_weight: even coefficient in odd target");
    if (parity == Parity::even && k % 2 == 1 && a[k] != 0.0)
      throw ValidationError("fourier_low_weight: odd coefficient in even target");
  }
  double a_l1 = 0.0;
  for (double v : a) a_l1 += std::abs(v);

  FourierSeries out;
  out.delta = delta;
  if (a_l1 < eps / 2.0) return out;  // the zero series is already eps-close

  const double logterm = std::log(4.0 * a_l1 / eps);
  const int M = std::max(2 * static_cast<int>(std::ceil(logterm / delta)), 0);
  const int L = static_cast<int>(std::ceil(logterm / (delta * delta)));
  const int K = static_cast<int>(a.size()) - 1;

  // Collapse over the power index first: s_par[lhat] = sum_k a_k b^{(k)}_l
  // with l = 2 lhat (even) or 2 lhat + 1 (odd).  The rows for one parity
  // class form a chain under the two-term recurrence, so only the current
  // and previous row are kept in memory (O(L) instead of O(K L)).
  const int n_even = L / 2 + 1;
  const int n_odd = (L + 1) / 2;
  std::vector<double> s_even(static_cast<std::size_t>(n_even), 0.0);
  std::vector<double> s_odd(static_cast<std::size_t>(n_odd), 0.0);
  int last_even = 0, last_odd = 0;
  for (int k = 1; k <= K; ++k)
    if (a[static_cast<std::size_t>(k)] != 0.0)
      (k % 2 == 0 ? last_even : last_odd) = k;
  if (last_odd >= 1 && n_odd > 0) {
    std::vector<double> prev(static_cast<std::size_t>(n_odd), 0.0);
    std::vector<double> cur = arcsin_row1(static_cast<std::size_t>(n_odd));
    for (int k = 1; k <= last_odd; k += 2) {
      if (k > 1) {
        next_arcsin_row(prev, cur, k);  // prev becomes the row for k
        std::swap(prev, cur);
      }
      const double ak = a[static_cast<std::size_t>(k)];
      if (ak == 0.0) continue;
      for (int lh = 0; lh < n_odd; ++lh)
        s_odd[static_cast<std::size_t>(lh)] += ak * cur[static_cast<std::size_t>(lh)];
    }
  }
  if (last_even >= 2 && n_even > 0) {
    std::vector<double> prev(static_cast<std::size_t>(n_even), 0.0);
    std::vector<double> cur(static_cast<std::size_t>(n_even), 0.0);
    prev[0] = 1.0;  // row for k = 0: b^{(0)}_l = [l == 0]
    for (int k = 2; k <= last_even; k += 2) {
      next_arcsin_row(cur, prev, k);
      std::swap(prev, cur);  // prev now holds the row for k
      const double ak = a[static_cast<std::size_t>(k)];
      if (ak == 0.0) continue;
      for (int lh = 0; lh < n_even; ++lh)
        s_even[static_cast<std::size_t>(lh)] += ak * prev[static_cast<std::size_t>(lh)];
    }
  }

  out.M = M;
  out.c_even.assign(static_cast<std::size_t>(2 * M) + 1, 0.0);
  out.c_odd.assign(static_cast<std::size_t>(2 * M) + 1, 0.0);
  out.c_even[static_cast<std::size_t>(M)] += a[0];

  // c_even[m] = (-1)^m sum_lhat s_even[lhat] binom(2 lhat, m + lhat) 2^{-2 lhat},
  // walking m outward from the central binomial via the ratio recurrence.
  for (int lh = 0; lh < n_even; ++lh) {
    const double s = s_even[static_cast<std::size_t>(lh)];
    if (s == 0.0) continue;
    const int n = 2 * lh;
    double central = std::exp(std::lgamma(n + 1.0) - 2.0 * std::lgamma(lh + 1.0) -
                              n * std::log(2.0));
    const int mmax = std::min(lh, M);
    double pmf = central;  // pmf(n, lh + m) at m = 0
    for (int m = 0; m <= mmax; ++m) {
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      out.c_even[static_cast<std::size_t>(M + m)] += sgn * s * pmf;
      if (m != 0) out.c_even[static_cast<std::size_t>(M - m)] += sgn * s * pmf;
      pmf *= static_cast<double>(lh - m) / static_cast<double>(lh + m + 1);
    }
  }
  // c_odd[m] = (-1)^m sum_lhat s_odd[lhat] binom(2 lhat+1, m + lhat + 1) 2^{-2 lhat - 1},
  // valid for -lhat-1 <= m <= lhat.
  for (int lh = 0; lh < n_odd; ++lh) {
    const double s = s_odd[static_cast<std::size_t>(lh)];
    if (s == 0.0) continue;
    const int n = 2 * lh + 1;
    double at_zero = std::exp(std::lgamma(n + 1.0) - std::lgamma(lh + 2.0) -
                              std::lgamma(lh + 1.0) - n * std::log(2.0));
    double pmf = at_zero;  // pmf(n, lh + 1 + m) at m = 0
    for (int m = 0; m <= std::min(lh, M); ++m) {
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      out.c_odd[static_cast<std::size_t>(M + m)] += sgn * s * pmf;
      // Mirror index: c_odd[-m-1] pairs with sin(pi x (-m-1/2)) = -sin(...)
      if (m + 1 <= M) out.c_odd[static_cast<std::size_t>(M - m - 1)] -= sgn * s * pmf;
      pmf *= static_cast<double>(lh - m) / static_cast<double>(lh + m + 2);
    }
  }
  return out;
}

void SubStochasticMatrix::validate() const {
  const Eigen::Index n = entries.rows();
  if (n == 0 || entries.cols() != n)
    throw ValidationError("SubStochasticMatrix: matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError("SubStochasticMatrix: entries must be finite and >= 0");
      if (j < i && v != 0.0)
        throw ValidationError("SubStochasticMatrix: matrix must be upper-triangular");
      row_sum += v;
    }
    if (!(row_sum < 1.0))
      throw ValidationError("SubStochasticMatrix: row sums must be < 1");
  }
  if (bit_precision < 1 || bit_precision > 64)
    throw ValidationError("SubStochasticMatrix: bit_precision out of range");
}

namespace {

void check_walk_indices(const SubStochasticMatrix& B, int k, int s, int t) {
  B.validate();
  const int l = static_cast<int>(B.entries.rows());
  if (k < 0) throw ValidationError("substochastic_power: k must be >= 0");
  if (s < 1 || s > l || t < 1 || t > l)
    throw ValidationError("substochastic_power: s, t must lie in [1, l]");
}

}  // namespace

double substochastic_power_exact(const SubStochasticMatrix& B, int k, int s, int t) {
  check_walk_indices(B, k, s, t);
  const Eigen::Index n = B.entries.rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < k; ++i) acc = acc * B.entries;
  return acc(s - 1, t - 1);
}

double substochastic_power_walk(const SubStochasticMatrix& B, int k, int s, int t,
                                std::int64_t samples, std::uint64_t seed) {
  check_walk_indices(B, k, s, t);
  if (samples < 1) throw ValidationError("substochastic_power_walk: samples must be >= 1");
  const int l = static_cast<int>(B.entries.rows());
  // Augmented chain: node l is absorbing and receives the missing row mass.
  std::vector<std::vector<double>> cdf(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    auto& row = cdf[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(l) + 1);
    double acc = 0.0;
    for (int j = 0; j < l; ++j) {
      acc += B.entries(i, j);
      row[static_cast<std::size_t>(j)] = acc;
    }
    row[static_cast<std::size_t>(l)] = 1.0;
  }
  Rng rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t trial = 0; trial < samples; ++trial) {
    int state = s - 1;
    for (int step = 0; step < k && state < l; ++step)
      state = rng.next_categorical(cdf[static_cast<std::size_t>(state)]);
    if (state == t - 1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace qsvt
