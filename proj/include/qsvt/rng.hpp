#pragma once
// Counter-based splittable pseudo-random generator.
//
// Every sampled operation in the toolkit takes an explicit 64-bit seed and
// draws from an independent stream derived from (seed, stream, counter) by a
// SplitMix64-style bijective mixer.  Streams never share state, so batches of
// instances can run in parallel and reruns are bit-identical.

#include <cstdint>
#include <cmath>

namespace qsvt {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::mix64(seed ^ detail::mix64(stream + 0x1b873593ULL))), counter_(0) {}

  // Derives an independent child generator; children with distinct tags are
  // decorrelated from each other and from the parent.
  Rng split(std::uint64_t tag) const {
    Rng child(*this);
    child.key_ = detail::mix64(key_ ^ detail::mix64(tag + 0xcc9e2d51ULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return detail::mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (one value per call; no cached state so
  // the stream position stays a pure function of the call count).
  double next_normal() {
    double u1 = next_double(), u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Index drawn from the discrete distribution with the given cumulative
  // weights (cdf.back() need not be 1; values above it map to cdf size).
  template <typename Vec>
  int next_categorical(const Vec& cdf) {
    const double u = next_double() * 1.0;
    int lo = 0, hi = static_cast<int>(cdf.size());
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cdf[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace qsvt
