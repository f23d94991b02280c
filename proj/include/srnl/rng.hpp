#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

namespace srnl {

// Stream-splittable seeded RNG. Every chain, dataset and oracle draws from its
// own stream derived from (base seed, stream id), so results do not depend on
// execution order or thread count. Gaussians use Box-Muller with a one-value
// cache; the method name is recorded in trajectory metadata.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(mix(seed)) {}

  static RngStream derived(std::uint64_t base, std::uint64_t stream_id) {
    return RngStream(mix(base + 0x9e3779b97f4a7c15ULL * (stream_id + 1)));
  }

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0,1), 53-bit resolution
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
  }

  // Floyd's algorithm: uniform size-m subset of {0..n-1}, O(m) per call.
  void sample_without_replacement(int n, int m, std::vector<int>& out) {
    out.clear();
    picked_.clear();
    for (int j = n - m; j < n; ++j) {
      const int t = static_cast<int>(below(static_cast<std::uint64_t>(j) + 1));
      if (picked_.insert(t).second) {
        out.push_back(t);
      } else {
        picked_.insert(j);
        out.push_back(j);
      }
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
  std::unordered_set<int> picked_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace srnl
