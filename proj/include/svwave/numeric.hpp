#ifndef SVWAVE_NUMERIC_HPP
#define SVWAVE_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace svwave {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, so the result is bitwise reproducible no matter
/// how the values were produced or how many workers filled the buffer.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Run fn(begin, end) over [0, count) split into `workers` contiguous
/// chunks. Chunks write disjoint state, so the outcome is independent of
/// the partition.
inline void parallel_for(long count, int workers,
                         const std::function<void(long, long)>& fn) {
  if (count <= 0) return;
  if (workers <= 1 || count < 2 * workers) {
    fn(0, count);
    return;
  }
  const long chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) {
    const long b = std::min<long>(count, w * chunk);
    const long e = std::min<long>(count, (w + 1) * chunk);
    if (b < e) pool.emplace_back(fn, b, e);
  }
  fn(0, std::min<long>(count, chunk));
  for (auto& t : pool) t.join();
}

/// splitmix64: tiny 64-bit generator with a portable, documented stream.
/// Used for all seeded initial data so runs are reproducible from the
/// config alone.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// standard normal via Box-Muller (consumes two uniforms)
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

/// 17 significant digits: enough to round-trip any binary64 value.
inline std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace svwave

#endif
