#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace editbench {

// Deterministic random stream. Distribution shaping is done by hand so the
// byte stream is identical across standard library implementations; replay
// must not depend on libstdc++ internals.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Box-Muller; avoids log(0) by nudging the first draw off zero.
  double gaussian(double mean, double sd) {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + sd * z;
  }

  // Inclusive bounds. Modulo bias is irrelevant at the ranges used here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  bool chance(double p) { return uniform01() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(
        uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace editbench
