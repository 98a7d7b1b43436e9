#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vkf {

// Counter-based standard normal stream: value i depends only on (seed,
// stream, i), so samples can be generated in any order or in parallel.
class CounterGaussian {
 public:
  explicit CounterGaussian(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x5851f42d4c957f2dULL))) {}

  double operator()(std::uint64_t index) const {
    const double u1 = to_unit(mix(key_ ^ (2 * index)));
    const double u2 = to_unit(mix(key_ ^ (2 * index + 1)));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // (0, 1], never zero so the logarithm stays finite
  static double to_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53; }

  std::uint64_t key_;
};

}  // namespace vkf
