#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace twistlab {

// Counter-based RNG (splitmix64 finalizer over a keyed counter). Every
// drawn value is a pure function of (seed, stream, counter), so batch
// generation is reproducible for a fixed seed no matter how the work is
// split across threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ 0x9E3779B97F4A7C15ull, stream)) {}

  std::uint64_t raw(std::uint64_t counter) const { return mix(key_, counter); }

  // Uniform in [0, 1), 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(raw(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_pos(std::uint64_t counter) const {
    return static_cast<double>((raw(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes counters 2c and 2c+1.
  double gaussian(std::uint64_t counter) const {
    const double u1 = uniform_pos(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  std::complex<double> unimodular(std::uint64_t counter) const {
    const double t = 6.283185307179586476925286766559 * uniform(counter);
    return {std::cos(t), std::sin(t)};
  }

  // +1 or -1.
  double sign(std::uint64_t counter) const {
    return (raw(counter) & 1ull) ? 1.0 : -1.0;
  }

 private:
  static std::uint64_t mix(std::uint64_t key, std::uint64_t counter) {
    std::uint64_t z = key + counter * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace twistlab
