#ifndef MALAB_RNG_HPP
#define MALAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace malab {

/// Deterministic 64-bit generator (splitmix64). Used instead of the
/// standard-library distributions so that sweep outputs are byte-identical
/// across platforms for a fixed seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (deterministic, no cached spare).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return next_u64() % m; }

private:
  std::uint64_t state_;
};

}  // namespace malab

#endif
