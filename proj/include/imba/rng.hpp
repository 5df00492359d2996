#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

namespace imba {

/// Counter-based generator: output i of stream s under key k is a fixed
/// mixing function of (k, s, i), so streams can be created independently
/// and results do not depend on the standard library's distributions.
///
/// The mixing function is the SplitMix64 finalizer applied to the key,
/// the stream id and the counter. Distribution sampling (uniform, normal,
/// Student-t, shuffle) is implemented here so that output is bit-identical
/// across platforms. Bump kVersion whenever any sampled value changes.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-ctr";
  static constexpr int kVersion = 1;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)),
        stream_key_(mix(stream + 0x9e3779b97f4a7c15ULL) ^ key_) {}

  std::uint64_t next_u64() {
    const std::uint64_t c = counter_++;
    return mix(stream_key_ + mix(c ^ key_));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi) {
    for (;;) {
      const double t = lo + (hi - lo) * uniform01();
      if (t > lo && t < hi) return t;
    }
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 == 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Student-t with an integer number of degrees of freedom.
  double student_t(int dof) {
    const double z = normal();
    double chi2 = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double g = normal();
      chi2 += g * g;
    }
    return z / std::sqrt(chi2 / dof);
  }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r < limit) return r % bound;
    }
  }

  /// Fisher-Yates.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const std::uint64_t j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t stream_key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream ids used by the instance generator and the curvature estimator.
namespace streams {
inline constexpr std::uint64_t kObjective = 1;
inline constexpr std::uint64_t kStartPoint = 2;
inline constexpr std::uint64_t kCurvatureProbe = 3;
inline constexpr std::uint64_t kConstraintBase = 1000;
}  // namespace streams

}  // namespace imba
