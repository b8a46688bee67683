#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace sqc {

/// Seeded RNG with fixed uniform/normal mappings. std::mt19937_64 is fully
/// specified by the standard, but the std distributions are not, so the
/// double mappings are done by hand to keep streams reproducible across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller; two uniforms per call, no cached spare.
  double normal() {
    constexpr double kTwoPi = 6.283185307179586;
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform direction on the unit sphere.
  Eigen::VectorXd unit_vector(int n) {
    while (true) {
      Eigen::VectorXd v = normal_vector(n);
      const double nrm = v.norm();
      if (nrm > 1e-12) return v / nrm;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqc
