#pragma once

#include <cstdint>
#include <random>

#include "galimech/frame_dynamics.hpp"

namespace galimech::harness {

/// Seeded generator for the randomized suites.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Spatiald spatial(double half_width) {
    return Spatiald(uniform(-half_width, half_width),
                    uniform(-half_width, half_width),
                    uniform(-half_width, half_width));
  }
  SpatialCovectord spatial_covector(double half_width) {
    return spatial(half_width).transpose();
  }
  Covector4d covector(double half_width) {
    return Covector4d(uniform(-half_width, half_width),
                      uniform(-half_width, half_width),
                      uniform(-half_width, half_width),
                      uniform(-half_width, half_width));
  }
  Framed frame(double max_speed = 2.0) {
    return Framed::from_velocity(spatial(max_speed));
  }
  /// <tau,v> in [0.5, 2], spatial part in [-2, 2]^3.
  Vector4d future_vector() {
    const double s = uniform(0.5, 2.0);
    const Spatiald q = spatial(2.0);
    return Vector4d(s, q(0), q(1), q(2));
  }
  Eventd event(double half_width = 2.0) {
    return Eventd(uniform(-half_width, half_width),
                  uniform(-half_width, half_width),
                  uniform(-half_width, half_width),
                  uniform(-half_width, half_width));
  }
  /// A A^T + I/2 with entries of A in [-1, 1].
  SpatialMetricd spd_metric() {
    Matrix3d a;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = uniform(-1.0, 1.0);
    }
    Matrix3d g = a * a.transpose() + 0.5 * Matrix3d::Identity();
    g = 0.5 * (g + g.transpose()).eval();
    return SpatialMetricd(g);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// max|a - b| / max(1, max|a|, max|b|).
template <typename A, typename B>
double mixed_relative_error(const A& a, const B& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline double mixed_relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace galimech::harness
