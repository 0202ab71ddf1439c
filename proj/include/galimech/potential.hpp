#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "galimech/galilean.hpp"

namespace galimech {

/// A scalar potential on space-time with optional analytic derivatives.
///
/// Missing derivatives fall back to central differences with step
/// 1e-6 * (1 + |coordinate|). Evaluators must be reentrant.
class Potential {
 public:
  using Value = std::function<double(const Eventd&)>;
  using SpatialGradient = std::function<SpatialCovectord(const Eventd&)>;
  using Gradient = std::function<Covector4d(const Eventd&)>;

  Potential();
  Potential(std::string name, Value value,
            std::optional<SpatialGradient> spatial_gradient = std::nullopt,
            std::optional<Gradient> gradient = std::nullopt,
            bool time_independent = false);

  static Potential free();
  /// phi = -<force, q>, so the force on the particle is constant.
  static Potential uniform(const SpatialCovectord& force);
  /// phi = k/2 |q - center|^2 in chart coordinates.
  static Potential harmonic(double k, const Spatiald& center);

  double operator()(const Eventd& x) const { return value_(x); }
  double value(const Eventd& x) const { return value_(x); }

  /// d_s phi, the derivative along E0 only.
  SpatialCovectord spatial_gradient(const Eventd& x) const;
  /// Full differential d phi in V*.
  Covector4d gradient(const Eventd& x) const;

  bool has_analytic_gradient() const {
    return spatial_gradient_.has_value() || gradient_.has_value();
  }
  /// True when phi does not depend on t in the global chart.
  bool time_independent() const { return time_independent_; }
  const std::string& name() const { return name_; }

  /// Central-difference differential regardless of analytic availability.
  Covector4d numeric_gradient(const Eventd& x) const;

 private:
  std::string name_;
  Value value_;
  std::optional<SpatialGradient> spatial_gradient_;
  std::optional<Gradient> gradient_;
  bool time_independent_ = false;
};

}  // namespace galimech
