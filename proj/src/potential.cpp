#include "galimech/potential.hpp"

#include <cmath>
#include <utility>

namespace galimech {

namespace {

double fd_step(double c) { return 1e-6 * (1.0 + std::abs(c)); }

}  // namespace

Potential::Potential() : Potential(free()) {}

Potential::Potential(std::string name, Value value,
                     std::optional<SpatialGradient> spatial_gradient,
                     std::optional<Gradient> gradient, bool time_independent)
    : name_(std::move(name)),
      value_(std::move(value)),
      spatial_gradient_(std::move(spatial_gradient)),
      gradient_(std::move(gradient)),
      time_independent_(time_independent) {}

Potential Potential::free() {
  return Potential(
      "free", [](const Eventd&) { return 0.0; },
      [](const Eventd&) { return SpatialCovectord::Zero().eval(); },
      [](const Eventd&) { return Covector4d::Zero().eval(); }, true);
}

Potential Potential::uniform(const SpatialCovectord& force) {
  return Potential(
      "uniform",
      [force](const Eventd& x) { return -force.dot(x.position().transpose()); },
      [force](const Eventd&) { return SpatialCovectord(-force); },
      [force](const Eventd&) {
        return Covector4d(0.0, -force(0), -force(1), -force(2));
      },
      true);
}

Potential Potential::harmonic(double k, const Spatiald& center) {
  return Potential(
      "harmonic",
      [k, center](const Eventd& x) {
        return 0.5 * k * (x.position() - center).squaredNorm();
      },
      [k, center](const Eventd& x) {
        return SpatialCovectord(k * (x.position() - center).transpose());
      },
      [k, center](const Eventd& x) {
        const Spatiald d = k * (x.position() - center);
        return Covector4d(0.0, d(0), d(1), d(2));
      },
      true);
}

Covector4d Potential::numeric_gradient(const Eventd& x) const {
  Covector4d out;
  for (int i = 0; i < 4; ++i) {
    const double h = fd_step(x.coords(i));
    Eventd plus = x;
    Eventd minus = x;
    plus.coords(i) += h;
    minus.coords(i) -= h;
    out(i) = (value_(plus) - value_(minus)) / (plus.coords(i) - minus.coords(i));
  }
  return out;
}

SpatialCovectord Potential::spatial_gradient(const Eventd& x) const {
  if (spatial_gradient_) return (*spatial_gradient_)(x);
  if (gradient_) return iota_star((*gradient_)(x));
  return iota_star(numeric_gradient(x));
}

Covector4d Potential::gradient(const Eventd& x) const {
  if (gradient_) return (*gradient_)(x);
  Covector4d d = numeric_gradient(x);
  if (spatial_gradient_) d.tail<3>() = (*spatial_gradient_)(x);
  return d;
}

}  // namespace galimech
