#include "galimech/affine_phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace galimech {

namespace {

double scaled_gap(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                  const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  const double scale = std::max(
      {1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

// W and P ------------------------------------------------------------------

WRepresentative w_change_chart(const NewtonModel& model,
                               const WRepresentative& w,
                               const Framed& u_prime) {
  const Covector4d s = sigma(model.metric(), u_prime, w.chart);
  return {u_prime, w.v, w.r - model.mass() * pair(s, w.v)};
}

PRepresentative p_change_chart(const NewtonModel& model,
                               const PRepresentative& p,
                               const Framed& u_prime) {
  return {u_prime, p.p - model.mass() * sigma(model.metric(), u_prime, p.chart)};
}

WElement WElement::from_chart(const NewtonModel& model, const Framed& chart,
                              const Vector4d& v, double r) {
  const WRepresentative ref =
      w_change_chart(model, {chart, v, r}, model.reference_frame());
  return WElement(ref.v, ref.r);
}

WRepresentative WElement::in_chart(const NewtonModel& model,
                                   const Framed& chart) const {
  return w_change_chart(model, {model.reference_frame(), v_, r_}, chart);
}

PElement PElement::from_chart(const NewtonModel& model, const Framed& chart,
                              const Covector4d& p) {
  return PElement(p_change_chart(model, {chart, p}, model.reference_frame()).p);
}

PRepresentative PElement::in_chart(const NewtonModel& model,
                                   const Framed& chart) const {
  return p_change_chart(model, {model.reference_frame(), p_}, chart);
}

WElement w_add(const NewtonModel& /*model*/, const WElement& a,
               const WElement& b) {
  return WElement(a.v() + b.v(), a.r() + b.r());
}

WElement w_scale(const NewtonModel& /*model*/, double lambda,
                 const WElement& w) {
  return WElement(lambda * w.v(), lambda * w.r());
}

WRepresentative w_add_representatives(const NewtonModel& model,
                                      const WRepresentative& a,
                                      const WRepresentative& b) {
  const Framed mid = Framed::midpoint(a.chart, b.chart);
  const double m = model.mass();
  const double correction =
      m * (pair(sigma(model.metric(), a.chart, mid), a.v) +
           pair(sigma(model.metric(), b.chart, mid), b.v));
  return {mid, a.v + b.v, a.r + b.r + correction};
}

Vector4d zeta(const WElement& w) { return w.v(); }

double eval_affine(const NewtonModel& /*model*/, const WElement& w,
                   const PElement& p) {
  return pair(p.p(), w.v()) - w.r();
}

WElement pairing(const NewtonModel& /*model*/, const PElement& p,
                 const Vector4d& v) {
  return WElement(v, pair(p.p(), v));
}

double psi_m(const NewtonModel& model, const Eventd& x, const PElement& p) {
  return psi_m(model, x, PRepresentative{model.reference_frame(), p.p()});
}

double psi_m(const NewtonModel& model, const Eventd& /*x*/,
             const PRepresentative& rep) {
  return g_prime_quadratic(model.metric(), rep.p) / (2.0 * model.mass()) +
         pair(rep.p, rep.chart.vector());
}

WElement affine_lagrangian(const NewtonModel& model, const Eventd& x,
                           const Vector4d& v) {
  return WElement(v, lagrangian_hom(model, model.reference_frame(), x, v));
}

WElement affine_lagrangian(const NewtonModel& model, const Framed& chart,
                           const Eventd& x, const Vector4d& v) {
  return WElement::from_chart(model, chart, v,
                              lagrangian_hom(model, chart, x, v));
}

double universal_hamiltonian_residual(const NewtonModel& model,
                                      const Eventd& x, const PElement& p) {
  return psi_m(model, x, p) + model.potential()(x);
}

FunctionFamily family_fam3(const NewtonModel& model) {
  FunctionFamily::Value value = [model](const VectorXd& base,
                                        const VectorXd& fiber) {
    return -fiber(0) * universal_hamiltonian_residual(
                           model, unpack_event(base),
                           PElement(unpack_covector(base)));
  };
  FunctionFamily::Gradient gradient = [model](const VectorXd& base,
                                              const VectorXd& fiber) {
    const double r = fiber(0);
    const Eventd x = unpack_event(base);
    const Covector4d p = unpack_covector(base);
    VectorXd g(9);
    g.head<4>() = (-r * model.potential().gradient(x)).transpose();
    g.segment<4>(4) = -r * (g_prime(model.metric(), p) / model.mass() +
                            model.reference_frame().vector());
    g(8) = -universal_hamiltonian_residual(model, x, PElement(p));
    return g;
  };
  return FunctionFamily(8, 1, std::move(value), std::move(gradient));
}

double fiber_difference(const WElement& a, const WElement& b) {
  if (a.v() != b.v()) {
    throw ProjectionMismatch("W elements project to different vectors");
  }
  return a.r() - b.r();
}

double hamiltonian_fun(const NewtonModel& model, const Eventd& x,
                       const Vector4d& v, const PElement& p) {
  return fiber_difference(pairing(model, p, v), affine_lagrangian(model, x, v));
}

FunctionFamily family_fam4(const NewtonModel& model) {
  FunctionFamily::Value value = [model](const VectorXd& base,
                                        const VectorXd& fiber) {
    const Vector4d v = fiber.head<4>();
    if (!(v(0) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return -hamiltonian_fun(model, unpack_event(base), v,
                            PElement(unpack_covector(base)));
  };
  FunctionFamily::Gradient gradient = [model](const VectorXd& base,
                                              const VectorXd& fiber) {
    const Vector4d v = fiber.head<4>();
    VectorXd g(12);
    if (!(v(0) > 0.0)) {
      g.setConstant(std::numeric_limits<double>::quiet_NaN());
      return g;
    }
    const Eventd x = unpack_event(base);
    g.head<4>() = (-v(0) * model.potential().gradient(x)).transpose();
    g.segment<4>(4) = -v;
    g.tail<4>() = (legendre_hom(model, model.reference_frame(), x, v) -
                   unpack_covector(base))
                      .transpose();
    return g;
  };
  return FunctionFamily(8, 4, std::move(value), std::move(gradient));
}

Fam4Stationary fam4_stationary(const NewtonModel& model, const Eventd& x,
                               const SpatialCovectord& p_spatial, double tol) {
  // Gauge <tau,v> = 1: the fiber is the E0 part of v only.
  const FunctionFamily full = family_fam4(model);
  const FunctionFamily gauged(
      8, 3,
      [full](const VectorXd& base, const VectorXd& vs) {
        VectorXd v(4);
        v << 1.0, vs;
        return full(base, v);
      },
      [full](const VectorXd& base, const VectorXd& vs) {
        VectorXd v(4);
        v << 1.0, vs;
        const VectorXd g = full.gradient(base, v);
        VectorXd out(11);
        out << g.head(8), g.tail(3);
        return out;
      });
  const Covector4d p_trial(0.0, p_spatial(0), p_spatial(1), p_spatial(2));
  const VectorXd base = pack_event_covector(x, p_trial);
  const CriticalSolveResult crit =
      solve_critical(gauged, base, {VectorXd::Zero(3)}, tol);
  if (crit.points.empty()) {
    throw NotCritical("no stationary point of H_h in the E0 directions");
  }
  Vector4d v;
  v << 1.0, crit.points.front().fiber;
  // The remaining equation, along tau, fixes the time component of p.
  const double p0 = legendre_hom(model, model.reference_frame(), x, v)(0);
  const PElement p(Covector4d(p0, p_spatial(0), p_spatial(1), p_spatial(2)));
  Fam4Stationary out;
  out.v = v;
  out.p = p;
  out.shell_residual = universal_hamiltonian_residual(model, x, p);
  out.stationarity_norm =
      fiber_gradient(full, pack_event_covector(x, p.p()), v).norm();
  return out;
}

// Tulczyjew triple --------------------------------------------------------

AffineCovector alpha(const TangentPhase& t) { return {t.x, t.v, t.a, t.p}; }

CotangentPhase beta(const TangentPhase& t) { return {t.x, t.p, t.a, -t.v}; }

TangentPhase beta_inverse(const CotangentPhase& c) {
  return {c.x, c.p, -c.b, c.a};
}

AffineCovector gamma(const CotangentPhase& c) { return {c.x, -c.b, c.a, c.p}; }

bool dynamics_membership_universal(const NewtonModel& model,
                                   const TangentPhase& element, double tol) {
  const AffineCovector image = alpha(element);
  if (!(image.v(0) > 0.0)) return false;
  // d l_h at (x, v), written in the reference chart.
  const Covector4d dx = -image.v(0) * model.potential().gradient(image.x);
  const Covector4d dv =
      legendre_hom(model, model.reference_frame(), image.x, image.v);
  return scaled_gap(image.a, dx) <= tol && scaled_gap(image.p.p(), dv) <= tol;
}

// Inhomogeneous reduction -------------------------------------------------

SpatialCovectord project_P0(const NewtonModel& /*model*/, const PElement& p) {
  return iota_star(p.p());
}

SpatialCovectord project_P0(const NewtonModel& model, const PElement& p,
                            const Framed& chart) {
  return iota_star(p.in_chart(model, chart).p);
}

PElement lift_P0(const NewtonModel& /*model*/, const SpatialCovectord& p0,
                 double c) {
  return PElement(Covector4d(c, p0(0), p0(1), p0(2)));
}

bool inhomogeneous_dynamics_membership(const NewtonModel& model,
                                       const InhomogeneousTangent& element,
                                       double tol) {
  return inhomogeneous_dynamics_membership(model, model.reference_frame(),
                                           element, tol);
}

bool inhomogeneous_dynamics_membership(const NewtonModel& model,
                                       const Framed& chart,
                                       const InhomogeneousTangent& element,
                                       double tol) {
  const Spatiald expected_velocity =
      model.metric().raise(element.p0) / model.mass() + chart.velocity();
  const SpatialCovectord expected_force =
      -model.potential().spatial_gradient(element.x);
  return scaled_gap(element.x_dot.velocity().transpose(),
                    expected_velocity.transpose()) <= tol &&
         scaled_gap(element.p0_dot, expected_force) <= tol;
}

// Affine metric -----------------------------------------------------------

AffineMetric::AffineMetric(double mass, SpatialMetricd metric, Framed base,
                           SpatialCovectord value_at_base)
    : mass_(mass),
      metric_(std::move(metric)),
      base_(std::move(base)),
      value_at_base_(value_at_base) {
  if (!(mass > 0.0)) throw InvalidArgument("affine metric needs m > 0");
}

SpatialCovectord AffineMetric::linear(const Spatiald& d) const {
  return mass_ * metric_.lower(d);
}

SpatialCovectord AffineMetric::operator()(const Framed& b) const {
  return value_at_base_ + linear(b.velocity() - base_.velocity());
}

AffineMetric legendre_affine_metric(const NewtonModel& model) {
  return AffineMetric(model.mass(), model.metric(), model.reference_frame(),
                      SpatialCovectord::Zero());
}

AffineSection::AffineSection(AffineMetric h, Framed anchor, double constant)
    : h_(std::move(h)),
      anchor_(std::move(anchor)),
      h_anchor_(h_(anchor_)),
      constant_(constant) {}

double AffineSection::operator()(const Framed& b) const {
  const Spatiald d = b.velocity() - anchor_.velocity();
  return constant_ + h_anchor_.dot(d.transpose()) +
         0.5 * h_.linear(d).dot(d.transpose());
}

AffineSection section_from_affine_metric(const NewtonModel& model,
                                         const AffineMetric& h) {
  return section_from_affine_metric(model, h, h.base());
}

AffineSection section_from_affine_metric(const NewtonModel& /*model*/,
                                         const AffineMetric& h,
                                         const Framed& anchor) {
  return AffineSection(h, anchor, 0.0);
}

}  // namespace galimech
