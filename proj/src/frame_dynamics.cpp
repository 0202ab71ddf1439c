#include "galimech/frame_dynamics.hpp"

#include <cmath>
#include <ostream>
#include <utility>

#include "galimech/number_format.hpp"

namespace galimech {

NewtonModel::NewtonModel(double mass, SpatialMetricd metric,
                         Potential potential)
    : mass_(mass),
      metric_(std::move(metric)),
      potential_(std::move(potential)) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvalidArgument("mass must be positive and finite");
  }
}

double lagrangian_inhom(const NewtonModel& model, const Framed& u,
                        const Eventd& x, const Framed& w) {
  const Spatiald rel = w.velocity() - u.velocity();
  return 0.5 * model.mass() * model.metric().norm_squared(rel) -
         model.potential()(x);
}

SpatialCovectord legendre_inhom(const NewtonModel& model, const Framed& u,
                                const Framed& w) {
  return model.mass() *
         model.metric().lower(iota_u(u, w.vector()).tail<3>());
}

double hamiltonian_inhom(const NewtonModel& model, const Framed& /*u*/,
                         const Eventd& x, const SpatialCovectord& p) {
  return model.metric().inverse_norm_squared(p) / (2.0 * model.mass()) +
         model.potential()(x);
}

PhaseVelocity vector_field_inhom(const NewtonModel& model, const Framed& u,
                                 const PhasePoint& state) {
  PhaseVelocity out;
  out.x_dot = iota(Spatiald(model.metric().raise(state.p) / model.mass())) +
              u.vector();
  out.p_dot = -model.potential().spatial_gradient(state.x);
  return out;
}

namespace {

void require_future(const Vector4d& v) {
  if (!(v(0) > 0.0)) {
    throw NotFutureDirected("velocity must satisfy <tau,v> > 0");
  }
}

}  // namespace

double lagrangian_hom(const NewtonModel& model, const Framed& u,
                      const Eventd& x, const Vector4d& v) {
  require_future(v);
  const double s = v(0);
  const Spatiald rel = iota_u(u, v).tail<3>();
  return model.mass() / (2.0 * s) * model.metric().norm_squared(rel) -
         s * model.potential()(x);
}

Covector4d legendre_hom(const NewtonModel& model, const Framed& u,
                        const Eventd& x, const Vector4d& v) {
  require_future(v);
  const double s = v(0);
  const double m = model.mass();
  const Spatiald rel = iota_u(u, v).tail<3>();
  const SpatialCovectord g_rel = model.metric().lower(rel);
  Covector4d p = (m / s) * iota_u_star(u, g_rel);
  p -= (m / (2.0 * s * s) * g_rel.dot(rel.transpose()) +
        model.potential()(x)) *
       tau<double>();
  return p;
}

double mass_shell_residual(const NewtonModel& model, const Framed& u,
                           const Eventd& x, const Covector4d& p) {
  return g_prime_quadratic(model.metric(), p) / (2.0 * model.mass()) +
         pair(p, u.vector()) + model.potential()(x);
}

bool in_homogeneous_dynamics(const NewtonModel& model, const Framed& u,
                             const HomogeneousTangent& element, double tol) {
  const Vector4d& v = element.x_dot;
  if (!(v(0) > 0.0)) return false;
  const Covector4d p_dot_expected =
      -v(0) * model.potential().gradient(element.x);
  const Covector4d p_expected = legendre_hom(model, u, element.x, v);
  const double p_scale = std::max(1.0, p_expected.cwiseAbs().maxCoeff());
  const double pdot_scale = std::max(1.0, p_dot_expected.cwiseAbs().maxCoeff());
  return (element.p - p_expected).cwiseAbs().maxCoeff() <= tol * p_scale &&
         (element.p_dot - p_dot_expected).cwiseAbs().maxCoeff() <=
             tol * pdot_scale;
}

PhasePoint4 boost(const NewtonModel& model, const Framed& u_prime,
                  const Framed& u, const PhasePoint4& state) {
  return {state.x,
          state.p + model.mass() * sigma(model.metric(), u_prime, u)};
}

PhasePoint4 lift_to_shell(const NewtonModel& model, const Framed& u,
                          const PhasePoint& state) {
  // Choose p0 so that the residual vanishes: <p,u> = p0 + <p_s, u_s>.
  const double kinetic =
      model.metric().inverse_norm_squared(state.p) / (2.0 * model.mass());
  const double p0 = -kinetic - state.p.dot(u.velocity().transpose()) -
                    model.potential()(state.x);
  return {state.x, Covector4d(p0, state.p(0), state.p(1), state.p(2))};
}

namespace {

struct Rk4State {
  Spatiald q;
  SpatialCovectord p;
};

Rk4State derivative(const NewtonModel& model, const Framed& u, double t,
                    const Rk4State& s) {
  const PhasePoint point{Eventd(t, s.q(0), s.q(1), s.q(2)), s.p};
  const PhaseVelocity f = vector_field_inhom(model, u, point);
  return {f.x_dot.tail<3>(), f.p_dot};
}

}  // namespace

Trajectory integrate(const NewtonModel& model, const Framed& u,
                     const PhasePoint& initial, double h, long n) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("step size must be positive");
  }
  if (n < 1) {
    throw InvalidArgument("number of steps must be at least one");
  }
  Trajectory traj;
  traj.step_size = h;
  traj.frame = u;
  traj.mass = model.mass();
  traj.samples.reserve(static_cast<std::size_t>(n) + 1);
  traj.samples.push_back({0, initial});

  const double t0 = initial.x.t();
  Rk4State s{initial.x.position(), initial.p};
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const Rk4State k1 = derivative(model, u, t, s);
    const Rk4State k2 = derivative(
        model, u, t + 0.5 * h, {s.q + 0.5 * h * k1.q, s.p + 0.5 * h * k1.p});
    const Rk4State k3 = derivative(
        model, u, t + 0.5 * h, {s.q + 0.5 * h * k2.q, s.p + 0.5 * h * k2.p});
    const Rk4State k4 =
        derivative(model, u, t + h, {s.q + h * k3.q, s.p + h * k3.p});
    s.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    s.p += h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    if (!s.q.allFinite() || !s.p.allFinite()) {
      throw NonFiniteState("state became non-finite at step " +
                           std::to_string(k + 1));
    }
    const double t_next = t0 + static_cast<double>(k + 1) * h;
    traj.samples.push_back(
        {k + 1, PhasePoint{Eventd(t_next, s.q(0), s.q(1), s.q(2)), s.p}});
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const NewtonModel& model,
                          const Trajectory& trajectory) {
  out << "step,t,q1,q2,q3,p1,p2,p3,H\n";
  for (const auto& sample : trajectory.samples) {
    const auto& st = sample.state;
    out << sample.step;
    for (int i = 0; i < 4; ++i) out << ',' << format_double(st.x.coords(i));
    for (int i = 0; i < 3; ++i) out << ',' << format_double(st.p(i));
    out << ','
        << format_double(hamiltonian_inhom(model, trajectory.frame, st.x, st.p))
        << '\n';
  }
}

}  // namespace galimech
