#pragma once

// Mechanics of one massive particle described in a chosen inertial frame u:
// the inhomogeneous (time-parametrized) and homogeneous (any future
// parametrization) lagrangians, their Legendre maps, the mass shell, the
// boost between frames and a fixed-step RK4 integrator.

#include <iosfwd>
#include <vector>

#include "galimech/galilean.hpp"
#include "galimech/potential.hpp"

namespace galimech {

/// Ambient data shared by every frame-dependent and frame-independent
/// operation. The reference frame is fixed to e0.
class NewtonModel {
 public:
  NewtonModel(double mass, SpatialMetricd metric, Potential potential);

  double mass() const { return mass_; }
  const SpatialMetricd& metric() const { return metric_; }
  const Potential& potential() const { return potential_; }
  const Framed& reference_frame() const { return reference_; }

 private:
  double mass_;
  SpatialMetricd metric_;
  Potential potential_;
  Framed reference_;
};

/// State on V*N = N x E0*.
struct PhasePoint {
  Eventd x;
  SpatialCovectord p = SpatialCovectord::Zero();
};

/// State on T*N = N x V*.
struct PhasePoint4 {
  Eventd x;
  Covector4d p = Covector4d::Zero();
};

struct PhaseVelocity {
  Vector4d x_dot = Vector4d::Zero();
  SpatialCovectord p_dot = SpatialCovectord::Zero();
};

/// Element (x, p, x_dot, p_dot) of T T*N.
struct HomogeneousTangent {
  Eventd x;
  Covector4d p = Covector4d::Zero();
  Vector4d x_dot = Vector4d::Zero();
  Covector4d p_dot = Covector4d::Zero();
};

struct TrajectorySample {
  long step = 0;
  PhasePoint state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step_size = 0.0;
  Framed frame;
  double mass = 0.0;
};

double lagrangian_inhom(const NewtonModel& model, const Framed& u,
                        const Eventd& x, const Framed& w);

/// Fiber derivative of lagrangian_inhom: m g(iota_u(w)).
SpatialCovectord legendre_inhom(const NewtonModel& model, const Framed& u,
                                const Framed& w);

double hamiltonian_inhom(const NewtonModel& model, const Framed& u,
                         const Eventd& x, const SpatialCovectord& p);

PhaseVelocity vector_field_inhom(const NewtonModel& model, const Framed& u,
                                 const PhasePoint& state);

/// Homogeneous lagrangian; degree one in v. Throws NotFutureDirected
/// unless <tau,v> > 0.
double lagrangian_hom(const NewtonModel& model, const Framed& u,
                      const Eventd& x, const Vector4d& v);

Covector4d legendre_hom(const NewtonModel& model, const Framed& u,
                        const Eventd& x, const Vector4d& v);

/// (1/2m)<p,g'p> + <p,u> + phi(x); zero exactly on K_{m,u}.
double mass_shell_residual(const NewtonModel& model, const Framed& u,
                           const Eventd& x, const Covector4d& p);

bool in_homogeneous_dynamics(const NewtonModel& model, const Framed& u,
                             const HomogeneousTangent& element, double tol);

/// Phi_{u',u}: (x, p) -> (x, p + m sigma(u', u)).
PhasePoint4 boost(const NewtonModel& model, const Framed& u_prime,
                  const Framed& u, const PhasePoint4& state);

/// Classical RK4 on vector_field_inhom with n steps of size h. Sample k
/// has t = t0 + k h exactly. Throws NonFiniteState on overflow.
Trajectory integrate(const NewtonModel& model, const Framed& u,
                     const PhasePoint& initial, double h, long n);

/// Lifts an inhomogeneous state in frame u to the point of the mass shell
/// K_{m,u} with the same spatial momentum.
PhasePoint4 lift_to_shell(const NewtonModel& model, const Framed& u,
                          const PhasePoint& state);

/// Writes `step,t,q1,q2,q3,p1,p2,p3,H` rows with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const NewtonModel& model,
                          const Trajectory& trajectory);

}  // namespace galimech
