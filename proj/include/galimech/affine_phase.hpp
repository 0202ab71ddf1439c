#pragma once

// Frame-independent objects. An element of W is a class [u, v, r] under
// (u, v, r) ~ (u', v, r - m<sigma(u',u), v>); an element of P is a class
// [u, p] under (u, p) ~ (u', p - m sigma(u',u)). Both are stored by their
// representative in the reference frame e0; every constructor that takes a
// chart canonicalizes immediately, so equality of representatives is
// equality of classes.

#include "galimech/frame_dynamics.hpp"
#include "galimech/generating_objects.hpp"

namespace galimech {

/// Representative of a class in an explicit chart.
struct WRepresentative {
  Framed chart;
  Vector4d v = Vector4d::Zero();
  double r = 0.0;
};

struct PRepresentative {
  Framed chart;
  Covector4d p = Covector4d::Zero();
};

/// Element of the special vector space (W, w1).
class WElement {
 public:
  WElement() = default;
  /// Representative already expressed in the reference chart.
  WElement(const Vector4d& v, double r) : v_(v), r_(r) {}

  static WElement from_chart(const NewtonModel& model, const Framed& chart,
                             const Vector4d& v, double r);
  static WElement from_chart(const NewtonModel& model,
                             const WRepresentative& rep) {
    return from_chart(model, rep.chart, rep.v, rep.r);
  }
  WRepresentative in_chart(const NewtonModel& model, const Framed& chart) const;

  static WElement zero() { return {}; }
  /// w1 = [u, 0, -1], the same in every chart.
  static WElement one() { return WElement(Vector4d::Zero(), -1.0); }

  const Vector4d& v() const { return v_; }
  double r() const { return r_; }

  friend bool operator==(const WElement& a, const WElement& b) {
    return a.v_ == b.v_ && a.r_ == b.r_;
  }

 private:
  Vector4d v_ = Vector4d::Zero();
  double r_ = 0.0;
};

/// Element of the affine phase space P (affine over V*).
class PElement {
 public:
  PElement() = default;
  explicit PElement(const Covector4d& p) : p_(p) {}

  static PElement from_chart(const NewtonModel& model, const Framed& chart,
                             const Covector4d& p);
  static PElement from_chart(const NewtonModel& model,
                             const PRepresentative& rep) {
    return from_chart(model, rep.chart, rep.p);
  }
  PRepresentative in_chart(const NewtonModel& model, const Framed& chart) const;

  const Covector4d& p() const { return p_; }

  /// Free transitive action of V*.
  friend PElement operator+(const PElement& a, const Covector4d& pi) {
    return PElement(a.p_ + pi);
  }
  /// Difference of two points of P is a covector.
  friend Covector4d operator-(const PElement& a, const PElement& b) {
    return a.p_ - b.p_;
  }
  friend bool operator==(const PElement& a, const PElement& b) {
    return a.p_ == b.p_;
  }

 private:
  Covector4d p_ = Covector4d::Zero();
};

/// (v, r) in chart u re-expressed in chart u'.
WRepresentative w_change_chart(const NewtonModel& model,
                               const WRepresentative& w, const Framed& u_prime);
PRepresentative p_change_chart(const NewtonModel& model,
                               const PRepresentative& p, const Framed& u_prime);

WElement w_add(const NewtonModel& model, const WElement& a, const WElement& b);
WElement w_scale(const NewtonModel& model, double lambda, const WElement& w);
/// Sum of two representatives in different charts, returned in the chart
/// (u + u')/2 without passing through the reference chart.
WRepresentative w_add_representatives(const NewtonModel& model,
                                      const WRepresentative& a,
                                      const WRepresentative& b);
/// The projection zeta: W -> V.
Vector4d zeta(const WElement& w);

/// f_w(p) = <p, v> - r; the isomorphism between W and affine functions on P.
double eval_affine(const NewtonModel& model, const WElement& w,
                   const PElement& p);

/// <p, v> = [u, v, <p,v>] in W.
WElement pairing(const NewtonModel& model, const PElement& p, const Vector4d& v);

/// Psi_m = (1/2m)<p, g'p> + <p, u>, constant on classes.
double psi_m(const NewtonModel& model, const Eventd& x, const PElement& p);
/// Psi_m evaluated on a representative in its own chart.
double psi_m(const NewtonModel& model, const Eventd& x,
             const PRepresentative& rep);

/// l_h(x, v): the class of (u, v, l_{h,u}(x, v)).
WElement affine_lagrangian(const NewtonModel& model, const Eventd& x,
                           const Vector4d& v);
/// Same class assembled from an arbitrary chart.
WElement affine_lagrangian(const NewtonModel& model, const Framed& chart,
                           const Eventd& x, const Vector4d& v);

double universal_hamiltonian_residual(const NewtonModel& model,
                                      const Eventd& x, const PElement& p);

/// -r (Psi_m + phi) over base (x, p) with fiber r; p is the reference-chart
/// representative. Same sign convention as family_fam2.
FunctionFamily family_fam3(const NewtonModel& model);

/// Coefficient c with a = b + c (-w1), i.e. r_a - r_b. Throws
/// ProjectionMismatch if zeta(a) != zeta(b).
double fiber_difference(const WElement& a, const WElement& b);

/// H_h(x, v, p) = <p, v> - l_h(x, v) as a real number.
double hamiltonian_fun(const NewtonModel& model, const Eventd& x,
                       const Vector4d& v, const PElement& p);

/// H_h over base (x, p) with fiber v in V+ (the sign used for generation
/// is -H_h). NaN outside V+.
FunctionFamily family_fam4(const NewtonModel& model);

/// Stationary point of H_h in the E0 directions of v under <tau,v> = 1, with
/// the time component of p fixed by the remaining stationarity equation.
struct Fam4Stationary {
  Vector4d v;
  PElement p;
  double shell_residual = 0.0;
  double stationarity_norm = 0.0;
};
Fam4Stationary fam4_stationary(const NewtonModel& model, const Eventd& x,
                               const SpatialCovectord& p_spatial, double tol);

// Tulczyjew triple --------------------------------------------------------

/// (x, p, v, a) in T(N x P).
struct TangentPhase {
  Eventd x;
  PElement p;
  Vector4d v = Vector4d::Zero();
  Covector4d a = Covector4d::Zero();
};

/// (x, p, a, b) in T*(N x P): a in V* pairs with dx, b in V pairs with dp.
struct CotangentPhase {
  Eventd x;
  PElement p;
  Covector4d a = Covector4d::Zero();
  Vector4d b = Vector4d::Zero();
};

/// (x, v, a, p) in P(N x W) = N x V x V* x P.
struct AffineCovector {
  Eventd x;
  Vector4d v = Vector4d::Zero();
  Covector4d a = Covector4d::Zero();
  PElement p;
};

AffineCovector alpha(const TangentPhase& t);
CotangentPhase beta(const TangentPhase& t);
TangentPhase beta_inverse(const CotangentPhase& c);
AffineCovector gamma(const CotangentPhase& c);

/// True iff alpha(element) lies in the image of d l_h over N x V+.
bool dynamics_membership_universal(const NewtonModel& model,
                                   const TangentPhase& element, double tol);

// Inhomogeneous reduction -------------------------------------------------

/// Quotient P -> P0 = P / <tau>, in the reference chart.
SpatialCovectord project_P0(const NewtonModel& model, const PElement& p);
/// P0 coordinates of the class as seen from chart u.
SpatialCovectord project_P0(const NewtonModel& model, const PElement& p,
                            const Framed& chart);
/// Point of P over p0 with time component c in the reference chart.
PElement lift_P0(const NewtonModel& model, const SpatialCovectord& p0, double c);

/// (x, p0, x_dot in E1, p0_dot) with p0 given in `chart`.
struct InhomogeneousTangent {
  Eventd x;
  SpatialCovectord p0 = SpatialCovectord::Zero();
  Framed x_dot;
  SpatialCovectord p0_dot = SpatialCovectord::Zero();
};

bool inhomogeneous_dynamics_membership(const NewtonModel& model,
                                       const InhomogeneousTangent& element,
                                       double tol);
bool inhomogeneous_dynamics_membership(const NewtonModel& model,
                                       const Framed& chart,
                                       const InhomogeneousTangent& element,
                                       double tol);

// Affine metric -----------------------------------------------------------

/// Affine map E1 -> P0, b -> value_at_base + m g(b - base).
class AffineMetric {
 public:
  AffineMetric(double mass, SpatialMetricd metric, Framed base,
               SpatialCovectord value_at_base);

  SpatialCovectord operator()(const Framed& b) const;
  /// Linear part applied to an E0 vector.
  SpatialCovectord linear(const Spatiald& d) const;

  double mass() const { return mass_; }
  const SpatialMetricd& metric() const { return metric_; }
  const Framed& base() const { return base_; }

 private:
  double mass_;
  SpatialMetricd metric_;
  Framed base_;
  SpatialCovectord value_at_base_;
};

/// The Legendre map of the standard model in the reference chart:
/// w -> m g(w - e0).
AffineMetric legendre_affine_metric(const NewtonModel& model);

/// Primitive of an affine metric: the section
/// b -> c + <h(a), b - a> + (1/2)<h_lin(b - a), b - a>, valued in the
/// W1 fiber (reference-chart r coordinate). The constant is the value at
/// the anchor a.
class AffineSection {
 public:
  AffineSection(AffineMetric h, Framed anchor, double constant);

  double operator()(const Framed& b) const;
  const Framed& anchor() const { return anchor_; }
  double constant() const { return constant_; }
  const AffineMetric& metric() const { return h_; }

 private:
  AffineMetric h_;
  Framed anchor_;
  SpatialCovectord h_anchor_;
  double constant_;
};

AffineSection section_from_affine_metric(const NewtonModel& model,
                                         const AffineMetric& h);
AffineSection section_from_affine_metric(const NewtonModel& model,
                                         const AffineMetric& h,
                                         const Framed& anchor);

}  // namespace galimech
