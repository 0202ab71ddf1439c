#pragma once

// Linear and affine algebra of Newtonian space-time in one fixed global
// chart: events are (t, q1, q2, q3), the time covector is (1, 0, 0, 0) and
// the simultaneity space E0 is {c0 = 0}. Vectors are Eigen column vectors,
// covectors are Eigen row vectors, so a pairing is a plain product.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "galimech/errors.hpp"

namespace galimech {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Covector4 = Eigen::Matrix<Scalar, 1, 4>;
/// Element of E0 written in spatial components.
template <typename Scalar>
using Spatial = Eigen::Matrix<Scalar, 3, 1>;
/// Element of E0*.
template <typename Scalar>
using SpatialCovector = Eigen::Matrix<Scalar, 1, 3>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vector4d = Vector4<double>;
using Covector4d = Covector4<double>;
using Spatiald = Spatial<double>;
using SpatialCovectord = SpatialCovector<double>;
using Matrix3d = Matrix3<double>;

template <typename Scalar>
Covector4<Scalar> tau() {
  return Covector4<Scalar>(Scalar(1), Scalar(0), Scalar(0), Scalar(0));
}

template <typename Scalar>
Scalar pair(const Covector4<Scalar>& p, const Vector4<Scalar>& v) {
  return p.dot(v.transpose());
}

/// Canonical embedding of E0 into V.
template <typename Scalar>
Vector4<Scalar> iota(const Spatial<Scalar>& s) {
  return Vector4<Scalar>(Scalar(0), s.x(), s.y(), s.z());
}

/// Dual projection V* -> E0*.
template <typename Scalar>
SpatialCovector<Scalar> iota_star(const Covector4<Scalar>& p) {
  return p.template tail<3>();
}

/// A point of N.
template <typename Scalar>
struct Event {
  Vector4<Scalar> coords = Vector4<Scalar>::Zero();

  Event() = default;
  explicit Event(const Vector4<Scalar>& c) : coords(c) {}
  Event(Scalar t, Scalar q1, Scalar q2, Scalar q3) : coords(t, q1, q2, q3) {}

  Scalar t() const { return coords(0); }
  Spatial<Scalar> position() const { return coords.template tail<3>(); }

  friend Vector4<Scalar> operator-(const Event& a, const Event& b) {
    return a.coords - b.coords;
  }
  friend Event operator+(const Event& x, const Vector4<Scalar>& v) {
    return Event(Vector4<Scalar>(x.coords + v));
  }
  friend bool operator==(const Event& a, const Event& b) {
    return a.coords == b.coords;
  }
};

/// An inertial frame: an element u of E1, i.e. <tau, u> = 1.
template <typename Scalar>
class Frame {
 public:
  Frame() : u_(Scalar(1), Scalar(0), Scalar(0), Scalar(0)) {}

  /// Throws InvalidFrame unless the time component is exactly one.
  explicit Frame(const Vector4<Scalar>& u) : u_(u) {
    if (u(0) != Scalar(1)) {
      throw InvalidFrame("frame vector must satisfy <tau,u> = 1");
    }
    if (!u.allFinite()) {
      throw InvalidFrame("frame vector must be finite");
    }
  }

  static Frame from_velocity(const Spatial<Scalar>& velocity) {
    return Frame(Vector4<Scalar>(Scalar(1), velocity.x(), velocity.y(),
                                 velocity.z()));
  }

  const Vector4<Scalar>& vector() const { return u_; }
  Spatial<Scalar> velocity() const { return u_.template tail<3>(); }

  /// Midpoint of two frames; E1 is affine so the barycentre stays in E1.
  static Frame midpoint(const Frame& a, const Frame& b) {
    Vector4<Scalar> m = (a.u_ + b.u_) / Scalar(2);
    m(0) = Scalar(1);
    return Frame(m);
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.u_ == b.u_;
  }

 private:
  Vector4<Scalar> u_;
};

using Eventd = Event<double>;
using Framed = Frame<double>;

/// The Euclidean metric g: E0 -> E0*.
template <typename Scalar>
class SpatialMetric {
 public:
  static constexpr double kEigenvalueFloor = 1e-12;

  SpatialMetric() : SpatialMetric(Matrix3<Scalar>::Identity()) {}

  explicit SpatialMetric(const Matrix3<Scalar>& g) : g_(g) {
    using std::abs;
    if (!g.allFinite()) {
      throw InvalidArgument("metric entries must be finite");
    }
    const Scalar scale = std::max(Scalar(1), g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale) {
      throw InvalidArgument("metric must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix3<Scalar>> eig(g,
                                                       Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= Scalar(kEigenvalueFloor)) {
      throw SingularMetric("metric is not positive definite");
    }
    llt_.compute(g);
  }

  const Matrix3<Scalar>& matrix() const { return g_; }

  SpatialCovector<Scalar> lower(const Spatial<Scalar>& s) const {
    return (g_ * s).transpose();
  }
  Spatial<Scalar> raise(const SpatialCovector<Scalar>& a) const {
    return llt_.solve(a.transpose());
  }
  Scalar norm_squared(const Spatial<Scalar>& s) const {
    return s.dot(g_ * s);
  }
  /// <a, g^-1 a> for a in E0*.
  Scalar inverse_norm_squared(const SpatialCovector<Scalar>& a) const {
    return a.dot(raise(a).transpose());
  }

 private:
  Matrix3<Scalar> g_;
  Eigen::LLT<Matrix3<Scalar>> llt_;
};

using SpatialMetricd = SpatialMetric<double>;

template <typename Scalar>
Scalar time_between(const Event<Scalar>& x, const Event<Scalar>& x_prime) {
  return pair(tau<Scalar>(), Vector4<Scalar>(x - x_prime));
}

/// Distance between simultaneous events; throws NotSimultaneous otherwise.
template <typename Scalar>
Scalar spatial_distance(const Event<Scalar>& x, const Event<Scalar>& x_prime,
                        const SpatialMetric<Scalar>& g) {
  using std::abs;
  using std::sqrt;
  const Scalar dt = time_between(x, x_prime);
  const Scalar scale = Scalar(1) + std::max(abs(x.t()), abs(x_prime.t()));
  if (abs(dt) >= Scalar(1e-12) * scale) {
    throw NotSimultaneous("events are not simultaneous");
  }
  const Vector4<Scalar> d = x - x_prime;
  return sqrt(g.norm_squared(d.template tail<3>()));
}

/// Projection onto E0 along the frame: v - <tau,v> u.
template <typename Scalar>
Vector4<Scalar> iota_u(const Frame<Scalar>& u, const Vector4<Scalar>& v) {
  Vector4<Scalar> r = v - v(0) * u.vector();
  r(0) = Scalar(0);
  return r;
}

template <typename Scalar>
struct SplitVector {
  Spatial<Scalar> spatial;
  Scalar time;
};

template <typename Scalar>
struct SplitCovector {
  SpatialCovector<Scalar> spatial;
  Scalar frame_energy;
};

template <typename Scalar>
SplitVector<Scalar> split(const Frame<Scalar>& u, const Vector4<Scalar>& v) {
  return {iota_u(u, v).template tail<3>(), v(0)};
}

template <typename Scalar>
Vector4<Scalar> unsplit(const Frame<Scalar>& u, const SplitVector<Scalar>& s) {
  return iota(s.spatial) + s.time * u.vector();
}

template <typename Scalar>
SplitCovector<Scalar> cosplit(const Frame<Scalar>& u,
                              const Covector4<Scalar>& p) {
  return {iota_star(p), pair(p, u.vector())};
}

template <typename Scalar>
Covector4<Scalar> uncosplit(const Frame<Scalar>& u,
                            const SplitCovector<Scalar>& s) {
  // p0 is fixed by <p,u> = e with the spatial part given.
  const Scalar p0 = s.frame_energy - s.spatial.dot(u.velocity().transpose());
  return Covector4<Scalar>(p0, s.spatial(0), s.spatial(1), s.spatial(2));
}

/// Pullback of a spatial covector along iota_u: a o iota_u.
template <typename Scalar>
Covector4<Scalar> iota_u_star(const Frame<Scalar>& u,
                              const SpatialCovector<Scalar>& a) {
  return Covector4<Scalar>(-a.dot(u.velocity().transpose()), a(0), a(1),
                           a(2));
}

/// The degenerate contravariant tensor iota o g^-1 o iota*.
template <typename Scalar>
Vector4<Scalar> g_prime(const SpatialMetric<Scalar>& g,
                        const Covector4<Scalar>& p) {
  return iota(g.raise(iota_star(p)));
}

/// <p, g'(p)>.
template <typename Scalar>
Scalar g_prime_quadratic(const SpatialMetric<Scalar>& g,
                         const Covector4<Scalar>& p) {
  return g.inverse_norm_squared(iota_star(p));
}

/// Frame-change covector: iota*_{(u'+u)/2} g(u' - u).
template <typename Scalar>
Covector4<Scalar> sigma(const SpatialMetric<Scalar>& g,
                        const Frame<Scalar>& u_prime, const Frame<Scalar>& u) {
  const Spatial<Scalar> du = u_prime.velocity() - u.velocity();
  return iota_u_star(Frame<Scalar>::midpoint(u_prime, u), g.lower(du));
}

}  // namespace galimech
