#include <gtest/gtest.h>

#include "galimech/errors.hpp"
#include "galimech/galilean.hpp"
#include "galimech/harness/sampling.hpp"

using namespace galimech;

namespace {

const SpatialMetricd kId;

Framed frame(double a, double b, double c) {
  return Framed::from_velocity(Spatiald(a, b, c));
}

}  // namespace

TEST(TimeBetween, SimultaneousEventsGiveZero) {
  EXPECT_EQ(time_between(Eventd(1, 0, 0, 0), Eventd(1, 5, 5, 5)), 0.0);
}

TEST(TimeBetween, PureTimeShift) {
  EXPECT_EQ(time_between(Eventd(3, 0, 0, 0), Eventd(1, 0, 0, 0)), 2.0);
}

TEST(TimeBetween, MatchesCoordinateDifference) {
  harness::Sampler rng(1);
  for (int i = 0; i < 50; ++i) {
    const Eventd a = rng.event();
    const Eventd b = rng.event();
    EXPECT_DOUBLE_EQ(time_between(a, b), a.t() - b.t());
  }
}

TEST(SpatialDistance, Examples) {
  EXPECT_EQ(spatial_distance(Eventd(2, 1, 1, 1), Eventd(2, 1, 1, 1), kId), 0.0);
  EXPECT_DOUBLE_EQ(spatial_distance(Eventd(0, 3, 4, 0), Eventd(0, 0, 0, 0), kId), 5.0);
  const SpatialMetricd g(Eigen::Vector3d(4, 1, 1).asDiagonal().toDenseMatrix());
  EXPECT_DOUBLE_EQ(spatial_distance(Eventd(0, 1, 0, 0), Eventd(0, 0, 0, 0), g), 2.0);
}

TEST(SpatialDistance, RejectsNonSimultaneous) {
  EXPECT_THROW(spatial_distance(Eventd(1, 0, 0, 0), Eventd(0, 0, 0, 0), kId),
               NotSimultaneous);
}

TEST(SpatialMetric, RejectsSingularOrAsymmetric) {
  EXPECT_THROW(SpatialMetricd(Eigen::Vector3d(1, 0, 1).asDiagonal().toDenseMatrix()),
               SingularMetric);
  Matrix3d a = Matrix3d::Identity();
  a(0, 1) = 0.5;
  EXPECT_THROW(SpatialMetricd{a}, InvalidArgument);
}

TEST(Frame, RejectsWrongTimeComponent) {
  EXPECT_THROW(Framed(Vector4d(2, 0, 0, 0)), InvalidFrame);
  EXPECT_THROW(frame(std::nan(""), 0, 0), InvalidFrame);
}

TEST(IotaU, Examples) {
  const Framed u;
  EXPECT_EQ(iota_u(u, u.vector()), Vector4d::Zero());
  EXPECT_EQ(iota_u(u, Vector4d(2, 1, 0, 0)), Vector4d(0, 1, 0, 0));
  EXPECT_EQ(iota_u(frame(1, 0, 0), Vector4d(2, 1, 0, 0)), Vector4d(0, -1, 0, 0));
}

TEST(Split, Examples) {
  const auto s = split(Framed(), Vector4d(2, 1, 0, 0));
  EXPECT_EQ(s.spatial, Spatiald(1, 0, 0));
  EXPECT_EQ(s.time, 2.0);
  const auto c = cosplit(Framed(), Covector4d(5, 1, 2, 3));
  EXPECT_EQ(c.spatial, SpatialCovectord(1, 2, 3));
  EXPECT_EQ(c.frame_energy, 5.0);
}

TEST(Split, RoundTripsInMovingFrame) {
  const Framed u = frame(0.3, -1.2, 2.0);
  const Vector4d v(1.5, 0.2, -0.7, 3.0);
  const Covector4d p(-2.0, 1.0, 4.0, -0.5);
  EXPECT_TRUE(unsplit(u, split(u, v)).isApprox(v, 1e-15));
  EXPECT_TRUE(uncosplit(u, cosplit(u, p)).isApprox(p, 1e-15));
}

TEST(GPrime, Examples) {
  EXPECT_EQ(g_prime(kId, tau<double>()), Vector4d::Zero());
  EXPECT_EQ(g_prime(kId, Covector4d(7, 1, 2, 3)), Vector4d(0, 1, 2, 3));
  const SpatialMetricd g2(2.0 * Matrix3d::Identity());
  EXPECT_TRUE(g_prime(g2, Covector4d(0, 2, 0, 0)).isApprox(Vector4d(0, 1, 0, 0)));
}

TEST(Sigma, HandEvaluatedExamples) {
  const Framed e0;
  EXPECT_EQ(sigma(kId, frame(1, 0, 0), e0), Covector4d(-0.5, 1, 0, 0));
  EXPECT_EQ(sigma(kId, frame(0, 1, 0), e0), Covector4d(-0.5, 0, 1, 0));
  EXPECT_EQ(sigma(kId, e0, e0), Covector4d::Zero());
}

TEST(Sigma, AntisymmetryAndCocycle) {
  harness::Sampler rng(42);
  for (int i = 0; i < 200; ++i) {
    const SpatialMetricd g = rng.spd_metric();
    const Framed u = rng.frame(), u1 = rng.frame(), u2 = rng.frame();
    EXPECT_LE(harness::mixed_relative_error(sigma(g, u1, u), Covector4d(-sigma(g, u, u1))),
              1e-12);
    EXPECT_LE(harness::mixed_relative_error(Covector4d(sigma(g, u2, u1) + sigma(g, u1, u)),
                                            sigma(g, u2, u)),
              1e-12);
  }
}

TEST(Sigma, WorksInExtendedPrecision) {
  using Fl = Frame<long double>;
  const SpatialMetric<long double> g;
  const Fl u1 = Fl::from_velocity(Spatial<long double>(0.1L, 0.2L, 0.3L));
  const Fl u2 = Fl::from_velocity(Spatial<long double>(-1.0L, 0.5L, 2.0L));
  const Fl u;
  const Covector4<long double> lhs = sigma(g, u2, u1) + sigma(g, u1, u);
  EXPECT_LE((lhs - sigma(g, u2, u)).cwiseAbs().maxCoeff(), 1e-17L);
}
