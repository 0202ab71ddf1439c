#include <gtest/gtest.h>

#include <cmath>

#include "galimech/affine_phase.hpp"
#include "galimech/errors.hpp"
#include "galimech/harness/sampling.hpp"

using namespace galimech;
using harness::mixed_relative_error;

namespace {

const NewtonModel kFree(1.0, SpatialMetricd(), Potential::free());
const Framed kRef;
const Framed kU1 = Framed::from_velocity(Spatiald(1, 0, 0));

NewtonModel random_model(harness::Sampler& rng) {
  return NewtonModel(rng.uniform(0.5, 3.0), rng.spd_metric(),
                     Potential::harmonic(rng.uniform(0.5, 2.0), rng.spatial(1.0)));
}

}  // namespace

TEST(WChangeChart, Examples) {
  const WRepresentative w{kRef, Vector4d(1, 1, 0, 0), 0.0};
  const WRepresentative same = w_change_chart(kFree, w, kRef);
  EXPECT_EQ(same.v, w.v);
  EXPECT_EQ(same.r, w.r);
  EXPECT_DOUBLE_EQ(w_change_chart(kFree, w, kU1).r, -0.5);
}

TEST(WChangeChart, ChainMatchesDirect) {
  harness::Sampler rng(11);
  for (int i = 0; i < 100; ++i) {
    const NewtonModel model = random_model(rng);
    const WRepresentative w{rng.frame(), rng.future_vector(), rng.uniform(-2, 2)};
    const Framed a = rng.frame(), b = rng.frame(), c = rng.frame();
    const WRepresentative chained =
        w_change_chart(model, w_change_chart(model, w_change_chart(model, w, a), b), c);
    EXPECT_LE(mixed_relative_error(chained.r, w_change_chart(model, w, c).r), 1e-12);
  }
}

TEST(WAdd, ZeroAndReferenceChart) {
  const WElement a(Vector4d(1, 2, 3, 4), 0.5);
  const WElement b(Vector4d(0, 1, 0, -1), -2.0);
  EXPECT_EQ(w_add(kFree, a, WElement::zero()), a);
  const WElement s = w_add(kFree, a, b);
  EXPECT_EQ(s.v(), Vector4d(1, 3, 3, 3));
  EXPECT_EQ(s.r(), -1.5);
  EXPECT_EQ(zeta(s), zeta(a) + zeta(b));
}

TEST(WAdd, MixedChartSumAgreesWithCanonical) {
  harness::Sampler rng(12);
  const NewtonModel model = random_model(rng);
  const WElement a(rng.future_vector(), 0.3);
  const WElement b(rng.future_vector(), -1.1);
  const WRepresentative sum = w_add_representatives(model, a.in_chart(model, rng.frame()),
                                                    b.in_chart(model, rng.frame()));
  const WElement expected = w_add(model, a, b);
  const WElement got = WElement::from_chart(model, sum);
  EXPECT_LE(mixed_relative_error(got.v(), expected.v()), 1e-12);
  EXPECT_LE(mixed_relative_error(got.r(), expected.r()), 1e-12);
}

TEST(WOne, ChartIndependent) {
  harness::Sampler rng(13);
  for (int i = 0; i < 20; ++i) {
    const WRepresentative rep = WElement::one().in_chart(kFree, rng.frame());
    EXPECT_EQ(rep.v, Vector4d::Zero());
    EXPECT_EQ(rep.r, -1.0);
  }
}

TEST(EvalAffine, Examples) {
  harness::Sampler rng(14);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(eval_affine(kFree, WElement::one(), PElement(rng.covector(10.0))), 1.0);
  }
  const WElement w(Vector4d(1, 1, 0, 0), 0.0);
  const PElement p(Covector4d(0, 1, 0, 0));
  EXPECT_EQ(eval_affine(kFree, w, p), 1.0);
  for (int i = 0; i < 100; ++i) {
    const Framed u = rng.frame();
    const double moved = eval_affine(kFree, WElement::from_chart(kFree, w.in_chart(kFree, u)),
                                     PElement::from_chart(kFree, p.in_chart(kFree, u)));
    EXPECT_LE(std::abs(moved - 1.0), 1e-12);
  }
}

TEST(Pairing, Examples) {
  const PElement p(Covector4d(0, 1, 0, 0));
  EXPECT_EQ(pairing(kFree, p, Vector4d::Zero()), WElement::zero());
  const WElement w = pairing(kFree, p, Vector4d(1, 1, 0, 0));
  EXPECT_EQ(w.v(), Vector4d(1, 1, 0, 0));
  EXPECT_EQ(w.r(), 1.0);
  const PRepresentative rep = p.in_chart(kFree, kU1);
  const WElement via = WElement::from_chart(kFree, kU1, Vector4d(1, 1, 0, 0),
                                            pair(rep.p, Vector4d(1, 1, 0, 0)));
  EXPECT_DOUBLE_EQ(via.r(), 1.0);
}

TEST(PsiM, Examples) {
  EXPECT_EQ(psi_m(kFree, Eventd(), PElement()), 0.0);
  const PElement p(Covector4d(0, 1, 0, 0));
  EXPECT_DOUBLE_EQ(psi_m(kFree, Eventd(), p), 0.5);
  const PRepresentative rep = p.in_chart(kFree, kU1);
  EXPECT_TRUE(rep.p.isApprox(Covector4d(0.5, 0, 0, 0)));
  EXPECT_DOUBLE_EQ(psi_m(kFree, Eventd(), rep), 0.5);
}

TEST(AffineLagrangian, Examples) {
  const Vector4d v(1, 1, 0, 0);
  const WElement l = affine_lagrangian(kFree, Eventd(), v);
  EXPECT_EQ(l.v(), v);
  EXPECT_DOUBLE_EQ(l.r(), 0.5);
  const WElement via = affine_lagrangian(kFree, kU1, Eventd(), v);
  EXPECT_DOUBLE_EQ(via.r(), 0.5);
  const WElement scaled = affine_lagrangian(kFree, Eventd(), 3.0 * v);
  EXPECT_EQ(scaled, w_scale(kFree, 3.0, l));
  EXPECT_THROW(affine_lagrangian(kFree, Eventd(), Vector4d(0, 1, 0, 0)), NotFutureDirected);
}

TEST(UniversalResidual, Examples) {
  EXPECT_EQ(universal_hamiltonian_residual(kFree, Eventd(), PElement()), 0.0);
  const NewtonModel one(1.0, SpatialMetricd(),
                        Potential("one", [](const Eventd&) { return 1.0; }));
  EXPECT_DOUBLE_EQ(universal_hamiltonian_residual(one, Eventd(), PElement(Covector4d(0, 1, 0, 0))),
                   1.5);
}

TEST(HamiltonianFun, Examples) {
  EXPECT_DOUBLE_EQ(hamiltonian_fun(kFree, Eventd(), Vector4d(1, 1, 0, 0), PElement()), -0.5);
  harness::Sampler rng(15);
  const NewtonModel model = random_model(rng);
  for (int i = 0; i < 50; ++i) {
    const Eventd x = rng.event();
    const Vector4d v = rng.future_vector();
    const PElement p(rng.covector(2.0));
    const Framed u = rng.frame();
    const double chart_u = pair(p.in_chart(model, u).p, v) - lagrangian_hom(model, u, x, v);
    EXPECT_LE(mixed_relative_error(chart_u, hamiltonian_fun(model, x, v, p)), 1e-12);
  }
}

TEST(FiberDifference, RejectsDifferentProjections) {
  EXPECT_DOUBLE_EQ(fiber_difference(WElement(Vector4d(1, 0, 0, 0), 2.0),
                                    WElement(Vector4d(1, 0, 0, 0), 0.5)),
                   1.5);
  EXPECT_THROW(fiber_difference(WElement(Vector4d(1, 0, 0, 0), 0.0),
                                WElement(Vector4d(2, 0, 0, 0), 0.0)),
               ProjectionMismatch);
}

TEST(Fam4, StationaryPointsLieOnShell) {
  harness::Sampler rng(16);
  const NewtonModel model = random_model(rng);
  for (int i = 0; i < 20; ++i) {
    const Fam4Stationary st =
        fam4_stationary(model, rng.event(), rng.spatial_covector(2.0), 1e-12);
    EXPECT_LE(std::abs(st.shell_residual), 1e-10);
    EXPECT_LE(st.stationarity_norm, 1e-10);
    EXPECT_EQ(st.v(0), 1.0);
  }
}

TEST(Tulczyjew, GammaIsAlphaAfterBetaInverse) {
  harness::Sampler rng(18);
  for (int i = 0; i < 100; ++i) {
    const CotangentPhase c{rng.event(), PElement(rng.covector(2.0)), rng.covector(2.0),
                           rng.future_vector()};
    const AffineCovector g = gamma(c);
    const AffineCovector ab = alpha(beta_inverse(c));
    EXPECT_EQ(g.x, ab.x);
    EXPECT_EQ(g.v, ab.v);
    EXPECT_EQ(g.a, ab.a);
    EXPECT_EQ(g.p, ab.p);
  }
}

TEST(Tulczyjew, BetaSquaredNegatesFibers) {
  const TangentPhase t{Eventd(1, 2, 3, 4), PElement(Covector4d(1, 0, 0, 0)),
                       Vector4d(1, 2, 3, 4), Covector4d(5, 6, 7, 8)};
  const CotangentPhase once = beta(t);
  const CotangentPhase twice =
      beta(TangentPhase{once.x, once.p, once.a.transpose(), once.b.transpose()});
  EXPECT_EQ(twice.a, Covector4d(-t.v.transpose()));
  EXPECT_EQ(twice.b, Vector4d(-t.a.transpose()));
  const AffineCovector a = alpha(t);
  EXPECT_EQ(a.x, t.x);
  EXPECT_EQ(a.p, t.p);
}

TEST(UniversalMembership, Examples) {
  const Vector4d v(1, 1, 0, 0);
  const Eventd x(0, 0.3, 0, 0);
  const PhasePoint4 moving{x, legendre_hom(kFree, kU1, x, v)};
  const PElement boosted = PElement::from_chart(kFree, kRef, boost(kFree, kU1, kRef, moving).p);
  EXPECT_TRUE(dynamics_membership_universal(kFree, {x, boosted, v, Covector4d::Zero()}, 1e-12));
  EXPECT_FALSE(dynamics_membership_universal(kFree, {x, boosted, -v, Covector4d::Zero()}, 1e-12));
  EXPECT_FALSE(dynamics_membership_universal(
      kFree, {x, boosted + Covector4d(0.25, 0, 0, 0), v, Covector4d::Zero()}, 1e-12));
}

TEST(ProjectP0, Examples) {
  harness::Sampler rng(19);
  const PElement p(rng.covector(3.0));
  EXPECT_EQ(project_P0(kFree, p), project_P0(kFree, p + 7.0 * tau<double>()));
  EXPECT_EQ(project_P0(kFree, PElement(Covector4d(-0.5, 1, 2, 3))), SpatialCovectord(1, 2, 3));
  const SpatialCovectord p0(0.5, -1, 2);
  EXPECT_EQ(project_P0(kFree, lift_P0(kFree, p0, 4.0)), p0);
  const NewtonModel model = random_model(rng);
  const Framed u = rng.frame();
  const SpatialCovectord expected =
      project_P0(model, p) - model.mass() * iota_star(sigma(model.metric(), u, kRef));
  EXPECT_LE(mixed_relative_error(project_P0(model, p, u), expected), 1e-12);
}

TEST(InhomogeneousMembership, Examples) {
  const InhomogeneousTangent rest{Eventd(), SpatialCovectord::Zero(), kRef, SpatialCovectord::Zero()};
  EXPECT_TRUE(inhomogeneous_dynamics_membership(kFree, rest, 1e-12));
  InhomogeneousTangent kicked = rest;
  kicked.p0_dot = SpatialCovectord(1, 0, 0);
  EXPECT_FALSE(inhomogeneous_dynamics_membership(kFree, kicked, 1e-12));
}

TEST(InhomogeneousMembership, IntegratedOscillator) {
  const NewtonModel osc(1.0, SpatialMetricd(), Potential::harmonic(1.0, Spatiald::Zero()));
  const Trajectory tr = integrate(osc, kRef, {Eventd(0, 1, 0, 0), {0, 0.3, 0}}, 1e-2, 100);
  for (const auto& s : tr.samples) {
    const PhaseVelocity f = vector_field_inhom(osc, kRef, s.state);
    EXPECT_TRUE(inhomogeneous_dynamics_membership(
        osc, {s.state.x, s.state.p, Framed(f.x_dot), f.p_dot}, 1e-12));
  }
}

TEST(AffineSection, ReproducesKineticEnergy) {
  const double m = 2.0;
  const NewtonModel model(m, SpatialMetricd(), Potential::free());
  const AffineMetric h(m, SpatialMetricd(), Framed::from_velocity(Spatiald(0.5, 0, 0)),
                       SpatialCovectord::Zero());
  const AffineSection s = section_from_affine_metric(model, h);
  const Framed b = Framed::from_velocity(Spatiald(1.5, 2, -1));
  const Spatiald d = b.velocity() - h.base().velocity();
  EXPECT_DOUBLE_EQ(s(b), 0.5 * m * d.squaredNorm());
  EXPECT_EQ(s(h.base()), 0.0);

  const AffineSection legendre = section_from_affine_metric(model, legendre_affine_metric(model));
  EXPECT_DOUBLE_EQ(legendre(b), lagrangian_inhom(model, kRef, Eventd(), b));
}

TEST(AffineSection, DerivativeAtAnchorIsMetricValue) {
  harness::Sampler rng(20);
  const AffineMetric h(1.3, rng.spd_metric(), rng.frame(), rng.spatial_covector(1.0));
  const Framed a = rng.frame();
  const AffineSection s = section_from_affine_metric(kFree, h, a);
  for (int k = 0; k < 3; ++k) {
    const double step = 1e-6;
    Spatiald plus = a.velocity(), minus = a.velocity();
    plus(k) += step;
    minus(k) -= step;
    const double fd = (s(Framed::from_velocity(plus)) - s(Framed::from_velocity(minus))) / (2 * step);
    EXPECT_NEAR(fd, h(a)(k), 1e-8);
  }
}
