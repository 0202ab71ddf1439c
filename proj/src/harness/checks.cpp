#include "galimech/harness/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "galimech/affine_phase.hpp"
#include "galimech/generating_objects.hpp"
#include "galimech/harness/io.hpp"
#include "galimech/harness/sampling.hpp"
#include "galimech/number_format.hpp"

namespace galimech::harness {

namespace {

constexpr long kRandomSamples = 1000;
constexpr long kFdSamples = 500;
constexpr long kLongRunSteps = 10000;
constexpr double kLongRunStep = 1e-3;

using Sigma = std::function<Covector4d(const Framed&, const Framed&)>;

Sigma exact_sigma(const NewtonModel& model) {
  return [&model](const Framed& a, const Framed& b) {
    return sigma(model.metric(), a, b);
  };
}

NewtonModel with_potential(const NewtonModel& model, Potential potential) {
  return NewtonModel(model.mass(), model.metric(), std::move(potential));
}

std::vector<Framed> config_frames(const ScenarioConfig& config) {
  std::vector<Framed> frames;
  for (std::size_t i = 0; i < config.frames.size(); ++i) {
    frames.push_back(frame_at(config, i));
  }
  return frames;
}

// World-lines ---------------------------------------------------------------

struct WorldlineResult {
  double worldline_err = 0.0;
  double offset_err = 0.0;
  long n = 0;
};

/// Integrates the same physical initial condition in every frame and
/// compares against the first one.
WorldlineResult compare_worldlines(const NewtonModel& model,
                                   const std::vector<Framed>& frames,
                                   const Eventd& x0, const Framed& w0, double h,
                                   long steps, const Sigma& sig) {
  WorldlineResult out;
  const Framed& u0 = frames.front();
  const Trajectory ref =
      integrate(model, u0, {x0, legendre_inhom(model, u0, w0)}, h, steps);
  for (std::size_t j = 1; j < frames.size(); ++j) {
    const Framed& uj = frames[j];
    const Trajectory tj =
        integrate(model, uj, {x0, legendre_inhom(model, uj, w0)}, h, steps);
    const SpatialCovectord offset = model.mass() * iota_star(sig(u0, uj));
    for (std::size_t k = 0; k < ref.samples.size(); ++k) {
      const auto& a = ref.samples[k].state;
      const auto& b = tj.samples[k].state;
      out.worldline_err =
          std::max(out.worldline_err, mixed_relative_error(b.x.coords, a.x.coords));
      out.offset_err = std::max(
          out.offset_err, mixed_relative_error(SpatialCovectord(b.p - a.p), offset));
      ++out.n;
    }
  }
  return out;
}

// Core suite ----------------------------------------------------------------

void core_suite(const ScenarioConfig& config, Report& report) {
  Sampler rng(config.seed);
  const Tolerances& tol = config.tolerances;

  double anti = 0.0;
  double cocycle = 0.0;
  for (long i = 0; i < kRandomSamples; ++i) {
    const SpatialMetricd g = rng.spd_metric();
    const Framed u = rng.frame();
    const Framed u1 = rng.frame();
    const Framed u2 = rng.frame();
    anti = std::max(anti, mixed_relative_error(sigma(g, u1, u),
                                               Covector4d(-sigma(g, u, u1))));
    cocycle = std::max(
        cocycle, mixed_relative_error(Covector4d(sigma(g, u2, u1) + sigma(g, u1, u)),
                                      sigma(g, u2, u)));
  }
  report.add("sigma_antisymmetry", anti, tol.sigma, kRandomSamples);
  report.add("sigma_cocycle", cocycle, tol.sigma, kRandomSamples);

  double lla = 0.0;
  const Potential potential = make_potential(config.potential);
  for (long i = 0; i < kRandomSamples; ++i) {
    const NewtonModel model(rng.uniform(0.5, 3.0), rng.spd_metric(), potential);
    const Framed u = rng.frame();
    const Framed u1 = rng.frame();
    const Vector4d v = rng.future_vector();
    const Eventd x = rng.event();
    const double lhs = lagrangian_hom(model, u, x, v) - lagrangian_hom(model, u1, x, v);
    const double rhs = model.mass() * pair(sigma(model.metric(), u1, u), v);
    const double scale = std::max({1.0, std::abs(lagrangian_hom(model, u, x, v)),
                                   std::abs(lagrangian_hom(model, u1, x, v))});
    lla = std::max(lla, std::abs(lhs - rhs) / scale);
  }
  report.add("lagrangian_difference", lla, tol.lagrangian_difference,
             kRandomSamples);

  double kernel = 0.0;
  double inverse = 0.0;
  double idem = 0.0;
  double roundtrip = 0.0;
  for (long i = 0; i < 100; ++i) {
    const SpatialMetricd g = rng.spd_metric();
    kernel = std::max(kernel, g_prime(g, tau<double>()).cwiseAbs().maxCoeff());
    const SpatialCovectord a = rng.spatial_covector(2.0);
    const Vector4d gp = g_prime(g, Covector4d(0.0, a(0), a(1), a(2)));
    inverse = std::max(inverse, mixed_relative_error(g.lower(gp.tail<3>()), a));
    const Framed u = rng.frame();
    const Vector4d e0 = iota(rng.spatial(2.0));
    idem = std::max(idem, mixed_relative_error(iota_u(u, e0), e0));
    idem = std::max(idem, iota_u(u, u.vector()).cwiseAbs().maxCoeff());
    const Vector4d v = rng.future_vector();
    const Covector4d p = rng.covector(2.0);
    roundtrip = std::max(roundtrip, mixed_relative_error(unsplit(u, split(u, v)), v));
    roundtrip =
        std::max(roundtrip, mixed_relative_error(uncosplit(u, cosplit(u, p)), p));
  }
  report.add_status("g_prime_kernel_tau", kernel == 0.0, kernel, 0.0, 100,
                    "exact");
  report.add("g_prime_inverts_metric", inverse, tol.sigma, 100);
  report.add("iota_u_idempotent_on_E0", idem, tol.sigma, 100);
  report.add("split_roundtrip", roundtrip, tol.sigma, 100);
}

// Dynamics suite --------------------------------------------------------------

std::vector<Potential> sample_potentials(const ScenarioConfig& config) {
  return {make_potential(config.potential), Potential::harmonic(1.5, Spatiald(0.1, -0.2, 0.3)),
          Potential::uniform(SpatialCovectord(0.3, -1.0, 0.5))};
}

double legendre_inhom_fd_error(const NewtonModel& model, const Framed& u,
                               const Eventd& x, const Framed& w) {
  const SpatialCovectord analytic = legendre_inhom(model, u, w);
  SpatialCovectord fd;
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(w.velocity()(i)));
    Spatiald wp = w.velocity();
    Spatiald wm = w.velocity();
    wp(i) += h;
    wm(i) -= h;
    fd(i) = (lagrangian_inhom(model, u, x, Framed::from_velocity(wp)) -
             lagrangian_inhom(model, u, x, Framed::from_velocity(wm))) /
            (wp(i) - wm(i));
  }
  return mixed_relative_error(fd, analytic);
}

double legendre_hom_fd_error(const NewtonModel& model, const Framed& u,
                             const Eventd& x, const Vector4d& v) {
  const Covector4d analytic = legendre_hom(model, u, x, v);
  Covector4d fd;
  for (int i = 0; i < 4; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(v(i)));
    Vector4d vp = v;
    Vector4d vm = v;
    vp(i) += h;
    vm(i) -= h;
    fd(i) = (lagrangian_hom(model, u, x, vp) - lagrangian_hom(model, u, x, vm)) /
            (vp(i) - vm(i));
  }
  return mixed_relative_error(fd, analytic);
}

/// Generated covectors of fam1 reduced over the E0 directions of v against
/// fam2, on a grid of on-shell base points.
void fam1_fam2_equivalence(const NewtonModel& model, const Framed& u,
                           const Tolerances& tol, Report& report) {
  std::vector<VectorXd> grid;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const Eventd x(0.1 * i, 0.5 * i - 1.0, 0.25 * j, 0.3);
      const SpatialCovectord ps(0.4 * j - 0.8, 0.2 * i - 0.4, 0.5);
      grid.push_back(pack_event_covector(x, lift_to_shell(model, u, {x, ps}).p));
    }
  }
  const FunctionFamily fam1 = family_fam1(model, u);
  const std::vector<VectorXd> v_seed = {VectorXd::Zero(3)};
  const FunctionFamily reduced =
      reduce_family(fam1, fam1_spatial_fiber(), v_seed, tol.solver);
  const FunctionFamily fam2 = family_fam2(model, u);
  const std::vector<VectorXd> r_seed = {VectorXd::Constant(1, 1.0)};

  const auto from_reduced = generate(reduced, grid, r_seed, tol.solver, tol.rank);
  const auto from_fam2 = generate(fam2, grid, r_seed, tol.solver, tol.rank);
  double err = 0.0;
  if (from_reduced.size() != grid.size() || from_fam2.size() != grid.size()) {
    err = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      err = std::max(err, mixed_relative_error(from_reduced[i].covector,
                                               from_fam2[i].covector));
    }
  }
  report.add("fam1_fam2_generated_equivalence", err, tol.generated_equivalence,
             static_cast<long>(grid.size()));

  // H_{h,u} on the critical set of the reduced family.
  double hzero = 0.0;
  for (const auto& gc : from_reduced) {
    const VectorXd vs = reduction_section(fam1, fam1_spatial_fiber(), v_seed,
                                          tol.solver, gc.base, gc.source.fiber);
    VectorXd v(4);
    v << gc.source.fiber(0), vs;
    hzero = std::max(hzero, std::abs(fam1(gc.base, v)));
  }
  report.add("hamiltonian_zero_on_reduced_critical_set", hzero,
             tol.hamiltonian_zero, static_cast<long>(from_reduced.size()));
}

void dynamics_suite(const ScenarioConfig& config, Report& report) {
  Sampler rng(config.seed + 1);
  const Tolerances& tol = config.tolerances;
  const NewtonModel base = make_model(config);
  const std::vector<Potential> potentials = sample_potentials(config);

  double li = 0.0;
  double lh = 0.0;
  for (long i = 0; i < kFdSamples; ++i) {
    const NewtonModel model = with_potential(base, potentials[i % potentials.size()]);
    const Framed u = rng.frame();
    const Eventd x = rng.event();
    li = std::max(li, legendre_inhom_fd_error(model, u, x, rng.frame()));
    lh = std::max(lh, legendre_hom_fd_error(model, u, x, rng.future_vector()));
  }
  report.add("legendre_inhom_fd", li, tol.legendre_fd, kFdSamples);
  report.add("legendre_hom_fd", lh, tol.legendre_fd, kFdSamples);

  double shell = 0.0;
  double tangency = 0.0;
  long shell_n = 0;
  for (const auto& pot : potentials) {
    const NewtonModel model = with_potential(base, pot);
    for (long i = 0; i < kFdSamples; ++i) {
      const Framed u = rng.frame();
      const Eventd x = rng.event();
      const Vector4d v = rng.future_vector();
      const Covector4d p = legendre_hom(model, u, x, v);
      shell = std::max(shell, std::abs(mass_shell_residual(model, u, x, p)));
      ++shell_n;
      // d/ds of the residual along the homogeneous dynamics.
      const Covector4d p_dot = -v(0) * model.potential().gradient(x);
      const double s = 1e-5;
      const double plus =
          mass_shell_residual(model, u, x + s * v, Covector4d(p + s * p_dot));
      const double minus =
          mass_shell_residual(model, u, x + (-s) * v, Covector4d(p - s * p_dot));
      tangency = std::max(tangency, std::abs(plus - minus) / (2.0 * s));
    }
  }
  report.add("mass_shell_projection", shell, tol.mass_shell, shell_n);
  report.add("mass_shell_tangency", tangency, tol.shell_tangency, shell_n);

  // Energy conservation in the rest frame of a static harmonic potential.
  {
    const NewtonModel model =
        with_potential(base, Potential::harmonic(1.0, Spatiald::Zero()));
    const Framed u;
    const Trajectory traj = integrate(model, u, {Eventd(0, 1, 0, 0), SpatialCovectord::Zero()},
                                      kLongRunStep, kLongRunSteps);
    const double h0 = hamiltonian_inhom(model, u, traj.samples.front().state.x,
                                        traj.samples.front().state.p);
    double drift = 0.0;
    for (const auto& s : traj.samples) {
      drift = std::max(drift, std::abs(hamiltonian_inhom(model, u, s.state.x, s.state.p) - h0));
    }
    report.add("energy_conservation", drift, tol.energy_drift, kLongRunSteps);
  }

  // World-line covariance over the configured frames.
  if (config.frames.size() >= 2) {
    const std::vector<Framed> frames = config_frames(config);
    const Framed w0 = Framed::from_velocity(config.initial_velocity);
    const Eventd x0(config.initial_event);
    const NewtonModel free_model = with_potential(base, Potential::free());
    const WorldlineResult fr = compare_worldlines(
        free_model, frames, x0, w0, kLongRunStep, kLongRunSteps, exact_sigma(base));
    report.add("worldline_free", fr.worldline_err, tol.worldline_free, fr.n);
    const NewtonModel harm =
        with_potential(base, Potential::harmonic(1.0, Spatiald::Zero()));
    const WorldlineResult hr = compare_worldlines(
        harm, frames, x0, w0, kLongRunStep, kLongRunSteps, exact_sigma(base));
    report.add("worldline_harmonic", hr.worldline_err, tol.worldline_dynamic, hr.n,
               "RK4 global error C*h^4 with h=" + format_double(kLongRunStep));
    report.add("momentum_offset", std::max(fr.offset_err, hr.offset_err),
               tol.momentum_offset, fr.n + hr.n);
  }

  // Boost: shell preservation, symplecticity, equivariance of dynamics.
  {
    double pres = 0.0;
    double sympl = 0.0;
    for (long i = 0; i < 100; ++i) {
      const NewtonModel model(rng.uniform(0.5, 3.0), rng.spd_metric(),
                              potentials[i % potentials.size()]);
      const Framed u = rng.frame();
      const Framed u1 = rng.frame();
      const Eventd x = rng.event();
      const PhasePoint4 on_shell{x, legendre_hom(model, u1, x, rng.future_vector())};
      const PhasePoint4 boosted = boost(model, u1, u, on_shell);
      const double scale = 1.0 + on_shell.p.squaredNorm() / model.mass();
      pres = std::max(pres, std::abs(mass_shell_residual(model, u, x, boosted.p) -
                                     mass_shell_residual(model, u1, x, on_shell.p)) /
                                scale);
      // Central-difference Jacobian of the boost on T*N = R^8.
      Eigen::Matrix<double, 8, 8> jac;
      for (int c = 0; c < 8; ++c) {
        const double h = 1e-3;
        PhasePoint4 zp = on_shell;
        PhasePoint4 zm = on_shell;
        if (c < 4) {
          zp.x.coords(c) += h;
          zm.x.coords(c) -= h;
        } else {
          zp.p(c - 4) += h;
          zm.p(c - 4) -= h;
        }
        const PhasePoint4 bp = boost(model, u1, u, zp);
        const PhasePoint4 bm = boost(model, u1, u, zm);
        Eigen::Matrix<double, 8, 1> d;
        d << bp.x.coords - bm.x.coords, (bp.p - bm.p).transpose();
        jac.col(c) = d / (2.0 * h);
      }
      Eigen::Matrix<double, 8, 8> omega = Eigen::Matrix<double, 8, 8>::Zero();
      omega.block<4, 4>(0, 4) = -Eigen::Matrix4d::Identity();
      omega.block<4, 4>(4, 0) = Eigen::Matrix4d::Identity();
      Eigen::Matrix<double, 8, 1> a;
      Eigen::Matrix<double, 8, 1> b;
      for (int k = 0; k < 8; ++k) {
        a(k) = rng.uniform(-1.0, 1.0);
        b(k) = rng.uniform(-1.0, 1.0);
      }
      const double before = a.dot(omega * b);
      const double after = (jac * a).dot(omega * (jac * b));
      sympl = std::max(sympl, mixed_relative_error(after, before));
    }
    report.add("boost_shell_preservation", pres, tol.boost_residual, 100);
    report.add("boost_symplectic_pullback", sympl, tol.symplectic, 100);
  }
  {
    const double h = kLongRunStep;
    const double member_tol = tol.membership_factor * std::pow(h, 4);
    const NewtonModel model =
        with_potential(base, Potential::harmonic(1.0, Spatiald(0.2, 0.0, -0.1)));
    const Framed u_src = config.frames.size() >= 2 ? frame_at(config, 1) : Framed();
    const Framed u_dst = frame_at(config, 0);
    const Framed w0 = Framed::from_velocity(config.initial_velocity);
    const Eventd x0(config.initial_event);
    const Trajectory traj = integrate(
        model, u_src, {x0, legendre_inhom(model, u_src, w0)}, h, 200);
    long failures = 0;
    double worst = 0.0;
    for (const auto& s : traj.samples) {
      const PhasePoint4 lifted = lift_to_shell(model, u_src, s.state);
      const PhaseVelocity f = vector_field_inhom(model, u_src, s.state);
      HomogeneousTangent t{s.state.x, lifted.p, f.x_dot,
                           -f.x_dot(0) * model.potential().gradient(s.state.x)};
      t.p = boost(model, u_src, u_dst, lifted).p;
      if (!in_homogeneous_dynamics(model, u_dst, t, member_tol)) ++failures;
      worst = std::max(worst, mixed_relative_error(
                                  t.p, legendre_hom(model, u_dst, t.x, t.x_dot)));
    }
    report.add_status("boost_dynamics_equivariance", failures == 0, worst,
                      member_tol, static_cast<long>(traj.samples.size()),
                      "tolerance " + format_double(tol.membership_factor) + "*h^4");
  }

  fam1_fam2_equivalence(base, frame_at(config, 0), tol, report);
}

// Affine suite --------------------------------------------------------------

void affine_suite(const ScenarioConfig& config, Report& report) {
  Sampler rng(config.seed + 2);
  const Tolerances& tol = config.tolerances;
  const NewtonModel model = make_model(config);
  const double m = model.mass();

  double chart = 0.0;
  long membership_mismatch = 0;
  for (long i = 0; i < kRandomSamples; ++i) {
    const Framed u = rng.frame();
    const Eventd x = rng.event();
    const Vector4d v = rng.future_vector();
    const WElement w(rng.future_vector(), rng.uniform(-2.0, 2.0));
    const PElement p(rng.covector(2.0));
    const WRepresentative wu = w.in_chart(model, u);
    const PRepresentative pu = p.in_chart(model, u);

    const double f_ref = eval_affine(model, w, p);
    chart = std::max(chart, mixed_relative_error(pair(pu.p, wu.v) - wu.r, f_ref));
    chart = std::max(chart, mixed_relative_error(
                                eval_affine(model, WElement::from_chart(model, wu),
                                            PElement::from_chart(model, pu)),
                                f_ref));
    const WElement pr = pairing(model, p, v);
    const WElement pr_u = WElement::from_chart(model, u, v, pair(pu.p, v));
    chart = std::max(chart, mixed_relative_error(pr_u.r(), pr.r()));
    chart = std::max(chart, mixed_relative_error(psi_m(model, x, pu), psi_m(model, x, p)));
    const WElement lh = affine_lagrangian(model, x, v);
    chart = std::max(chart,
                     mixed_relative_error(affine_lagrangian(model, u, x, v).r(), lh.r()));
    chart = std::max(chart,
                     mixed_relative_error(pair(pu.p, v) - lagrangian_hom(model, u, x, v),
                                          hamiltonian_fun(model, x, v, p)));
    // Membership: an on-shell element written in chart u, and an off-shell one.
    const PElement on = PElement::from_chart(model, u, legendre_hom(model, u, x, v));
    const Covector4d a = -v(0) * model.potential().gradient(x);
    if (!dynamics_membership_universal(model, {x, on, v, a}, tol.chart_independence)) {
      ++membership_mismatch;
    }
    if (dynamics_membership_universal(model, {x, on + 1e-3 * tau<double>(), v, a},
                                      tol.chart_independence)) {
      ++membership_mismatch;
    }
  }
  report.add("chart_independence", chart, tol.chart_independence, kRandomSamples);
  report.add_status("dynamics_membership_chart_independence", membership_mismatch == 0,
                    static_cast<double>(membership_mismatch), 0.0, 2 * kRandomSamples);

  double axioms = 0.0;
  double mixed = 0.0;
  for (long i = 0; i < kRandomSamples; ++i) {
    const WElement a(rng.future_vector(), rng.uniform(-2, 2));
    const WElement b(iota(rng.spatial(2.0)), rng.uniform(-2, 2));
    const WElement c(rng.future_vector(), rng.uniform(-2, 2));
    const double l = rng.uniform(-3, 3);
    const double k = rng.uniform(-3, 3);
    auto gap = [](const WElement& x, const WElement& y) {
      return std::max(mixed_relative_error(x.v(), y.v()), mixed_relative_error(x.r(), y.r()));
    };
    const auto add = [&](const WElement& x, const WElement& y) { return w_add(model, x, y); };
    const auto scale = [&](double s, const WElement& x) { return w_scale(model, s, x); };
    axioms = std::max({axioms, gap(add(a, b), add(b, a)),
                       gap(add(add(a, b), c), add(a, add(b, c))),
                       gap(add(a, WElement::zero()), a),
                       gap(add(a, scale(-1.0, a)), WElement::zero()),
                       gap(scale(l, add(a, b)), add(scale(l, a), scale(l, b))),
                       gap(scale(l + k, a), add(scale(l, a), scale(k, a))),
                       gap(scale(l, scale(k, a)), scale(l * k, a)),
                       gap(scale(1.0, a), a)});
    axioms = std::max(axioms, mixed_relative_error(zeta(add(a, b)), Vector4d(zeta(a) + zeta(b))));
    const WRepresentative ra = a.in_chart(model, rng.frame());
    const WRepresentative rb = b.in_chart(model, rng.frame());
    mixed = std::max(mixed, gap(WElement::from_chart(model, w_add_representatives(model, ra, rb)),
                                add(a, b)));
  }
  report.add("w_vector_space_axioms", axioms, tol.sigma, kRandomSamples);
  report.add("w_mixed_chart_sum", mixed, tol.chart_independence, kRandomSamples);

  // Duality between W and affine functions on P.
  {
    double one = 0.0;
    double lin = 0.0;
    for (long i = 0; i < 100; ++i) {
      const PElement p(rng.covector(5.0));
      one = std::max(one, std::abs(eval_affine(model, WElement::one(), p) - 1.0));
      const WElement a(rng.future_vector(), rng.uniform(-2, 2));
      const WElement b(rng.future_vector(), rng.uniform(-2, 2));
      const double l = rng.uniform(-3, 3);
      lin = std::max(lin, mixed_relative_error(
                              eval_affine(model, w_add(model, a, w_scale(model, l, b)), p),
                              eval_affine(model, a, p) + l * eval_affine(model, b, p)));
    }
    report.add_status("f_w1_identically_one", one == 0.0, one, 0.0, 100, "exact");
    report.add("f_w_linear_in_w", lin, tol.sigma, 100);
    Eigen::Matrix<double, 5, 5> eval;
    std::vector<WElement> ws;
    std::vector<PElement> ps;
    for (int k = 0; k < 4; ++k) ws.emplace_back(rng.future_vector(), rng.uniform(-2, 2));
    ws.push_back(WElement::one());
    for (int k = 0; k < 5; ++k) ps.emplace_back(rng.covector(2.0));
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) eval(r, c) = eval_affine(model, ws[r], ps[c]);
    }
    const int rank = numerical_rank(eval, tol.rank);
    report.add_status("duality_evaluation_rank", rank == 5, 5.0 - rank, 0.0, 25);
  }

  // Class formation against the boost, and the universal mass shell.
  {
    double boost_err = 0.0;
    double km = 0.0;
    double p0cov = 0.0;
    for (long i = 0; i < kRandomSamples; ++i) {
      const Framed u = rng.frame();
      const Framed u1 = rng.frame();
      const Eventd x = rng.event();
      const Covector4d pu1 = rng.covector(3.0);
      const PhasePoint4 b = boost(model, u1, u, {x, pu1});
      boost_err = std::max(boost_err,
                           mixed_relative_error(PElement::from_chart(model, u, b.p).p(),
                                                PElement::from_chart(model, u1, pu1).p()));
      const PElement cls = PElement::from_chart(model, u, pu1);
      km = std::max(km, mixed_relative_error(universal_hamiltonian_residual(model, x, cls),
                                             mass_shell_residual(model, u, x, pu1)));
      const SpatialCovectord expected =
          project_P0(model, cls) - m * iota_star(sigma(model.metric(), u, model.reference_frame()));
      p0cov = std::max(p0cov, mixed_relative_error(project_P0(model, cls, u), expected));
    }
    report.add("boost_matches_class_formation", boost_err, tol.sigma, kRandomSamples);
    report.add("universal_mass_shell_consistency", km, tol.chart_independence, kRandomSamples);
    report.add("P0_chart_covariance", p0cov, tol.sigma, kRandomSamples);
  }

  // Stationarity of H_h over v reproduces the shell.
  {
    double res = 0.0;
    for (long i = 0; i < 100; ++i) {
      const Fam4Stationary st =
          fam4_stationary(model, rng.event(), rng.spatial_covector(2.0), tol.solver);
      res = std::max({res, std::abs(st.shell_residual), st.stationarity_norm});
    }
    report.add("fam4_stationarity_reproduces_shell", res, tol.shell_tangency, 100);
  }

  // Tulczyjew triple.
  {
    long mismatches = 0;
    for (long i = 0; i < 100; ++i) {
      const CotangentPhase c{rng.event(), PElement(rng.covector(2.0)), rng.covector(2.0),
                             rng.future_vector()};
      const AffineCovector lhs = gamma(c);
      const AffineCovector rhs = alpha(beta_inverse(c));
      if (!(lhs.x == rhs.x && lhs.v == rhs.v && lhs.a == rhs.a && lhs.p == rhs.p)) {
        ++mismatches;
      }
      const TangentPhase t = beta_inverse(c);
      const CotangentPhase back = beta(t);
      if (!(back.a == c.a && back.b == c.b && back.p == c.p)) ++mismatches;
    }
    report.add_status("gamma_equals_alpha_beta_inverse", mismatches == 0,
                      static_cast<double>(mismatches), 0.0, 100, "exact");
  }

  // Inhomogeneous membership along an integrated trajectory, in two charts.
  {
    const NewtonModel harm(m, model.metric(), Potential::harmonic(1.0, Spatiald::Zero()));
    const Framed u_ref = harm.reference_frame();
    const Trajectory traj = integrate(harm, u_ref, {Eventd(0, 1, 0, 0), SpatialCovectord(0, 0.5, 0)},
                                      1e-2, 200);
    const Framed other = config.frames.size() >= 2 ? frame_at(config, 1) : rng.frame();
    long failures = 0;
    for (const auto& s : traj.samples) {
      const PhaseVelocity f = vector_field_inhom(harm, u_ref, s.state);
      const InhomogeneousTangent t{s.state.x, s.state.p, Framed(f.x_dot), f.p_dot};
      if (!inhomogeneous_dynamics_membership(harm, t, tol.chart_independence)) ++failures;
      const PElement cls = lift_P0(harm, s.state.p, 0.0);
      const InhomogeneousTangent t2{s.state.x, project_P0(harm, cls, other), Framed(f.x_dot),
                                    f.p_dot};
      if (!inhomogeneous_dynamics_membership(harm, other, t2, tol.chart_independence)) {
        ++failures;
      }
    }
    report.add_status("inhomogeneous_membership", failures == 0, static_cast<double>(failures),
                      0.0, 2 * static_cast<long>(traj.samples.size()));
  }

  // Primitive of an affine metric.
  {
    const AffineMetric h(m, model.metric(), rng.frame(), rng.spatial_covector(2.0));
    const AffineSection s1 = section_from_affine_metric(model, h);
    const AffineSection s2 = section_from_affine_metric(model, h, rng.frame());
    double fd = 0.0;
    std::vector<double> diffs;
    for (long i = 0; i < 200; ++i) {
      const Framed b = rng.frame();
      SpatialCovectord d;
      for (int k = 0; k < 3; ++k) {
        const double step = 1e-5 * (1.0 + std::abs(b.velocity()(k)));
        Spatiald bp = b.velocity();
        Spatiald bm = b.velocity();
        bp(k) += step;
        bm(k) -= step;
        d(k) = (s1(Framed::from_velocity(bp)) - s1(Framed::from_velocity(bm))) / (bp(k) - bm(k));
      }
      fd = std::max(fd, mixed_relative_error(d, h(b)));
      diffs.push_back(s1(b) - s2(b));
    }
    const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / diffs.size();
    double var = 0.0;
    for (double d : diffs) var += (d - mean) * (d - mean);
    const double stddev = std::sqrt(var / diffs.size());
    report.add("affine_section_derivative", fd, tol.section_fd, 200);
    report.add("affine_section_unique_up_to_constant", stddev, tol.section_constant, 200);
  }
}

}  // namespace

std::string simulate_csv(const ScenarioConfig& config, std::size_t frame) {
  const NewtonModel model = make_model(config);
  const Framed u = frame_at(config, frame);
  const Framed w0 = Framed::from_velocity(config.initial_velocity);
  const PhasePoint initial{Eventd(config.initial_event), legendre_inhom(model, u, w0)};
  log(LogLevel::kInfo, "integrating " + std::to_string(config.steps) + " steps in frame " +
                           std::to_string(frame));
  const Trajectory traj = integrate(model, u, initial, config.step, config.steps);
  std::ostringstream out;
  write_trajectory_csv(out, model, traj);
  return out.str();
}

Report boost_check(const ScenarioConfig& config, const BoostCheckOptions& options) {
  if (config.frames.size() < 2) {
    throw ConfigError("frames", "boost-check needs at least two frames");
  }
  const NewtonModel model = make_model(config);
  const Tolerances& tol = config.tolerances;
  const double factor = options.corrupt_sigma ? 1.0 + 1e-3 : 1.0;
  const Sigma sig = [&model, factor](const Framed& a, const Framed& b) {
    return Covector4d(factor * sigma(model.metric(), a, b));
  };
  const std::vector<Framed> frames = config_frames(config);
  const Framed w0 = Framed::from_velocity(config.initial_velocity);
  const Eventd x0(config.initial_event);

  Report report;
  const WorldlineResult wl =
      compare_worldlines(model, frames, x0, w0, config.step, config.steps, sig);
  const bool is_free = config.potential.kind == PotentialKind::kFree;
  if (is_free) {
    report.add("worldline_identity", wl.worldline_err, tol.worldline_free, wl.n);
  } else {
    report.add("worldline_identity", wl.worldline_err, tol.worldline_dynamic, wl.n,
               "integrator-order bound: RK4 global error C*h^4, h=" +
                   format_double(config.step));
  }
  report.add("momentum_offset_constant", wl.offset_err, tol.momentum_offset, wl.n);

  // Lift the first frame's trajectory to its mass shell and boost into every
  // other frame.
  const Framed& u0 = frames.front();
  const Trajectory ref =
      integrate(model, u0, {x0, legendre_inhom(model, u0, w0)}, config.step, config.steps);
  std::vector<Trajectory> others;
  for (std::size_t j = 1; j < frames.size(); ++j) {
    others.push_back(integrate(model, frames[j], {x0, legendre_inhom(model, frames[j], w0)},
                               config.step, config.steps));
  }
  double residual_err = 0.0;
  double match_err = 0.0;
  long n = 0;
  for (std::size_t k = 0; k < ref.samples.size(); ++k) {
    const PhasePoint4 lifted = lift_to_shell(model, u0, ref.samples[k].state);
    const double r0 = mass_shell_residual(model, u0, lifted.x, lifted.p);
    for (std::size_t j = 1; j < frames.size(); ++j) {
      const Covector4d pj = lifted.p + model.mass() * sig(u0, frames[j]);
      const double rj = mass_shell_residual(model, frames[j], lifted.x, pj);
      const double scale = 1.0 + lifted.p.squaredNorm() / model.mass();
      residual_err = std::max(residual_err, std::abs(rj - r0) / scale);
      match_err = std::max(match_err, mixed_relative_error(iota_star(pj),
                                                           others[j - 1].samples[k].state.p));
      ++n;
    }
  }
  report.add("boosted_shell_residual_preserved", residual_err, tol.boost_residual, n);
  report.add("boosted_momentum_matches_frame", match_err, tol.momentum_offset, n);
  return report;
}

std::optional<FamilyName> parse_family(const std::string& name) {
  if (name == "fam1") return FamilyName::kFam1;
  if (name == "fam2") return FamilyName::kFam2;
  if (name == "fam3") return FamilyName::kFam3;
  if (name == "fam4") return FamilyName::kFam4;
  if (name == "example31") return FamilyName::kExample31;
  return std::nullopt;
}

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "core") return Suite::kCore;
  if (name == "dynamics") return Suite::kDynamics;
  if (name == "affine") return Suite::kAffine;
  if (name == "all") return Suite::kAll;
  return std::nullopt;
}

namespace {

void rank_check(Report& report, const std::string& name, const FunctionFamily& fam,
                const std::vector<CriticalPoint>& points, double tol_rank) {
  if (points.empty()) {
    report.add_status(name, false, 0.0, 0.0, 0, "no critical points found");
    return;
  }
  const MorseReport mr = is_morse(fam, points, tol_rank);
  int worst = 0;
  for (int r : mr.ranks) worst = std::max(worst, std::abs(r - mr.expected_rank));
  report.add_status(name, mr.morse, worst, 0.0, static_cast<long>(points.size()),
                    "expected rank " + std::to_string(mr.expected_rank));
}

std::vector<VectorXd> on_shell_grid(const NewtonModel& model, const Framed& u,
                                    Sampler& rng, int n) {
  std::vector<VectorXd> out;
  for (int i = 0; i < n; ++i) {
    const Eventd x = rng.event();
    out.push_back(pack_event_covector(
        x, lift_to_shell(model, u, {x, rng.spatial_covector(2.0)}).p));
  }
  return out;
}

}  // namespace

Report morse_check(const ScenarioConfig& config, FamilyName family) {
  const NewtonModel model = make_model(config);
  const Tolerances& tol = config.tolerances;
  Sampler rng(config.seed + 3);
  Report report;
  const Framed u = frame_at(config, 0);

  switch (family) {
    case FamilyName::kExample31: {
      const double k =
          config.potential.kind == PotentialKind::kHarmonic ? config.potential.k : 1.0;
      const FunctionFamily fam = family_tangent_example(model.mass(), k);
      std::vector<CriticalPoint> points;
      double crit_err = 0.0;
      for (int i = 0; i < 100; ++i) {
        VectorXd base(6);
        base << rng.spatial(2.0), rng.spatial(2.0);
        const auto sol = solve_critical(fam, base, {VectorXd::Zero(3)}, tol.solver);
        for (const auto& p : sol.points) {
          points.push_back(p);
          crit_err = std::max(crit_err,
                              mixed_relative_error(p.fiber, VectorXd(base.tail(3) / model.mass())));
        }
      }
      rank_check(report, "example31_hessian_rank", fam, points, tol.rank);
      report.add("example31_critical_set_is_legendre_graph", crit_err,
                 tol.generated_equivalence, static_cast<long>(points.size()));
      break;
    }
    case FamilyName::kFam1: {
      const FunctionFamily fam = family_fam1(model, u);
      std::vector<CriticalPoint> points;
      for (const auto& base : on_shell_grid(model, u, rng, 25)) {
        VectorXd seed(4);
        seed << 1.0, u.velocity();
        const auto sol = solve_critical(fam, base, {seed}, tol.solver);
        points.insert(points.end(), sol.points.begin(), sol.points.end());
      }
      rank_check(report, "fam1_hessian_rank", fam, points, tol.rank);
      fam1_fam2_equivalence(model, u, tol, report);
      break;
    }
    case FamilyName::kFam2: {
      const FunctionFamily fam = family_fam2(model, u);
      std::vector<CriticalPoint> points;
      double image = 0.0;
      long off_shell_found = 0;
      for (const auto& base : on_shell_grid(model, u, rng, 25)) {
        const auto sol = solve_critical(fam, base, {VectorXd::Constant(1, 1.0)}, tol.solver);
        for (const auto& p : sol.points) {
          points.push_back(p);
          image = std::max(image, std::abs(mass_shell_residual(
                                      model, u, unpack_event(p.base), unpack_covector(p.base))));
        }
        VectorXd off = base;
        off(4) += 0.1;
        off_shell_found += static_cast<long>(
            solve_critical(fam, off, {VectorXd::Constant(1, 1.0)}, tol.solver).points.size());
      }
      rank_check(report, "fam2_hessian_rank", fam, points, tol.rank);
      report.add("fam2_critical_image_is_mass_shell", image, tol.mass_shell,
                 static_cast<long>(points.size()));
      report.add_status("fam2_no_critical_points_off_shell", off_shell_found == 0,
                        static_cast<double>(off_shell_found), 0.0, 25);
      break;
    }
    case FamilyName::kFam3: {
      const FunctionFamily fam3 = family_fam3(model);
      std::vector<CriticalPoint> points;
      double chart = 0.0;
      double cross = 0.0;
      const std::vector<VectorXd> seed = {VectorXd::Constant(1, 1.0)};
      for (int i = 0; i < 20; ++i) {
        const Framed ui = rng.frame();
        const Eventd x = rng.event();
        const PhasePoint4 on = lift_to_shell(model, ui, {x, rng.spatial_covector(2.0)});
        const PElement cls = PElement::from_chart(model, ui, on.p);
        const double canonical = universal_hamiltonian_residual(model, x, cls);
        for (int c = 0; c < 20; ++c) {
          const PRepresentative rep = cls.in_chart(model, rng.frame());
          chart = std::max(chart, std::abs(psi_m(model, x, rep) + model.potential()(x) - canonical));
        }
        const auto g3 = generate(fam3, {pack_event_covector(x, cls.p())}, seed, tol.solver, tol.rank);
        const auto g2 = generate(family_fam2(model, ui), {pack_event_covector(x, on.p)}, seed,
                                 tol.solver, tol.rank);
        if (g3.size() != 1 || g2.size() != 1) {
          cross = std::numeric_limits<double>::infinity();
        } else {
          cross = std::max(cross, mixed_relative_error(g3[0].covector, g2[0].covector));
          points.push_back(g3[0].source);
        }
      }
      rank_check(report, "fam3_hessian_rank", fam3, points, tol.rank);
      report.add("fam3_chart_independence", chart, tol.chart_independence, 400);
      report.add("fam3_matches_fam2_in_any_frame", cross, tol.generated_equivalence, 20);
      break;
    }
    case FamilyName::kFam4: {
      const FunctionFamily fam4 = family_fam4(model);
      const FunctionFamily fam3 = family_fam3(model);
      const Framed& uref = model.reference_frame();
      std::vector<CriticalPoint> points;
      const auto grid = on_shell_grid(model, uref, rng, 25);
      for (const auto& base : grid) {
        VectorXd seed(4);
        seed << 1.0, 0.0, 0.0, 0.0;
        const auto sol = solve_critical(fam4, base, {seed}, tol.solver);
        points.insert(points.end(), sol.points.begin(), sol.points.end());
      }
      rank_check(report, "fam4_hessian_rank", fam4, points, tol.rank);
      const FunctionFamily reduced =
          reduce_family(fam4, fam1_spatial_fiber(), {VectorXd::Zero(3)}, tol.solver);
      const std::vector<VectorXd> seed = {VectorXd::Constant(1, 1.0)};
      const auto g4 = generate(reduced, grid, seed, tol.solver, tol.rank);
      const auto g3 = generate(fam3, grid, seed, tol.solver, tol.rank);
      double err = 0.0;
      if (g4.size() != g3.size() || g4.size() != grid.size()) {
        err = std::numeric_limits<double>::infinity();
      } else {
        for (std::size_t i = 0; i < g4.size(); ++i) {
          err = std::max(err, mixed_relative_error(g4[i].covector, g3[i].covector));
        }
      }
      report.add("fam4_reduces_to_fam3", err, tol.generated_equivalence,
                 static_cast<long>(grid.size()));
      double stat = 0.0;
      for (int i = 0; i < 25; ++i) {
        const Fam4Stationary st =
            fam4_stationary(model, rng.event(), rng.spatial_covector(2.0), tol.solver);
        stat = std::max({stat, std::abs(st.shell_residual), st.stationarity_norm});
      }
      report.add("fam4_stationarity_reproduces_shell", stat, tol.shell_tangency, 25);
      break;
    }
  }
  return report;
}

Report run_invariants(const ScenarioConfig& config, Suite suite) {
  Report report;
  if (suite == Suite::kCore || suite == Suite::kAll) core_suite(config, report);
  if (suite == Suite::kDynamics || suite == Suite::kAll) dynamics_suite(config, report);
  if (suite == Suite::kAffine || suite == Suite::kAll) affine_suite(config, report);
  return report;
}

}  // namespace galimech::harness
