#include "galimech/generating_objects.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "galimech/number_format.hpp"

namespace galimech {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr int kMaxBacktracks = 40;
// Central differences of values resolve the gradient only to about this
// fraction of |F|.
constexpr double kNumericGradientFloor = 1e-9;

VectorXd concat(const VectorXd& a, const VectorXd& b) {
  VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

FunctionFamily::FunctionFamily(int base_dim, int fiber_dim, Value value,
                               std::optional<Gradient> gradient)
    : base_dim_(base_dim),
      fiber_dim_(fiber_dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)) {
  if (base_dim < 0 || fiber_dim < 0) {
    throw InvalidArgument("family dimensions must be non-negative");
  }
}

double FunctionFamily::operator()(const VectorXd& base,
                                  const VectorXd& fiber) const {
  return value_(base, fiber);
}

VectorXd FunctionFamily::numeric_gradient(const VectorXd& base,
                                          const VectorXd& fiber) const {
  VectorXd z = concat(base, fiber);
  VectorXd g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(z(i)));
    VectorXd zp = z;
    VectorXd zm = z;
    zp(i) += h;
    zm(i) -= h;
    const double fp = value_(zp.head(base_dim_), zp.tail(fiber_dim_));
    const double fm = value_(zm.head(base_dim_), zm.tail(fiber_dim_));
    g(i) = (fp - fm) / (zp(i) - zm(i));
  }
  return g;
}

VectorXd FunctionFamily::gradient(const VectorXd& base,
                                  const VectorXd& fiber) const {
  if (gradient_) return (*gradient_)(base, fiber);
  return numeric_gradient(base, fiber);
}

VectorXd fiber_gradient(const FunctionFamily& fam, const VectorXd& base,
                        const VectorXd& fiber) {
  return fam.gradient(base, fiber).tail(fam.fiber_dim());
}

double critical_tolerance(const FunctionFamily& fam, const VectorXd& base,
                          const VectorXd& fiber, double tol) {
  if (fam.has_analytic_gradient()) return tol;
  return std::max(tol, kNumericGradientFloor * (1.0 + std::abs(fam(base, fiber))));
}

namespace {

/// Fiber rows of the Hessian against the columns listed in `columns`
/// (indices into the concatenated (base, fiber) vector).
MatrixXd hessian_columns(const FunctionFamily& fam, const VectorXd& base,
                         const VectorXd& fiber,
                         const std::vector<Eigen::Index>& columns) {
  const int b = fam.base_dim();
  const int f = fam.fiber_dim();
  const VectorXd z = concat(base, fiber);
  MatrixXd h(f, static_cast<Eigen::Index>(columns.size()));
  auto split_eval = [&](const VectorXd& w) {
    return fam(w.head(b), w.tail(f));
  };
  if (fam.has_analytic_gradient()) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Eigen::Index j = columns[c];
      const double step = 1e-5 * (1.0 + std::abs(z(j)));
      VectorXd zp = z;
      VectorXd zm = z;
      zp(j) += step;
      zm(j) -= step;
      const VectorXd gp = fam.gradient(zp.head(b), zp.tail(f));
      const VectorXd gm = fam.gradient(zm.head(b), zm.tail(f));
      h.col(static_cast<Eigen::Index>(c)) =
          (gp.tail(f) - gm.tail(f)) / (zp(j) - zm(j));
    }
    return h;
  }
  for (int i = 0; i < f; ++i) {
    const Eigen::Index zi = b + i;
    const double hi = 1e-4 * (1.0 + std::abs(z(zi)));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Eigen::Index j = columns[c];
      const double hj = 1e-4 * (1.0 + std::abs(z(j)));
      auto shifted = [&](double si, double sj) {
        VectorXd w = z;
        w(zi) += si * hi;
        w(j) += sj * hj;
        return split_eval(w);
      };
      h(i, static_cast<Eigen::Index>(c)) =
          (shifted(1, 1) - shifted(1, -1) - shifted(-1, 1) + shifted(-1, -1)) /
          (4.0 * hi * hj);
    }
  }
  return h;
}

MatrixXd fiber_block(const FunctionFamily& fam, const VectorXd& base,
                     const VectorXd& fiber) {
  std::vector<Eigen::Index> cols;
  for (int i = 0; i < fam.fiber_dim(); ++i) cols.push_back(fam.base_dim() + i);
  return hessian_columns(fam, base, fiber, cols);
}

struct NewtonOutcome {
  bool converged = false;
  VectorXd fiber;
  double norm = 0.0;
  std::string reason;
};

NewtonOutcome damped_newton(const FunctionFamily& fam, const VectorXd& base,
                            VectorXd s, double tol) {
  NewtonOutcome out;
  VectorXd g = fiber_gradient(fam, base, s);
  double norm = g.norm();
  if (!std::isfinite(norm)) {
    out.reason = "fiber gradient not finite at seed";
    return out;
  }
  auto done = [&] { return norm <= critical_tolerance(fam, base, s, tol); };
  for (int iter = 0; iter < kMaxNewtonIterations && !done(); ++iter) {
    const MatrixXd j = fiber_block(fam, base, s);
    if (!j.allFinite() || j.cwiseAbs().maxCoeff() == 0.0) {
      out.reason = j.allFinite() ? "fiber Hessian vanishes" : "fiber Hessian not finite";
      out.fiber = s;
      out.norm = norm;
      return out;
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(j);
    cod.setThreshold(kDefaultRankTolerance);
    const VectorXd step = -cod.solve(g);
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      const VectorXd trial = s + alpha * step;
      const VectorXd gt = fiber_gradient(fam, base, trial);
      const double nt = gt.norm();
      if (std::isfinite(nt) && nt < norm) {
        s = trial;
        g = gt;
        norm = nt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.reason = "line search failed to reduce the fiber gradient";
      out.fiber = s;
      out.norm = norm;
      return out;
    }
  }
  out.fiber = s;
  out.norm = norm;
  out.converged = done();
  if (!out.converged) out.reason = "iteration limit reached";
  return out;
}

}  // namespace

CriticalSolveResult solve_critical(const FunctionFamily& fam,
                                   const VectorXd& base,
                                   const std::vector<VectorXd>& seeds,
                                   double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (base.size() != fam.base_dim()) {
    throw InvalidArgument("base point has wrong dimension");
  }
  CriticalSolveResult result;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].size() != fam.fiber_dim()) {
      throw InvalidArgument("seed has wrong dimension");
    }
    NewtonOutcome o = damped_newton(fam, base, seeds[i], tol);
    if (!o.converged) {
      result.failures.push_back({i, "NoConvergence: " + o.reason});
      continue;
    }
    const bool duplicate = std::any_of(
        result.points.begin(), result.points.end(), [&](const CriticalPoint& p) {
          return (p.fiber - o.fiber).norm() <= 10.0 * tol;
        });
    if (!duplicate) result.points.push_back({base, o.fiber, o.norm});
  }
  return result;
}

MatrixXd hessian(const FunctionFamily& fam, const CriticalPoint& point) {
  std::vector<Eigen::Index> cols;
  for (int i = 0; i < fam.base_dim() + fam.fiber_dim(); ++i) cols.push_back(i);
  return hessian_columns(fam, point.base, point.fiber, cols);
}

int numerical_rank(const MatrixXd& m, double tol_rank) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol_rank * sv(0)) ++rank;
  }
  return rank;
}

MorseReport is_morse(const FunctionFamily& fam,
                     const std::vector<CriticalPoint>& sample,
                     double tol_rank) {
  if (sample.empty()) throw InvalidArgument("critical point sample is empty");
  MorseReport report;
  report.expected_rank = fam.fiber_dim();
  report.morse = true;
  for (const auto& pt : sample) {
    const int r = numerical_rank(hessian(fam, pt), tol_rank);
    report.ranks.push_back(r);
    if (r != fam.fiber_dim()) report.morse = false;
  }
  return report;
}

GeneratedCovector kappa(const FunctionFamily& fam, const CriticalPoint& point,
                        double tol) {
  const VectorXd g = fam.gradient(point.base, point.fiber);
  const double fnorm = g.tail(fam.fiber_dim()).norm();
  if (!(fnorm <= critical_tolerance(fam, point.base, point.fiber, tol))) {
    throw NotCritical("point is not critical: fiber gradient norm " +
                      std::to_string(fnorm));
  }
  return {point.base, g.head(fam.base_dim()), point};
}

std::vector<GeneratedCovector> generate(
    const FunctionFamily& fam, const std::vector<VectorXd>& base_sample,
    const std::vector<VectorXd>& seeds, double tol, double tol_rank) {
  std::vector<GeneratedCovector> out;
  for (const auto& base : base_sample) {
    const CriticalSolveResult crit = solve_critical(fam, base, seeds, tol);
    if (crit.points.empty()) continue;
    const MorseReport rep = is_morse(fam, crit.points, tol_rank);
    if (!rep.morse) {
      throw NotMorse("Hessian rank is not maximal at a critical point");
    }
    for (const auto& pt : crit.points) out.push_back(kappa(fam, pt, tol));
  }
  return out;
}

namespace {

struct Reduction {
  FunctionFamily fam;
  std::vector<int> eliminate;
  std::vector<int> keep;
  std::vector<VectorXd> seeds;
  double tol;

  VectorXd assemble(const VectorXd& kept, const VectorXd& elim) const {
    VectorXd fiber(fam.fiber_dim());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      fiber(keep[i]) = kept(static_cast<Eigen::Index>(i));
    }
    for (std::size_t i = 0; i < eliminate.size(); ++i) {
      fiber(eliminate[i]) = elim(static_cast<Eigen::Index>(i));
    }
    return fiber;
  }

  /// The eliminated block as a family over (base, kept).
  FunctionFamily sub_family() const {
    const int b = fam.base_dim();
    const int k = static_cast<int>(keep.size());
    const int e = static_cast<int>(eliminate.size());
    auto self = *this;
    FunctionFamily::Value value = [self, b, k](const VectorXd& bk,
                                               const VectorXd& elim) {
      return self.fam(bk.head(b), self.assemble(bk.tail(k), elim));
    };
    std::optional<FunctionFamily::Gradient> grad;
    if (fam.has_analytic_gradient()) {
      grad = [self, b, k, e](const VectorXd& bk, const VectorXd& elim) {
        const VectorXd full =
            self.fam.gradient(bk.head(b), self.assemble(bk.tail(k), elim));
        VectorXd out(b + k + e);
        out.head(b) = full.head(b);
        for (int i = 0; i < k; ++i) out(b + i) = full(b + self.keep[i]);
        for (int i = 0; i < e; ++i) out(b + k + i) = full(b + self.eliminate[i]);
        return out;
      };
    }
    return FunctionFamily(b + k, e, std::move(value), std::move(grad));
  }

  VectorXd section(const VectorXd& base, const VectorXd& kept) const {
    if (eliminate.empty()) return VectorXd(0);
    const FunctionFamily sub = sub_family();
    const CriticalSolveResult r = solve_critical(sub, concat(base, kept), seeds, tol);
    if (r.points.empty()) {
      throw NotCritical("no stationary point of the eliminated block");
    }
    if (r.points.size() > 1) {
      throw SectionNotUnique(
          "seeds converge to distinct stationary points of the eliminated "
          "block");
    }
    return r.points.front().fiber;
  }
};

Reduction make_reduction(const FunctionFamily& fam,
                         const std::vector<int>& eliminate,
                         const std::vector<VectorXd>& seeds, double tol) {
  std::vector<bool> mark(static_cast<std::size_t>(fam.fiber_dim()), false);
  for (int i : eliminate) {
    if (i < 0 || i >= fam.fiber_dim() || mark[static_cast<std::size_t>(i)]) {
      throw InvalidArgument("invalid elimination index");
    }
    mark[static_cast<std::size_t>(i)] = true;
  }
  std::vector<int> keep;
  for (int i = 0; i < fam.fiber_dim(); ++i) {
    if (!mark[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  if (!eliminate.empty() && seeds.empty()) {
    throw InvalidArgument("reduction needs at least one seed");
  }
  for (const auto& s : seeds) {
    if (s.size() != static_cast<Eigen::Index>(eliminate.size())) {
      throw InvalidArgument("seed has wrong dimension");
    }
  }
  return Reduction{fam, eliminate, keep, seeds, tol};
}

}  // namespace

VectorXd reduction_section(const FunctionFamily& fam,
                           const std::vector<int>& eliminate,
                           const std::vector<VectorXd>& seeds, double tol,
                           const VectorXd& base, const VectorXd& kept) {
  return make_reduction(fam, eliminate, seeds, tol).section(base, kept);
}

FunctionFamily reduce_family(const FunctionFamily& fam,
                             const std::vector<int>& eliminate,
                             const std::vector<VectorXd>& seeds, double tol) {
  if (eliminate.empty()) return fam;
  const Reduction red = make_reduction(fam, eliminate, seeds, tol);
  const int b = fam.base_dim();
  const int k = static_cast<int>(red.keep.size());
  FunctionFamily::Value value = [red](const VectorXd& base,
                                      const VectorXd& kept) {
    return red.fam(base, red.assemble(kept, red.section(base, kept)));
  };
  // The eliminated fiber gradient vanishes on the section, so the reduced
  // differential is the original one restricted to the surviving directions.
  FunctionFamily::Gradient gradient = [red, b, k](const VectorXd& base,
                                                  const VectorXd& kept) {
    const VectorXd full =
        red.fam.gradient(base, red.assemble(kept, red.section(base, kept)));
    VectorXd out(b + k);
    out.head(b) = full.head(b);
    for (int i = 0; i < k; ++i) out(b + i) = full(b + red.keep[i]);
    return out;
  };
  return FunctionFamily(b, k, std::move(value), std::move(gradient));
}

void write_generated_csv(std::ostream& out,
                         const std::vector<GeneratedCovector>& covectors) {
  if (covectors.empty()) return;
  const Eigen::Index b = covectors.front().base.size();
  const Eigen::Index c = covectors.front().covector.size();
  for (Eigen::Index i = 0; i < b; ++i) out << (i ? "," : "") << 'b' << i;
  for (Eigen::Index i = 0; i < c; ++i) out << ",k" << i;
  out << '\n';
  for (const auto& gc : covectors) {
    for (Eigen::Index i = 0; i < b; ++i) {
      out << (i ? "," : "") << format_double(gc.base(i));
    }
    for (Eigen::Index i = 0; i < c; ++i) out << ',' << format_double(gc.covector(i));
    out << '\n';
  }
}

// Concrete families ---------------------------------------------------------

VectorXd pack_event_covector(const Eventd& x, const Covector4d& p) {
  VectorXd out(8);
  out << x.coords, p.transpose();
  return out;
}

Eventd unpack_event(const VectorXd& base) {
  return Eventd(Vector4d(base.head<4>()));
}

Covector4d unpack_covector(const VectorXd& base) {
  return base.segment<4>(4).transpose();
}

FunctionFamily family_fam1(const NewtonModel& model, const Framed& u) {
  FunctionFamily::Value value = [model, u](const VectorXd& base,
                                           const VectorXd& fiber) {
    const Vector4d v = fiber.head<4>();
    if (!(v(0) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const Eventd x = unpack_event(base);
    return lagrangian_hom(model, u, x, v) - pair(unpack_covector(base), v);
  };
  FunctionFamily::Gradient gradient = [model, u](const VectorXd& base,
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
    g.tail<4>() = (legendre_hom(model, u, x, v) - unpack_covector(base)).transpose();
    return g;
  };
  return FunctionFamily(8, 4, std::move(value), std::move(gradient));
}

FunctionFamily family_fam2(const NewtonModel& model, const Framed& u) {
  FunctionFamily::Value value = [model, u](const VectorXd& base,
                                           const VectorXd& fiber) {
    return -fiber(0) * mass_shell_residual(model, u, unpack_event(base),
                                           unpack_covector(base));
  };
  FunctionFamily::Gradient gradient = [model, u](const VectorXd& base,
                                                 const VectorXd& fiber) {
    const double r = fiber(0);
    const Eventd x = unpack_event(base);
    const Covector4d p = unpack_covector(base);
    VectorXd g(9);
    g.head<4>() = (-r * model.potential().gradient(x)).transpose();
    g.segment<4>(4) =
        -r * (g_prime(model.metric(), p) / model.mass() + u.vector());
    g(8) = -mass_shell_residual(model, u, x, p);
    return g;
  };
  return FunctionFamily(8, 1, std::move(value), std::move(gradient));
}

std::vector<int> fam1_spatial_fiber() { return {1, 2, 3}; }

FunctionFamily family_tangent_example(double mass, double k) {
  FunctionFamily::Value value = [mass, k](const VectorXd& base,
                                          const VectorXd& v) {
    const auto q = base.head<3>();
    const auto p = base.tail<3>();
    return 0.5 * mass * v.squaredNorm() - 0.5 * k * q.squaredNorm() - p.dot(v);
  };
  FunctionFamily::Gradient gradient = [mass, k](const VectorXd& base,
                                                const VectorXd& v) {
    VectorXd g(9);
    g.head<3>() = -k * base.head<3>();
    g.segment<3>(3) = -v;
    g.tail<3>() = mass * v - base.tail<3>();
    return g;
  };
  return FunctionFamily(6, 3, std::move(value), std::move(gradient));
}

}  // namespace galimech
