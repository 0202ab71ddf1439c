#pragma once

// Families of functions over product fibrations R^b x R^f -> R^b and the
// machinery that turns a Morse family into a sampled lagrangian submanifold
// of T*R^b: critical sets, Hessians, rank certification, the kappa map and
// elimination of fiber variables through a section.

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "galimech/frame_dynamics.hpp"

namespace galimech {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class FunctionFamily {
 public:
  using Value = std::function<double(const VectorXd& base, const VectorXd& fiber)>;
  /// Full gradient, base components first then fiber components.
  using Gradient =
      std::function<VectorXd(const VectorXd& base, const VectorXd& fiber)>;

  FunctionFamily(int base_dim, int fiber_dim, Value value,
                 std::optional<Gradient> gradient = std::nullopt);

  int base_dim() const { return base_dim_; }
  int fiber_dim() const { return fiber_dim_; }
  bool has_analytic_gradient() const { return gradient_.has_value(); }

  double operator()(const VectorXd& base, const VectorXd& fiber) const;
  /// Analytic when available, central differences otherwise.
  VectorXd gradient(const VectorXd& base, const VectorXd& fiber) const;
  VectorXd numeric_gradient(const VectorXd& base, const VectorXd& fiber) const;

 private:
  int base_dim_;
  int fiber_dim_;
  Value value_;
  std::optional<Gradient> gradient_;
};

struct CriticalPoint {
  VectorXd base;
  VectorXd fiber;
  double fiber_gradient_norm = 0.0;
};

struct GeneratedCovector {
  VectorXd base;
  VectorXd covector;
  CriticalPoint source;
};

struct SeedFailure {
  std::size_t seed_index = 0;
  std::string reason;
};

struct CriticalSolveResult {
  std::vector<CriticalPoint> points;
  /// NoConvergence reports; not fatal.
  std::vector<SeedFailure> failures;
};

struct MorseReport {
  bool morse = false;
  std::vector<int> ranks;
  int expected_rank = 0;
};

/// Numerical rank threshold relative to the largest singular value.
inline constexpr double kDefaultRankTolerance = 1e-8;

/// Threshold on the fiber-gradient norm used by solve_critical and kappa.
double critical_tolerance(const FunctionFamily& fam, const VectorXd& base,
                          const VectorXd& fiber, double tol);

VectorXd fiber_gradient(const FunctionFamily& fam, const VectorXd& base,
                        const VectorXd& fiber);

/// Damped Newton on the fiber gradient from each seed. Solutions closer
/// than 10 tol are merged.
///
/// Families without an analytic gradient converge once the fiber gradient
/// is below max(tol, 1e-9 (1 + |F|)), the resolution of their differences;
/// kappa uses the same threshold.
CriticalSolveResult solve_critical(const FunctionFamily& fam,
                                   const VectorXd& base,
                                   const std::vector<VectorXd>& seeds,
                                   double tol);

/// Mixed second derivatives, fiber rows against (base, fiber) columns.
MatrixXd hessian(const FunctionFamily& fam, const CriticalPoint& point);

int numerical_rank(const MatrixXd& m, double tol_rank = kDefaultRankTolerance);

MorseReport is_morse(const FunctionFamily& fam,
                     const std::vector<CriticalPoint>& sample,
                     double tol_rank = kDefaultRankTolerance);

/// Base part of dF at a critical point. Throws NotCritical when the fiber
/// gradient exceeds tol.
GeneratedCovector kappa(const FunctionFamily& fam, const CriticalPoint& point,
                        double tol);

/// kappa image of every critical point found over the base sample. Throws
/// NotMorse if a discovered point has deficient Hessian rank.
std::vector<GeneratedCovector> generate(
    const FunctionFamily& fam, const std::vector<VectorXd>& base_sample,
    const std::vector<VectorXd>& seeds, double tol,
    double tol_rank = kDefaultRankTolerance);

/// Eliminates the listed fiber coordinates by solving their stationarity
/// equations. The result is a family over the same base whose fiber is the
/// remaining coordinates in their original order. Each evaluation solves
/// from every seed and throws SectionNotUnique if they disagree, NotCritical
/// if none converges.
FunctionFamily reduce_family(const FunctionFamily& fam,
                             const std::vector<int>& eliminate,
                             const std::vector<VectorXd>& seeds, double tol);

/// Solution of the eliminated block at a point of the reduced family.
VectorXd reduction_section(const FunctionFamily& fam,
                           const std::vector<int>& eliminate,
                           const std::vector<VectorXd>& seeds, double tol,
                           const VectorXd& base, const VectorXd& kept);

/// Rows `base...,covector...` with a header naming b0..,k0...
void write_generated_csv(std::ostream& out,
                         const std::vector<GeneratedCovector>& covectors);

// Concrete families ---------------------------------------------------------

/// Packs (x, p) in N x V* as an 8-vector.
VectorXd pack_event_covector(const Eventd& x, const Covector4d& p);
Eventd unpack_event(const VectorXd& base);
Covector4d unpack_covector(const VectorXd& base);

/// -H_{h,u}(x,p,v) = l_{h,u}(x,v) - <p,v> over base (x,p), fiber v in V+.
/// Outside V+ the value is NaN.
FunctionFamily family_fam1(const NewtonModel& model, const Framed& u);

/// -r (mass shell residual) over base (x,p), fiber r.
FunctionFamily family_fam2(const NewtonModel& model, const Framed& u);

/// Fiber indices of fam1 that hold E0 directions of v.
std::vector<int> fam1_spatial_fiber();

/// L(v) - <p,v> over base (q, p) in T*Q, Q = R^3, fiber v, with
/// L = (m/2)|v|^2 - (k/2)|q|^2.
FunctionFamily family_tangent_example(double mass, double k);

}  // namespace galimech
