#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "galimech/frame_dynamics.hpp"

namespace galimech::harness {

/// Validation or parse failure; `field` names the offending entry and
/// `line` is set for syntax errors (0 otherwise).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

enum class PotentialKind { kFree, kUniform, kHarmonic, kCustom };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::kFree;
  Spatiald force = Spatiald::Zero();
  double k = 1.0;
  Spatiald center = Spatiald::Zero();
  std::string expression;

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

struct Tolerances {
  double sigma = 1e-12;
  double lagrangian_difference = 1e-10;
  double legendre_fd = 1e-6;
  double mass_shell = 1e-10;
  double boost_residual = 1e-12;
  double symplectic = 1e-10;
  double worldline_free = 1e-9;
  double worldline_dynamic = 1e-7;
  double momentum_offset = 1e-9;
  double energy_drift = 1e-8;
  double shell_tangency = 1e-8;
  double generated_equivalence = 1e-8;
  double hamiltonian_zero = 1e-10;
  double chart_independence = 1e-10;
  double section_fd = 1e-6;
  double section_constant = 1e-10;
  double solver = 1e-12;
  double rank = 1e-8;
  /// Membership of boosted trajectory states is checked at factor * h^4.
  double membership_factor = 10.0;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct ScenarioConfig {
  double mass = 1.0;
  Matrix3d metric = Matrix3d::Identity();
  PotentialSpec potential;
  std::vector<Spatiald> frames = {Spatiald::Zero(), Spatiald(1.0, 0.0, 0.0)};
  Vector4d initial_event = Vector4d::Zero();
  Spatiald initial_velocity = Spatiald(1.0, 0.0, 0.0);
  double step = 0.1;
  long steps = 10;
  std::uint64_t seed = 42;
  Tolerances tolerances;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

/// Throws ConfigError naming the field.
void validate(const ScenarioConfig& config);

Potential make_potential(const PotentialSpec& spec);
NewtonModel make_model(const ScenarioConfig& config);
Framed frame_at(const ScenarioConfig& config, std::size_t index);

}  // namespace galimech::harness
