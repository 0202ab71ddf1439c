#pragma once

// The verification commands behind the CLI. Every function is deterministic
// for a given config (including its seed).

#include <optional>
#include <string>

#include "galimech/harness/config.hpp"
#include "galimech/harness/report.hpp"

namespace galimech::harness {

/// Trajectory CSV for the configured scenario integrated in frame `frame`.
/// Throws NonFiniteState from the integrator.
std::string simulate_csv(const ScenarioConfig& config, std::size_t frame);

struct BoostCheckOptions {
  /// Negative control: scales sigma by (1 + 1e-3) wherever it is used.
  bool corrupt_sigma = false;
};

/// Needs at least two frames (ConfigError otherwise).
Report boost_check(const ScenarioConfig& config,
                   const BoostCheckOptions& options = {});

enum class FamilyName { kFam1, kFam2, kFam3, kFam4, kExample31 };
std::optional<FamilyName> parse_family(const std::string& name);

Report morse_check(const ScenarioConfig& config, FamilyName family);

enum class Suite { kCore, kDynamics, kAffine, kAll };
std::optional<Suite> parse_suite(const std::string& name);

Report run_invariants(const ScenarioConfig& config, Suite suite);

}  // namespace galimech::harness
