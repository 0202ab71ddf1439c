// Acceptance gate: one line per criterion, each at its pinned tolerance.
//
//   acceptance PATH_TO_GALIMECH
//
// Exit status is the number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "galimech/harness/checks.hpp"
#include "galimech/harness/config.hpp"

namespace gh = galimech::harness;

namespace {

struct Requirement {
  std::string check;
  double tol;
  long min_n;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Requirement> requirements;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

gh::ScenarioConfig acceptance_config() {
  gh::ScenarioConfig c;
  c.mass = 1.3;
  c.metric << 2.0, 0.3, 0.0,
              0.3, 1.0, 0.1,
              0.0, 0.1, 1.5;
  c.potential.kind = gh::PotentialKind::kHarmonic;
  c.potential.k = 1.2;
  c.frames = {{0, 0, 0}, {1, 0, 0}, {-0.5, 2, 0}, {0.3, -0.7, 1.1}, {3, 1, -2}};
  c.initial_event << 0.0, 1.0, 0.0, 0.0;
  c.initial_velocity << 0.2, 0.5, 0.0;
  gh::validate(c);
  return c;
}

bool determinism(const std::string& binary, std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "galimech_acceptance";
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << gh::serialize_config(acceptance_config());
  const std::string cfg = (dir / "config.json").string();
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"simulate --frame 2", "csv"},
      {"boost-check", "json"},
      {"invariants --suite all", "json"},
      {"morse-check --family fam4", "json"}};
  bool same = true;
  int index = 0;
  for (const auto& [args, ext] : runs) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / ("run" + std::to_string(index) + "_" + std::to_string(k) + "." + ext);
      const std::string cmd = binary + " " + args + " --config " + cfg + " --seed 7 --out " +
                              out.string() + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        detail = "command failed: " + args;
        return false;
      }
      outputs[k] = slurp(out);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) {
      same = false;
      detail = "outputs differ for " + args;
    }
    ++index;
  }
  fs::remove_all(dir);
  if (same) detail = std::to_string(runs.size()) + " commands byte-identical";
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH_TO_GALIMECH\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  const gh::ScenarioConfig config = acceptance_config();

  gh::Report all = gh::run_invariants(config, gh::Suite::kAll);
  all.append(gh::morse_check(config, gh::FamilyName::kExample31));
  std::map<std::string, gh::CheckResult> by_name;
  for (const auto& c : all.checks()) by_name.emplace(c.name, c);

  const std::vector<Criterion> criteria = {
      {1, "sigma antisymmetry and cocycle over random frame triples",
       {{"sigma_antisymmetry", 1e-12, 1000}, {"sigma_cocycle", 1e-12, 1000}}},
      {2, "lagrangian difference equals m<sigma, v>", {{"lagrangian_difference", 1e-10, 1000}}},
      {3, "Legendre maps match fiber differences; tangent example has rank 3",
       {{"legendre_inhom_fd", 1e-6, 500},
        {"legendre_hom_fd", 1e-6, 500},
        {"example31_hessian_rank", 0.0, 100}}},
      {4, "Legendre image lies on the mass shell", {{"mass_shell_projection", 1e-10, 1500}}},
      {5, "boost preserves the shell, the symplectic form and the dynamics",
       {{"boost_shell_preservation", 1e-12, 100},
        {"boost_symplectic_pullback", 1e-10, 100},
        {"boost_dynamics_equivariance", 10 * std::pow(1e-3, 4), 200}}},
      {6, "world-lines agree across 5 frames; momentum offset constant",
       {{"worldline_free", 1e-9, 40000},
        {"worldline_harmonic", 1e-7, 40000},
        {"momentum_offset", 1e-9, 80000}}},
      {7, "energy drift over 1e4 RK4 steps", {{"energy_conservation", 1e-8, 10000}}},
      {8, "fam1 reduced equals fam2; H vanishes on the critical set",
       {{"fam1_fam2_generated_equivalence", 1e-8, 25},
        {"hamiltonian_zero_on_reduced_critical_set", 1e-10, 25}}},
      {9, "chart independence, W axioms, f_w1 = 1",
       {{"chart_independence", 1e-10, 1000},
        {"dynamics_membership_chart_independence", 0.0, 2000},
        {"w_vector_space_axioms", 1e-12, 1000},
        {"f_w1_identically_one", 0.0, 100}}},
      {10, "gamma = alpha o beta^-1", {{"gamma_equals_alpha_beta_inverse", 0.0, 100}}},
      {11, "affine-metric section derivative and uniqueness up to a constant",
       {{"affine_section_derivative", 1e-6, 200},
        {"affine_section_unique_up_to_constant", 1e-10, 200}}},
  };

  int failed = 0;
  for (const auto& crit : criteria) {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& req : crit.requirements) {
      const auto it = by_name.find(req.check);
      if (it == by_name.end()) {
        ok = false;
        detail << " " << req.check << "=missing";
        continue;
      }
      const gh::CheckResult& c = it->second;
      const bool pass = c.passed && c.max_err <= req.tol && c.n >= req.min_n;
      ok = ok && pass;
      detail << " " << req.check << "=" << c.max_err << "/" << req.tol << "(n=" << c.n << ")";
    }
    if (!ok) ++failed;
    std::printf("[%s] %2d %s:%s\n", ok ? "PASS" : "FAIL", crit.id, crit.title.c_str(),
                detail.str().c_str());
  }

  std::string det;
  const bool deterministic = determinism(argv[1], det);
  if (!deterministic) ++failed;
  std::printf("[%s] 12 same config and seed give byte-identical CSV and JSON: %s\n",
              deterministic ? "PASS" : "FAIL", det.c_str());

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 12 criteria failed (%.1f s)\n", failed, seconds);
  return failed;
}
