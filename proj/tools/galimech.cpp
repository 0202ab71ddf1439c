// galimech: command-line front end for the Galilean mechanics checks.
//
//   galimech simulate     --config PATH [--frame N] [--out PATH]
//   galimech boost-check  --config PATH [--out PATH] [--corrupt-sigma]
//   galimech morse-check  --family NAME [--config PATH] [--out PATH]
//   galimech invariants   --suite NAME [--config PATH] [--out PATH] [--seed N]
//
// Exit status: 0 success, 1 a check failed, 2 bad configuration or
// arguments, 3 non-finite state during integration, 4 other errors.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "galimech/errors.hpp"
#include "galimech/harness/checks.hpp"
#include "galimech/harness/config.hpp"
#include "galimech/harness/io.hpp"

namespace gh = galimech::harness;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonFinite = 3;
constexpr int kExitOther = 4;

struct Options {
  std::string config_path;
  std::string out_path;
  std::size_t frame = 0;
  std::string family;
  std::string suite;
  std::optional<std::uint64_t> seed;
  bool corrupt_sigma = false;
};

gh::ScenarioConfig load(const Options& opts) {
  gh::ScenarioConfig config =
      opts.config_path.empty() ? gh::ScenarioConfig{} : gh::load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

void emit(const Options& opts, const std::string& content) {
  if (opts.out_path.empty()) {
    std::cout << content;
  } else {
    gh::write_file_atomic(opts.out_path, content);
    gh::log(gh::LogLevel::kInfo, "wrote " + opts.out_path);
  }
}

int emit_report(const Options& opts, const gh::Report& report) {
  emit(opts, report.to_json() + "\n");
  gh::log(gh::LogLevel::kInfo, report.to_text());
  if (!report.passed()) {
    for (const auto& c : report.checks()) {
      if (!c.passed) gh::log(gh::LogLevel::kWarn, "check failed: " + c.name);
    }
    return kExitCheckFailed;
  }
  return 0;
}

int run(const std::string& command, const Options& opts) {
  if (command == "simulate") {
    const gh::ScenarioConfig config = load(opts);
    if (opts.frame >= config.frames.size()) {
      throw gh::ConfigError("frame", "index " + std::to_string(opts.frame) +
                                         " out of range");
    }
    emit(opts, gh::simulate_csv(config, opts.frame));
    return 0;
  }
  if (command == "boost-check") {
    return emit_report(opts, gh::boost_check(load(opts), {opts.corrupt_sigma}));
  }
  if (command == "morse-check") {
    const auto family = gh::parse_family(opts.family);
    if (!family) throw gh::ConfigError("family", "unknown family '" + opts.family + "'");
    return emit_report(opts, gh::morse_check(load(opts), *family));
  }
  const auto suite = gh::parse_suite(opts.suite);
  if (!suite) throw gh::ConfigError("suite", "unknown suite '" + opts.suite + "'");
  return emit_report(opts, gh::run_invariants(load(opts), *suite));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galilean mechanics: simulation and geometric checks"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "scenario JSON");
    sub->add_option("--out", opts.out_path, "output file (stdout when omitted)");
    sub->add_option("--seed", opts.seed, "overrides the config seed");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a trajectory, write CSV");
  add_common(simulate);
  simulate->add_option("--frame", opts.frame, "index into the config frames");
  CLI::App* boost = app.add_subcommand("boost-check", "compare trajectories across frames");
  add_common(boost);
  boost->add_flag("--corrupt-sigma", opts.corrupt_sigma,
                  "perturb the frame-change covector (negative control)");
  CLI::App* morse = app.add_subcommand("morse-check", "certify a generating family");
  add_common(morse);
  morse->add_option("--family", opts.family, "fam1|fam2|fam3|fam4|example31")->required();
  CLI::App* invariants = app.add_subcommand("invariants", "randomized invariant suites");
  add_common(invariants);
  invariants->add_option("--suite", opts.suite, "core|dynamics|affine|all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opts);
  } catch (const gh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const galimech::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const galimech::NonFiniteState& e) {
    std::cerr << "non-finite state: " << e.what() << "\n";
    return kExitNonFinite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
