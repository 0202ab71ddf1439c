#include "galimech/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "galimech/harness/expression.hpp"

namespace galimech::harness {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message,
                         std::size_t line)
    : std::runtime_error(
          (line ? "line " + std::to_string(line) + ": " : std::string()) +
          (field.empty() ? std::string() : "field '" + field + "': ") + message),
      field_(std::move(field)),
      line_(line) {}

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != N) {
    throw ConfigError(field, "expected an array of " + std::to_string(N) +
                                 " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    out(i) = number(j[static_cast<std::size_t>(i)],
                    field + "[" + std::to_string(i) + "]");
  }
  return out;
}

json to_array(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

PotentialSpec parse_potential(const json& j) {
  if (!j.is_object()) throw ConfigError("potential", "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("potential.kind", "missing or not a string");
  }
  PotentialSpec spec;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "free") {
    spec.kind = PotentialKind::kFree;
  } else if (kind == "uniform") {
    spec.kind = PotentialKind::kUniform;
    if (!j.contains("force")) throw ConfigError("potential.force", "missing");
    spec.force = vec<3>(j["force"], "potential.force");
  } else if (kind == "harmonic") {
    spec.kind = PotentialKind::kHarmonic;
    if (j.contains("k")) spec.k = number(j["k"], "potential.k");
    if (j.contains("center")) spec.center = vec<3>(j["center"], "potential.center");
  } else if (kind == "custom") {
    spec.kind = PotentialKind::kCustom;
    if (!j.contains("expression") || !j["expression"].is_string()) {
      throw ConfigError("potential.expression", "missing or not a string");
    }
    spec.expression = j["expression"].get<std::string>();
  } else {
    throw ConfigError("potential.kind", "unknown kind '" + kind + "'");
  }
  return spec;
}

json potential_to_json(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::kFree:
      return {{"kind", "free"}};
    case PotentialKind::kUniform:
      return {{"kind", "uniform"}, {"force", to_array(spec.force)}};
    case PotentialKind::kHarmonic:
      return {{"kind", "harmonic"}, {"k", spec.k}, {"center", to_array(spec.center)}};
    case PotentialKind::kCustom:
      return {{"kind", "custom"}, {"expression", spec.expression}};
  }
  return {};
}

// Field table keeps parse and serialize in sync.
template <typename F>
void for_each_tolerance(Tolerances& t, F&& f) {
  f("sigma", t.sigma);
  f("lagrangian_difference", t.lagrangian_difference);
  f("legendre_fd", t.legendre_fd);
  f("mass_shell", t.mass_shell);
  f("boost_residual", t.boost_residual);
  f("symplectic", t.symplectic);
  f("worldline_free", t.worldline_free);
  f("worldline_dynamic", t.worldline_dynamic);
  f("momentum_offset", t.momentum_offset);
  f("energy_drift", t.energy_drift);
  f("shell_tangency", t.shell_tangency);
  f("generated_equivalence", t.generated_equivalence);
  f("hamiltonian_zero", t.hamiltonian_zero);
  f("chart_independence", t.chart_independence);
  f("section_fd", t.section_fd);
  f("section_constant", t.section_constant);
  f("solver", t.solver);
  f("rank", t.rank);
  f("membership_factor", t.membership_factor);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", e.what(), line_of(text, e.byte));
  }
  if (!j.is_object()) throw ConfigError("", "top level must be an object", 1);

  ScenarioConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "mass") {
      c.mass = number(value, "mass");
    } else if (key == "metric") {
      if (!value.is_array() || value.size() != 3) {
        throw ConfigError("metric", "expected a 3x3 array");
      }
      for (int r = 0; r < 3; ++r) {
        c.metric.row(r) = vec<3>(value[static_cast<std::size_t>(r)],
                                 "metric[" + std::to_string(r) + "]")
                              .transpose();
      }
    } else if (key == "potential") {
      c.potential = parse_potential(value);
    } else if (key == "frames") {
      if (!value.is_array()) throw ConfigError("frames", "expected an array");
      c.frames.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        c.frames.push_back(vec<3>(value[i], "frames[" + std::to_string(i) + "]"));
      }
    } else if (key == "initial_event") {
      c.initial_event = vec<4>(value, "initial_event");
    } else if (key == "initial_velocity") {
      c.initial_velocity = vec<3>(value, "initial_velocity");
    } else if (key == "step") {
      c.step = number(value, "step");
    } else if (key == "steps") {
      if (!value.is_number_integer()) throw ConfigError("steps", "expected an integer");
      c.steps = value.get<long>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError("seed", "expected a non-negative integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "tolerances") {
      if (!value.is_object()) throw ConfigError("tolerances", "expected an object");
      for (const auto& [tk, tv] : value.items()) {
        bool known = false;
        for_each_tolerance(c.tolerances, [&](const char* name, double& slot) {
          if (tk == name) {
            slot = number(tv, "tolerances." + tk);
            known = true;
          }
        });
        if (!known) throw ConfigError("tolerances." + tk, "unknown tolerance");
      }
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["mass"] = c.mass;
  json metric = json::array();
  for (int r = 0; r < 3; ++r) metric.push_back(to_array(c.metric.row(r).transpose()));
  j["metric"] = metric;
  j["potential"] = potential_to_json(c.potential);
  json frames = json::array();
  for (const auto& f : c.frames) frames.push_back(to_array(f));
  j["frames"] = frames;
  j["initial_event"] = to_array(c.initial_event);
  j["initial_velocity"] = to_array(c.initial_velocity);
  j["step"] = c.step;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  json tol;
  Tolerances t = c.tolerances;
  for_each_tolerance(t, [&](const char* name, double& v) { tol[name] = v; });
  j["tolerances"] = tol;
  return j.dump(2);
}

void validate(const ScenarioConfig& c) {
  if (!(c.mass > 0.0) || !std::isfinite(c.mass)) {
    throw ConfigError("mass", "must be positive and finite");
  }
  try {
    SpatialMetricd g(c.metric);
  } catch (const Error& e) {
    throw ConfigError("metric", e.what());
  }
  if (!(c.step > 0.0) || !std::isfinite(c.step)) {
    throw ConfigError("step", "must be positive and finite");
  }
  if (c.steps < 1) throw ConfigError("steps", "must be at least 1");
  if (c.frames.empty()) throw ConfigError("frames", "at least one frame required");
  for (std::size_t i = 0; i < c.frames.size(); ++i) {
    if (!c.frames[i].allFinite()) {
      throw ConfigError("frames[" + std::to_string(i) + "]", "must be finite");
    }
  }
  if (!c.initial_event.allFinite()) throw ConfigError("initial_event", "must be finite");
  if (!c.initial_velocity.allFinite()) {
    throw ConfigError("initial_velocity", "must be finite");
  }
  if (!c.potential.force.allFinite() || !c.potential.center.allFinite() ||
      !std::isfinite(c.potential.k)) {
    throw ConfigError("potential", "parameters must be finite");
  }
  if (c.potential.kind == PotentialKind::kCustom) {
    try {
      (void)Expression::parse(c.potential.expression);
    } catch (const ExpressionError& e) {
      throw ConfigError("potential.expression", e.what());
    }
  }
  Tolerances t = c.tolerances;
  for_each_tolerance(t, [](const char* name, double& v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("tolerances.") + name, "must be positive");
    }
  });
}

Potential make_potential(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::kFree:
      return Potential::free();
    case PotentialKind::kUniform:
      return Potential::uniform(spec.force.transpose());
    case PotentialKind::kHarmonic:
      return Potential::harmonic(spec.k, spec.center);
    case PotentialKind::kCustom: {
      const Expression expr = Expression::parse(spec.expression);
      return Potential(
          "custom", [expr](const Eventd& x) { return expr(x); }, std::nullopt,
          std::nullopt, !expr.depends_on_time());
    }
  }
  return Potential::free();
}

NewtonModel make_model(const ScenarioConfig& c) {
  return NewtonModel(c.mass, SpatialMetricd(c.metric), make_potential(c.potential));
}

Framed frame_at(const ScenarioConfig& c, std::size_t index) {
  if (index >= c.frames.size()) {
    throw ConfigError("frames", "frame index " + std::to_string(index) +
                                    " out of range");
  }
  return Framed::from_velocity(c.frames[index]);
}

}  // namespace galimech::harness
