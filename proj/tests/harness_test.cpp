#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "galimech/harness/checks.hpp"
#include "galimech/harness/config.hpp"
#include "galimech/harness/expression.hpp"
#include "galimech/harness/io.hpp"
#include "galimech/harness/report.hpp"
#include "galimech/harness/representation.hpp"

using namespace galimech;
using namespace galimech::harness;

TEST(Expression, Arithmetic) {
  const Eventd x(2, 3, -1, 0.5);
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(x), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2) * 3")(x), 9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(x), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-q1^2")(x), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("q1/q2 - t")(x), -5.0);
  EXPECT_DOUBLE_EQ(Expression::parse("0.5*(q1^2+q2^2+q3^2)")(x), 0.5 * 10.25);
  EXPECT_NEAR(Expression::parse("sin(pi/2) + cos(0) + exp(1) - e")(x), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e2")(x), 150.0);
}

TEST(Expression, TracksTimeDependence) {
  EXPECT_FALSE(Expression::parse("q1*q2").depends_on_time());
  EXPECT_TRUE(Expression::parse("q1*sin(t)").depends_on_time());
}

TEST(Expression, ReportsErrorPosition) {
  try {
    Expression::parse("1 + * 2");
    FAIL();
  } catch (const ExpressionError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(Expression::parse("foo(1)"), ExpressionError);
  EXPECT_THROW(Expression::parse("(1 + 2"), ExpressionError);
  EXPECT_THROW(Expression::parse("1 2"), ExpressionError);
}

TEST(Config, DefaultsAndRoundTrip) {
  const ScenarioConfig d = parse_config("{}");
  EXPECT_EQ(d, ScenarioConfig{});
  EXPECT_EQ(d.seed, 42u);

  const std::string text = R"cfg({
    "mass": 2.5,
    "metric": [[2, 0.1, 0], [0.1, 1, 0], [0, 0, 3]],
    "potential": {"kind": "custom", "expression": "0.5*q1^2 + sin(t)"},
    "frames": [[0, 0, 0], [1, 2, 3], [-0.5, 0, 0]],
    "initial_event": [0.1, 1, 2, 3],
    "initial_velocity": [0.3, 0, -0.2],
    "step": 0.01, "steps": 25, "seed": 99,
    "tolerances": {"worldline_dynamic": 1e-6}
  })cfg";
  const ScenarioConfig c = parse_config(text);
  EXPECT_EQ(c.mass, 2.5);
  EXPECT_EQ(c.frames.size(), 3u);
  EXPECT_EQ(c.tolerances.worldline_dynamic, 1e-6);
  EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(Config, ZeroMassNamesField) {
  try {
    parse_config(R"({"mass": 0})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mass");
    EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos);
  }
}

TEST(Config, SyntaxErrorCarriesLine) {
  try {
    parse_config("{\n  \"mass\": 1,\n  \"step\": ,\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Config, RejectsInvalidEntries) {
  auto field_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(field_of(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(field_of(R"({"step": -0.1})"), "step");
  EXPECT_EQ(field_of(R"({"steps": 0})"), "steps");
  EXPECT_EQ(field_of(R"({"metric": [[1,0,0],[0,0,0],[0,0,1]]})"), "metric");
  EXPECT_EQ(field_of(R"({"potential": {"kind": "magnetic"}})"), "potential.kind");
  EXPECT_EQ(field_of(R"({"potential": {"kind": "custom", "expression": "q1 +"}})"),
            "potential.expression");
  EXPECT_EQ(field_of(R"({"tolerances": {"sigma": 0}})"), "tolerances.sigma");
  EXPECT_EQ(field_of(R"({"frames": []})"), "frames");
}

TEST(Config, PotentialsFromSpec) {
  PotentialSpec spec;
  spec.kind = PotentialKind::kHarmonic;
  spec.k = 2.0;
  spec.center = Spatiald(1, 0, 0);
  const Potential h = make_potential(spec);
  EXPECT_DOUBLE_EQ(h(Eventd(0, 3, 0, 0)), 4.0);
  EXPECT_TRUE(h.time_independent());

  spec.kind = PotentialKind::kCustom;
  spec.expression = "(q1-1)^2";
  const Potential c = make_potential(spec);
  EXPECT_DOUBLE_EQ(c(Eventd(0, 3, 0, 0)), 4.0);
  EXPECT_NEAR(c.spatial_gradient(Eventd(0, 3, 0, 0))(0), 4.0, 1e-8);

  spec.kind = PotentialKind::kUniform;
  spec.force = Spatiald(0, 0, -9.8);
  EXPECT_NEAR(make_potential(spec).spatial_gradient(Eventd())(2), 9.8, 1e-15);
}

TEST(Report, JsonSchemaAndVerdict) {
  Report r;
  r.add("small", 1e-14, 1e-12, 10);
  r.add("large", 1e-3, 1e-12, 5, "note");
  r.add("nan", std::nan(""), 1.0, 1);
  EXPECT_FALSE(r.passed());
  const auto j = nlohmann::json::parse(r.to_json());
  ASSERT_EQ(j["checks"].size(), 3u);
  EXPECT_EQ(j["checks"][0]["name"], "small");
  EXPECT_EQ(j["checks"][0]["status"], "pass");
  EXPECT_EQ(j["checks"][0]["n"], 10);
  EXPECT_EQ(j["checks"][1]["status"], "fail");
  EXPECT_TRUE(j["checks"][2]["max_err"].is_null());
  EXPECT_EQ(j["checks"][2]["status"], "fail");
  EXPECT_EQ(j["verdict"], "fail");

  Report ok;
  ok.add("a", 0.0, 0.0, 1);
  EXPECT_EQ(nlohmann::json::parse(ok.to_json())["verdict"], "pass");
}

TEST(Representation, RoundTrip) {
  const WElement w(Vector4d(1, 0.25, -3, 1e-17), -0.5);
  EXPECT_EQ(w_from_json(to_json(w)), w);
  const PElement p(Covector4d(-0.1, 2, 3, 4));
  EXPECT_EQ(p_from_json(to_json(p)), p);
  EXPECT_EQ(to_json(WElement::one()), R"({"v":[0.0,0.0,0.0,0.0],"r":-1.0})");
  EXPECT_THROW(p_from_json(R"({"p":[1,2,3]})"), ConfigError);
  EXPECT_THROW(w_from_json(R"({"v":[1,2,3,4]})"), ConfigError);
}

TEST(Io, AtomicWriteReplacesFile) {
  const auto dir = std::filesystem::temp_directory_path() / "galimech_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), "second");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST(Io, LogLevelFromEnvironment) {
  setenv("GALIMECH_LOG", "debug", 1);
  EXPECT_EQ(log_level_from_env(), LogLevel::kDebug);
  setenv("GALIMECH_LOG", "error", 1);
  EXPECT_EQ(log_level_from_env(), LogLevel::kError);
  setenv("GALIMECH_LOG", "nonsense", 1);
  EXPECT_EQ(log_level_from_env(), LogLevel::kWarn);
  unsetenv("GALIMECH_LOG");
  EXPECT_EQ(log_level_from_env(), LogLevel::kWarn);
}

TEST(Checks, SimulateFreeParticle) {
  const std::string csv = simulate_csv(ScenarioConfig{}, 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,t,q1,q2,q3,p1,p2,p3,H");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(std::stod(cell));
    EXPECT_NEAR(cols[2], cols[1], 1e-15);
    ++rows;
  }
  EXPECT_EQ(rows, 11);
}

TEST(Checks, SimulateHarmonicConservesH) {
  ScenarioConfig c;
  c.potential.kind = PotentialKind::kHarmonic;
  c.initial_event = Vector4d(0, 1, 0, 0);
  c.step = 1e-2;
  c.steps = 500;
  std::istringstream in(simulate_csv(c, 0));
  std::string line;
  std::getline(in, line);
  double h0 = std::nan(""), worst = 0.0;
  while (std::getline(in, line)) {
    const double h = std::stod(line.substr(line.rfind(',') + 1));
    if (std::isnan(h0)) h0 = h;
    worst = std::max(worst, std::abs(h - h0));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Checks, BoostCheckNeedsTwoFrames) {
  ScenarioConfig c;
  c.frames = {Spatiald::Zero()};
  EXPECT_THROW(boost_check(c), ConfigError);
}

TEST(Checks, BoostCheckHarmonicDocumentsBound) {
  ScenarioConfig c;
  c.potential.kind = PotentialKind::kHarmonic;
  const Report r = boost_check(c);
  EXPECT_TRUE(r.passed());
  EXPECT_NE(r.checks().front().note.find("h^4"), std::string::npos);
}

TEST(Checks, CorruptedSigmaFails) {
  EXPECT_TRUE(boost_check(ScenarioConfig{}).passed());
  EXPECT_FALSE(boost_check(ScenarioConfig{}, {true}).passed());
}

TEST(Checks, NamesParse) {
  EXPECT_EQ(parse_family("fam3"), FamilyName::kFam3);
  EXPECT_EQ(parse_family("fam9"), std::nullopt);
  EXPECT_EQ(parse_suite("affine"), Suite::kAffine);
  EXPECT_EQ(parse_suite("everything"), std::nullopt);
}
