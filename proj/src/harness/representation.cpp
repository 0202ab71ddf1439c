#include "galimech/harness/representation.hpp"

#include <json.hpp>

#include "galimech/harness/config.hpp"

namespace galimech::harness {

namespace {

using json = nlohmann::ordered_json;

template <typename Derived>
json array_of(const Eigen::MatrixBase<Derived>& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m(i));
  return out;
}

json parse_object(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("representative", "expected a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("representative", e.what());
  }
}

Eigen::Vector4d four(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4) {
    throw ConfigError(key, "expected an array of 4 numbers");
  }
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) {
    if (!j[key][i].is_number()) throw ConfigError(key, "expected numbers");
    out(i) = j[key][i].get<double>();
  }
  return out;
}

}  // namespace

std::string to_json(const WElement& w) {
  json j;
  j["v"] = array_of(w.v());
  j["r"] = w.r();
  return j.dump();
}

std::string to_json(const PElement& p) {
  json j;
  j["p"] = array_of(p.p());
  return j.dump();
}

WElement w_from_json(const std::string& text) {
  const json j = parse_object(text);
  if (!j.contains("r") || !j["r"].is_number()) throw ConfigError("r", "expected a number");
  return WElement(four(j, "v"), j["r"].get<double>());
}

PElement p_from_json(const std::string& text) {
  const json j = parse_object(text);
  return PElement(four(j, "p").transpose());
}

}  // namespace galimech::harness
