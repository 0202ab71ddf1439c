#include "galimech/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "galimech/number_format.hpp"

namespace galimech::harness {

CheckResult& Report::add(std::string name, double max_err, double tol, long n,
                         std::string note) {
  return add_status(std::move(name), std::isfinite(max_err) && max_err <= tol,
                    max_err, tol, n, std::move(note));
}

CheckResult& Report::add_status(std::string name, bool passed, double max_err,
                                double tol, long n, std::string note) {
  checks_.push_back({std::move(name), passed, max_err, tol, n, std::move(note)});
  return checks_.back();
}

void Report::append(const Report& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool Report::passed() const {
  return std::all_of(checks_.begin(), checks_.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = c.passed ? "pass" : "fail";
    // Non-finite errors are not representable in JSON numbers.
    if (std::isfinite(c.max_err)) {
      e["max_err"] = c.max_err;
    } else {
      e["max_err"] = nullptr;
    }
    e["tol"] = c.tol;
    e["n"] = c.n;
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(std::move(e));
  }
  j["verdict"] = passed() ? "pass" : "fail";
  return j.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks_) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
        << " max_err=" << format_double(c.max_err) << " tol=" << format_double(c.tol)
        << " n=" << c.n;
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << '\n';
  }
  out << "verdict: " << (passed() ? "pass" : "fail") << '\n';
  return out.str();
}

}  // namespace galimech::harness
