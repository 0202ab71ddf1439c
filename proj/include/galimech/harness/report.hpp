#pragma once

#include <string>
#include <vector>

namespace galimech::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_err = 0.0;
  double tol = 0.0;
  long n = 0;
  /// Optional free text, e.g. how a tolerance was derived.
  std::string note;
};

class Report {
 public:
  /// Records a check that passes iff max_err <= tol.
  CheckResult& add(std::string name, double max_err, double tol, long n,
                   std::string note = {});
  /// Records a check with an explicit status.
  CheckResult& add_status(std::string name, bool passed, double max_err,
                          double tol, long n, std::string note = {});
  void append(const Report& other);

  const std::vector<CheckResult>& checks() const { return checks_; }
  bool passed() const;

  /// {"checks":[{name,status,max_err,tol,n[,note]}],"verdict":"pass"|"fail"}
  std::string to_json() const;
  /// One human-readable line per check.
  std::string to_text() const;

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace galimech::harness
