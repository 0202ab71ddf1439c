#pragma once

// JSON form of canonical (reference-chart) representatives:
//   W element  {"v":[v0,v1,v2,v3],"r":r}
//   P element  {"p":[p0,p1,p2,p3]}

#include <string>

#include "galimech/affine_phase.hpp"

namespace galimech::harness {

std::string to_json(const WElement& w);
std::string to_json(const PElement& p);

/// Throw ConfigError naming the missing or malformed key.
WElement w_from_json(const std::string& text);
PElement p_from_json(const std::string& text);

}  // namespace galimech::harness
