#pragma once

#include <charconv>
#include <string>

namespace galimech {

/// Locale-independent rendering with 17 significant digits.
inline std::string format_double(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace galimech
