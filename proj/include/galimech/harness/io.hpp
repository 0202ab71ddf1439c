#pragma once

#include <string>
#include <string_view>

namespace galimech::harness {

/// Writes to `path.tmp` then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Level from GALIMECH_LOG (error|warn|info|debug); warn when unset or
/// unrecognized.
LogLevel log_level_from_env();

/// Writes `[level] message` to stderr when `level` is enabled.
void log(LogLevel level, std::string_view message);

}  // namespace galimech::harness
