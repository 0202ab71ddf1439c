#include "galimech/harness/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace galimech::harness {

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

LogLevel log_level_from_env() {
  const char* env = std::getenv("GALIMECH_LOG");
  if (env == nullptr) return LogLevel::kWarn;
  const std::string_view v(env);
  if (v == "error") return LogLevel::kError;
  if (v == "info") return LogLevel::kInfo;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

void log(LogLevel level, std::string_view message) {
  static const LogLevel enabled = log_level_from_env();
  if (static_cast<int>(level) > static_cast<int>(enabled)) return;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::cerr << '[' << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace galimech::harness
