#include "certiqp/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace certiqp {

namespace {

std::atomic<LogLevel> g_level{LogLevel::kWarn};
std::ostream* g_stream = &std::cerr;
std::mutex g_mutex;

const char* tag(LogLevel l) {
  switch (l) {
    case LogLevel::kError: return "error";
    case LogLevel::kWarn: return "warn";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
    default: return "";
  }
}

}  // namespace

LogLevel log_level_from_env() {
  const char* v = std::getenv("CERTIQP_LOG");
  if (v == nullptr) return LogLevel::kWarn;
  const std::string s(v);
  if (s == "off") return LogLevel::kOff;
  if (s == "error") return LogLevel::kError;
  if (s == "info") return LogLevel::kInfo;
  if (s == "debug") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void set_log_stream(std::ostream* os) {
  std::lock_guard lock(g_mutex);
  g_stream = os != nullptr ? os : &std::cerr;
}

void log(LogLevel level, std::string_view msg) {
  if (level == LogLevel::kOff || level > g_level.load()) return;
  std::lock_guard lock(g_mutex);
  *g_stream << "certiqp[" << tag(level) << "] " << msg << '\n';
}

}  // namespace certiqp
