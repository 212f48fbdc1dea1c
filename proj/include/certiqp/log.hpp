#pragma once

#include <iosfwd>
#include <string_view>

namespace certiqp {

enum class LogLevel { kOff = 0, kError, kWarn, kInfo, kDebug };

/// Level from CERTIQP_LOG ("off", "error", "warn", "info", "debug");
/// "warn" when unset or unrecognised.
LogLevel log_level_from_env();

void set_log_level(LogLevel level);
LogLevel log_level();

/// Redirects log output (stderr by default).
void set_log_stream(std::ostream* os);

void log(LogLevel level, std::string_view msg);

}  // namespace certiqp
