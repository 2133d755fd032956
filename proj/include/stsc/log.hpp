#pragma once

#include <cstdarg>

namespace stsc {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Process-wide threshold, initialised from STSC_LOG_LEVEL (error|warn|info|debug,
// default warn) on first use. set_log_level overrides it.
LogLevel log_level();
void set_log_level(LogLevel level);

// printf-style, writes "level: message" to stderr when level passes the threshold.
void log_message(LogLevel level, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

#define STSC_LOG_ERROR(...) ::stsc::log_message(::stsc::LogLevel::error, __VA_ARGS__)
#define STSC_LOG_WARN(...) ::stsc::log_message(::stsc::LogLevel::warn, __VA_ARGS__)
#define STSC_LOG_INFO(...) ::stsc::log_message(::stsc::LogLevel::info, __VA_ARGS__)
#define STSC_LOG_DEBUG(...) ::stsc::log_message(::stsc::LogLevel::debug, __VA_ARGS__)

}  // namespace stsc
