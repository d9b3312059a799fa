#pragma once

#include <sstream>
#include <string_view>

namespace hba::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

// Threshold read once from HBA_LOG_LEVEL (debug|info|warn|error|off);
// defaults to warn.
Level threshold();
void set_threshold(Level level);
void write(Level level, std::string_view message);

template <class... Args>
void emit(Level level, const Args&... args) {
  if (level < threshold()) return;
  std::ostringstream out;
  (out << ... << args);
  write(level, out.str());
}

template <class... Args>
void debug(const Args&... args) { emit(Level::kDebug, args...); }
template <class... Args>
void info(const Args&... args) { emit(Level::kInfo, args...); }
template <class... Args>
void warn(const Args&... args) { emit(Level::kWarn, args...); }
template <class... Args>
void error(const Args&... args) { emit(Level::kError, args...); }

}  // namespace hba::log
