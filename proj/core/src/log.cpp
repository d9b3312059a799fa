#include "hba/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace hba::log {
namespace {

Level parse_env() {
  const char* raw = std::getenv("HBA_LOG_LEVEL");
  if (raw == nullptr) return Level::kWarn;
  const std::string v(raw);
  if (v == "debug") return Level::kDebug;
  if (v == "info") return Level::kInfo;
  if (v == "error") return Level::kError;
  if (v == "off") return Level::kOff;
  return Level::kWarn;
}

std::atomic<int>& level_slot() {
  static std::atomic<int> slot{static_cast<int>(parse_env())};
  return slot;
}

constexpr const char* kNames[] = {"debug", "info", "warn", "error", "off"};

}  // namespace

Level threshold() { return static_cast<Level>(level_slot().load()); }

void set_threshold(Level level) { level_slot().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << "[hba " << kNames[static_cast<int>(level)] << "] " << message
            << '\n';
}

}  // namespace hba::log
