#include "metricqm/log.hpp"

#include <atomic>
#include <iostream>

namespace metricqm::log {

namespace {
std::atomic<Level> g_level{Level::Warn};

void emit(Level at, const char* tag, std::string_view msg) {
    if (at < g_level.load(std::memory_order_relaxed)) return;
    std::clog << "[metricqm " << tag << "] " << msg << '\n';
}
}  // namespace

void set_level(Level level) { g_level.store(level, std::memory_order_relaxed); }
Level level() { return g_level.load(std::memory_order_relaxed); }

void debug(std::string_view msg) { emit(Level::Debug, "debug", msg); }
void info(std::string_view msg) { emit(Level::Info, "info", msg); }
void warn(std::string_view msg) { emit(Level::Warn, "warn", msg); }

}  // namespace metricqm::log
