// log.hpp: minimal leveled diagnostics to stderr

#pragma once

#include <string_view>

namespace metricqm::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Off = 3 };

void set_level(Level level);
Level level();

void debug(std::string_view msg);
void info(std::string_view msg);
void warn(std::string_view msg);

}  // namespace metricqm::log
