// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/log.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace radiogrid {
namespace {

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("RADIOGRID_LOG");
  if (raw == nullptr || *raw == '\0') return spdlog::level::warn;
  const auto level = spdlog::level::from_str(raw);
  // from_str maps unknown names to off; keep warnings in that case.
  if (level == spdlog::level::off && std::string(raw) != "off") {
    return spdlog::level::warn;
  }
  return level;
}

std::shared_ptr<spdlog::logger> make_logger() {
  auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
  auto logger = std::make_shared<spdlog::logger>("radiogrid", sink);
  logger->set_pattern("radiogrid: [%l] %v");
  logger->set_level(level_from_env());
  return logger;
}

}  // namespace

spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> logger = make_logger();
  return *logger;
}

}  // namespace radiogrid
