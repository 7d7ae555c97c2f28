// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <spdlog/logger.h>

namespace radiogrid {

/// Shared stderr logger. The level is read once from RADIOGRID_LOG
/// (trace, debug, info, warn, error, critical, off); default is warn.
spdlog::logger& log();

}  // namespace radiogrid
