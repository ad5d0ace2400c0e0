//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <string>

namespace moso {

using LogSink = std::function<void(const std::string &)>;

/// Emits a warning through the installed sink (stderr by default).
/// Safe to call from worker threads.
void warn(const std::string &message);

/// Replaces the warning sink; returns the previous one. Passing an empty
/// function silences warnings.
LogSink set_warning_sink(LogSink sink);

} // namespace moso
