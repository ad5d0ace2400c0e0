//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/log.hpp"

#include <iostream>
#include <mutex>

namespace moso {
namespace {

std::mutex &sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink &sink() {
  static LogSink s = [](const std::string &msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

} // namespace

void warn(const std::string &message) {
  std::lock_guard lock(sink_mutex());
  if (sink())
    sink()(message);
}

LogSink set_warning_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  auto old = std::move(sink());
  sink() = std::move(s);
  return old;
}

} // namespace moso
