//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace moso {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by `validate` and the config loader; carries every problem found,
/// not just the first one.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> errors);

  const std::vector<std::string> &errors() const noexcept { return errors_; }

  /// True when any collected message contains `needle`.
  bool mentions(const std::string &needle) const;

private:
  std::vector<std::string> errors_;
};

class CheckpointError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace moso
