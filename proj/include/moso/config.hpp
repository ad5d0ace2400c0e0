//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "moso/error.hpp"
#include "moso/problem.hpp"

namespace moso {

class ConfigError : public Error {
public:
  using Error::Error;
};

/// A problem read from a JSON configuration document.
///
/// Top-level keys: variables, simulations, objectives, constraints,
/// acquisitions, solver, budget, seed, workers, metrics. Simulations name a
/// built-in evaluator (see testbed::builtin_names) and may add a uniform
/// sleep ("delay": [t_min, t_max]). Objective and constraint forms are
/// identity, sum_of_squares, design and linear; constraints take an "upper"
/// bound so that G = form - upper.
struct RunConfig {
  MoopDefinition definition;
  std::size_t budget = 0;
  std::size_t workers = 1;
  std::optional<std::vector<double>> reference; // hypervolume reference point
  std::optional<double> hv_max;
  std::string canonical; // normalized document, basis of the config hash
};

/// Command-line values that replace the document's own.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> workers;
};

/// Throws ConfigError (malformed document) or ValidationError.
RunConfig parse_config(const std::string &text, const ConfigOverrides &overrides = {});
RunConfig load_config(const std::filesystem::path &path, const ConfigOverrides &overrides = {});

/// FNV-1a of the canonical document, as 16 hex digits.
std::string config_hash(const RunConfig &config);

} // namespace moso
