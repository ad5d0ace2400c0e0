//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moso/database.hpp"
#include "moso/pareto.hpp"
#include "moso/problem.hpp"

// CSV output. Column names carry a kind prefix: "x:" design values (labels for
// categorical variables), "s:" simulation outputs, "f:" objectives, "g:"
// constraints. Doubles use %.17g so they read back bitwise.

namespace moso::report {

std::string format_double(double v);

void write_database_csv(std::ostream &out, const Problem &problem, const EvaluationDatabase &db);
void write_pareto_csv(std::ostream &out, const Problem &problem, const EvaluationDatabase &db,
                      const ParetoArchive &archive);

/// Objective columns of a database CSV.
struct DatabaseTable {
  std::vector<std::string> objective_names;
  std::vector<int> iteration;
  std::vector<std::vector<double>> objectives;
  std::vector<bool> feasible;

  std::size_t size() const noexcept { return iteration.size(); }
};

/// Throws Error on a malformed table.
DatabaseTable read_database_csv(std::istream &in);

struct TrajectoryRow {
  int iteration;
  std::size_t records;   // rows up to and including this iteration
  double hypervolume;    // of the feasible nondominated prefix
  std::vector<double> best; // best feasible value per objective (inf if none)
};

/// One row per iteration present in the table (rows must be ordered by iteration).
std::vector<TrajectoryRow> trajectory(const std::vector<int> &iteration,
                                      const std::vector<std::vector<double>> &objectives,
                                      const std::vector<bool> &feasible,
                                      std::span<const double> ref);

std::vector<TrajectoryRow> trajectory(const EvaluationDatabase &db, std::span<const double> ref);

/// iteration, records, hypervolume, best:<objective>...
void write_metrics_csv(std::ostream &out, const std::vector<std::string> &objective_names,
                       const std::vector<TrajectoryRow> &rows);

} // namespace moso::report
