//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moso/database.hpp"
#include "moso/problem.hpp"
#include "moso/random.hpp"

namespace moso {

/// One acquisition's scalarization for the current iteration.
///
/// Weighted kinds scalarize as w.f - kappa * w.sigma. The epsilon-constraint
/// kind minimizes f_t + rho * sum_{j != t} max(f_j - eps_j, 0).
struct ScalarizationState {
  AcquisitionKind kind = AcquisitionKind::fixed_weight;
  std::vector<double> weights; // weighted kinds
  std::size_t target = 0;      // epsilon-constraint objective index t
  std::vector<double> bounds;  // epsilon-constraint targets (bounds[target] unused)
  double kappa = 0.0;
  double rho = 100.0;

  /// True for the weighted scalarizations (including epsilon fallbacks).
  bool weighted() const noexcept { return kind != AcquisitionKind::random_epsilon_constraint; }

  friend bool operator==(const ScalarizationState &, const ScalarizationState &) = default;
};

/// Draws this iteration's state. `archive` holds objective vectors of the
/// feasible nondominated records. An empty archive turns an
/// epsilon-constraint acquisition into a random-weight one for the iteration.
ScalarizationState refresh(const AcquisitionSpec &spec, std::span<const double> fixed_weights,
                           std::size_t num_objectives,
                           const std::vector<std::vector<double>> &archive, Rng &rng,
                           double kappa = 0.0, double rho = 100.0);

/// Throws NumericalError on non-finite input.
double scalarize(const ScalarizationState &state, std::span<const double> f,
                 std::span<const double> sigma = {});

/// d scalarize / d f_j at `f` (uncertainty term excluded); one-sided at the
/// kinks of the epsilon penalty (derivative of the active branch for f_j > eps_j).
std::vector<double> scalarize_gradient(const ScalarizationState &state,
                                       std::span<const double> f);

/// Index of the record minimizing scalarize(F, 0) among feasible records;
/// when none is feasible, minimizes scalarize(F, 0) + lambda * violation.
/// Ties go to the earliest record. Throws Error on an empty database.
std::size_t select_start(const ScalarizationState &state, const EvaluationDatabase &db,
                         double lambda);

} // namespace moso
