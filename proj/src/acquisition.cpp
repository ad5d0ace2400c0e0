//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/acquisition.hpp"

#include <cmath>
#include <limits>

namespace moso {

namespace {

std::vector<double> simplex_weights(std::size_t o, Rng &rng) {
  std::vector<double> w(o);
  double sum = 0.0;
  for (auto &wi : w) {
    wi = exponential1(rng);
    sum += wi;
  }
  for (auto &wi : w)
    wi /= sum;
  return w;
}

} // namespace

ScalarizationState refresh(const AcquisitionSpec &spec, std::span<const double> fixed_weights,
                           std::size_t num_objectives,
                           const std::vector<std::vector<double>> &archive, Rng &rng,
                           double kappa, double rho) {
  ScalarizationState s;
  s.kind = spec.kind;
  s.kappa = kappa;
  s.rho = rho;
  switch (spec.kind) {
  case AcquisitionKind::fixed_weight:
    s.weights.assign(fixed_weights.begin(), fixed_weights.end());
    break;
  case AcquisitionKind::random_weight:
    s.weights = simplex_weights(num_objectives, rng);
    break;
  case AcquisitionKind::random_epsilon_constraint:
    if (archive.empty()) {
      s.kind = AcquisitionKind::random_weight;
      s.weights = simplex_weights(num_objectives, rng);
      break;
    }
    s.bounds = archive[uniform_index(rng, archive.size())];
    s.target = uniform_index(rng, num_objectives);
    break;
  }
  return s;
}

double scalarize(const ScalarizationState &state, std::span<const double> f,
                 std::span<const double> sigma) {
  for (double v : f)
    if (!std::isfinite(v))
      throw NumericalError("scalarize: non-finite objective value");
  for (double v : sigma)
    if (!std::isfinite(v))
      throw NumericalError("scalarize: non-finite uncertainty value");
  if (state.weighted()) {
    double v = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      v += state.weights[j] * f[j];
    if (state.kappa != 0.0 && !sigma.empty()) {
      double u = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j)
        u += state.weights[j] * sigma[j];
      v -= state.kappa * u;
    }
    return v;
  }
  double v = f[state.target];
  double excess = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (j != state.target)
      excess += std::max(f[j] - state.bounds[j], 0.0);
  return v + state.rho * excess;
}

std::vector<double> scalarize_gradient(const ScalarizationState &state,
                                       std::span<const double> f) {
  std::vector<double> d(f.size(), 0.0);
  if (state.weighted()) {
    for (std::size_t j = 0; j < f.size(); ++j)
      d[j] = state.weights[j];
    return d;
  }
  d[state.target] = 1.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (j != state.target && f[j] > state.bounds[j])
      d[j] = state.rho;
  return d;
}

std::size_t select_start(const ScalarizationState &state, const EvaluationDatabase &db,
                         double lambda) {
  if (db.empty())
    throw Error("select_start: empty database");
  bool any_feasible = false;
  for (const auto &r : db)
    any_feasible = any_feasible || r.feasible;
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto &r = db[i];
    double v;
    if (any_feasible) {
      if (!r.feasible)
        continue;
      v = scalarize(state, r.objectives);
    } else {
      v = scalarize(state, r.objectives) + lambda * constraint_violation(r.constraints);
    }
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

} // namespace moso
