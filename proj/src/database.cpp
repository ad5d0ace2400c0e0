//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/database.hpp"

#include <algorithm>
#include <cmath>

#include "moso/problem.hpp"

namespace moso {

const Record &EvaluationDatabase::add(const Problem &problem, DesignPoint x,
                                      std::vector<double> outputs, int iteration,
                                      double feasibility_tol) {
  Record r;
  r.latent = problem.plan().embed(x);
  if (index_.count(r.latent))
    throw Error("database already holds a record with these latent coordinates");
  r.objectives = eval_objectives(problem, x, outputs);
  r.constraints = eval_constraints(problem, x, outputs);
  r.feasible = is_feasible(r.constraints, feasibility_tol);
  r.iteration = iteration;
  r.x = std::move(x);
  r.outputs = std::move(outputs);
  index_.insert(r.latent);
  records_.push_back(std::move(r));
  return records_.back();
}

bool EvaluationDatabase::contains(std::span<const double> latent) const {
  return index_.count(std::vector<double>(latent.begin(), latent.end())) != 0;
}

bool EvaluationDatabase::contains_near(std::span<const double> latent, double tol) const {
  for (const auto &r : records_) {
    bool near = true;
    for (std::size_t k = 0; k < latent.size() && near; ++k)
      near = std::abs(r.latent[k] - latent[k]) <= tol;
    if (near)
      return true;
  }
  return false;
}

std::vector<LatentPoint> EvaluationDatabase::latent_points() const {
  std::vector<LatentPoint> out;
  out.reserve(records_.size());
  for (const auto &r : records_)
    out.push_back(r.latent);
  return out;
}

std::vector<std::vector<double>> EvaluationDatabase::outputs_block(std::size_t offset,
                                                                   std::size_t width) const {
  std::vector<std::vector<double>> out;
  out.reserve(records_.size());
  for (const auto &r : records_)
    out.emplace_back(r.outputs.begin() + static_cast<std::ptrdiff_t>(offset),
                     r.outputs.begin() + static_cast<std::ptrdiff_t>(offset + width));
  return out;
}

} // namespace moso
