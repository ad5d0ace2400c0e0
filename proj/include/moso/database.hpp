//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "moso/design.hpp"
#include "moso/embedding.hpp"

namespace moso {

class Problem;

struct Record {
  DesignPoint x;
  LatentPoint latent;          // E_in(x)
  std::vector<double> outputs; // all simulation outputs, concatenated
  std::vector<double> objectives;
  std::vector<double> constraints;
  bool feasible = true;
  int iteration = 0;
};

/// The evaluated (x, S(x)) pairs, in evaluation order, indexed by their
/// latent coordinates.
class EvaluationDatabase {
public:
  /// Computes E_in(x), F and G for the pair and appends it.
  /// Throws Error when the latent coordinates are already present.
  const Record &add(const Problem &problem, DesignPoint x, std::vector<double> outputs,
                    int iteration, double feasibility_tol = 1e-8);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const Record &operator[](std::size_t i) const { return records_[i]; }
  const std::vector<Record> &records() const noexcept { return records_; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  /// Exact match on latent coordinates.
  bool contains(std::span<const double> latent) const;
  /// Any record within `tol` in the max-norm.
  bool contains_near(std::span<const double> latent, double tol) const;

  /// All latent coordinates, in record order.
  std::vector<LatentPoint> latent_points() const;

  /// Simulation outputs of one simulation block for every record.
  std::vector<std::vector<double>> outputs_block(std::size_t offset, std::size_t width) const;

private:
  std::vector<Record> records_;
  std::set<std::vector<double>> index_;
};

} // namespace moso
