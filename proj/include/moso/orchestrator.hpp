//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moso/acquisition.hpp"
#include "moso/database.hpp"
#include "moso/pareto.hpp"
#include "moso/problem.hpp"
#include "moso/random.hpp"
#include "moso/surrogate.hpp"

namespace moso {

struct Candidate {
  DesignPoint x;
  LatentPoint latent; // E_in(x), the coordinates checked for duplicates
  std::optional<std::size_t> acquisition; // none for search points
  bool improve = false; // model-improvement replacement
};

struct CandidateBatch {
  int iteration = 0;
  std::vector<Candidate> points;

  std::size_t size() const noexcept { return points.size(); }
};

struct EvaluationResult {
  DesignPoint x;
  std::vector<double> outputs; // concatenated over simulations
  bool ok = false;
  std::string error;
};

/// One growth step of the penalty schedule when every optimizer-proposed
/// point of the last batch was infeasible. `proposed_feasible` holds one flag
/// per proposed point that was evaluated; an empty list leaves lambda alone.
PenaltyState update_penalty(PenaltyState state, const std::vector<bool> &proposed_feasible);

/// Evaluates every simulation at every point on `workers` threads. Results
/// are in batch order. Exceptions, wrong output lengths and non-finite outputs
/// mark the point as failed.
std::vector<EvaluationResult> evaluate_points(const Problem &problem,
                                              const std::vector<DesignPoint> &points,
                                              std::size_t workers);
std::vector<EvaluationResult> evaluate_points_serial(const Problem &problem,
                                                     const std::vector<DesignPoint> &points);

/// The optimization engine. Owns the database, the penalty state and the
/// random streams; all mutation happens on the calling thread.
class Moop {
public:
  using IterationCallback = std::function<void(const Moop &, const CandidateBatch &)>;

  explicit Moop(MoopDefinition defn);
  explicit Moop(Problem problem);

  const Problem &problem() const noexcept { return problem_; }
  const EvaluationDatabase &database() const noexcept { return db_; }
  const PenaltyState &penalty() const noexcept { return penalty_; }
  /// Index of the next iteration (0 before the search phase).
  int next_iteration() const noexcept { return next_iteration_; }
  /// Attempted simulation evaluations, failures included.
  std::size_t evaluations() const noexcept { return evaluations_; }

  /// Builds the candidate batch of iteration k (does not evaluate it).
  CandidateBatch iterate(int k);

  /// Evaluates the batch with the configured worker count; failed points are
  /// reported with a warning.
  std::vector<EvaluationResult> evaluate_batch(const CandidateBatch &batch);

  /// iterate + evaluate_batch + database merge + penalty update for the next
  /// iteration, then the checkpoint and the callback.
  void step();

  /// Steps until the next batch would exceed `budget` attempted evaluations.
  /// Throws Error when budget < q0.
  ParetoArchive solve(std::size_t budget);

  ParetoArchive archive() const { return ParetoArchive(db_); }

  /// Saved after every completed iteration when set.
  void set_checkpoint_path(std::optional<std::filesystem::path> path) {
    checkpoint_path_ = std::move(path);
  }
  void set_iteration_callback(IterationCallback cb) { callback_ = std::move(cb); }
  void set_workers(std::size_t workers) { workers_ = workers == 0 ? 1 : workers; }
  std::size_t workers() const noexcept { return workers_; }

  /// Versioned JSON document with sorted keys. Throws CheckpointError.
  void checkpoint_save(const std::filesystem::path &path) const;
  /// Restores the state written by checkpoint_save for the same problem.
  /// Throws CheckpointError on a corrupt file, a version mismatch or a
  /// problem whose sizes differ from the saved one.
  void checkpoint_load(const std::filesystem::path &path);

  std::string checkpoint_string() const;
  void checkpoint_restore(const std::string &text);

private:
  std::vector<std::size_t> merge(const CandidateBatch &batch,
                                 const std::vector<EvaluationResult> &results);
  CandidateBatch search_batch();
  CandidateBatch optimizer_batch(int k);

  Problem problem_;
  EvaluationDatabase db_;
  PenaltyState penalty_;
  Rng search_rng_;
  std::vector<Rng> acquisition_rngs_;
  int next_iteration_ = 0;
  std::size_t evaluations_ = 0;
  std::size_t workers_ = 1;
  std::optional<std::filesystem::path> checkpoint_path_;
  IterationCallback callback_;
};

} // namespace moso
