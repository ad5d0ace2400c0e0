//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/orchestrator.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "moso/kernels.hpp"
#include "moso/log.hpp"
#include "moso/optimizer.hpp"
#include "moso/search.hpp"

namespace moso {

namespace {

constexpr int kSearchRedraws = 100;
constexpr std::size_t kNoRecord = std::numeric_limits<std::size_t>::max();

EvaluationResult evaluate_one(const Problem &problem, const DesignPoint &x) {
  EvaluationResult r{x, {}, false, {}};
  const auto &sims = problem.definition().simulations;
  try {
    r.outputs.reserve(problem.dims().m);
    for (const auto &sim : sims) {
      const auto out = sim.evaluator(x);
      if (out.size() != sim.output_dim)
        throw Error("simulation '" + sim.name + "' returned " + std::to_string(out.size()) +
                    " outputs, expected " + std::to_string(sim.output_dim));
      for (double v : out)
        if (!std::isfinite(v))
          throw Error("simulation '" + sim.name + "' returned a non-finite output");
      r.outputs.insert(r.outputs.end(), out.begin(), out.end());
    }
    r.ok = true;
  } catch (const std::exception &e) {
    r.outputs.clear();
    r.error = e.what();
  } catch (...) {
    r.outputs.clear();
    r.error = "unknown exception";
  }
  return r;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, std::size_t acquisition) {
  const std::string prefix = "acquisition " + std::to_string(acquisition) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const NumericalError &e) {
    throw NumericalError(prefix + e.what());
  } catch (const std::exception &e) {
    throw Error(prefix + e.what());
  }
}

} // namespace

PenaltyState update_penalty(PenaltyState state, const std::vector<bool> &proposed_feasible) {
  if (proposed_feasible.empty())
    return state;
  for (bool f : proposed_feasible)
    if (f)
      return state;
  state.lambda = std::min(state.lambda * state.growth, state.cap);
  return state;
}

std::vector<EvaluationResult> evaluate_points(const Problem &problem,
                                              const std::vector<DesignPoint> &points,
                                              std::size_t workers) {
  std::vector<EvaluationResult> results(points.size());
  kernels::for_each_task(points.size(), workers,
                         [&](std::size_t i) { results[i] = evaluate_one(problem, points[i]); });
  return results;
}

std::vector<EvaluationResult> evaluate_points_serial(const Problem &problem,
                                                     const std::vector<DesignPoint> &points) {
  std::vector<EvaluationResult> results(points.size());
  kernels::for_each_task_serial(points.size(),
                                [&](std::size_t i) { results[i] = evaluate_one(problem, points[i]); });
  return results;
}

Moop::Moop(MoopDefinition defn) : Moop(validate(std::move(defn))) {}

Moop::Moop(Problem problem) : problem_(std::move(problem)) {
  const auto &defn = problem_.definition();
  penalty_ = defn.penalty;
  search_rng_ = make_stream(defn.rng_seed, 0);
  for (std::size_t i = 0; i < problem_.dims().q; ++i)
    acquisition_rngs_.push_back(make_stream(defn.rng_seed, i + 1));
  set_workers(defn.options.workers);
}

CandidateBatch Moop::iterate(int k) {
  if (k < 0)
    throw Error("iterate: negative iteration index");
  if (k == 0)
    return search_batch();
  if (db_.empty())
    throw Error("iterate: empty database at iteration " + std::to_string(k));
  return optimizer_batch(k);
}

CandidateBatch Moop::search_batch() {
  const auto &plan = problem_.plan();
  const std::size_t l = problem_.dims().l;
  CandidateBatch batch;
  batch.iteration = 0;
  auto duplicate = [&](const LatentPoint &zz) {
    if (db_.contains_near(zz, problem_.definition().options.duplicate_tol))
      return true;
    for (const auto &c : batch.points) {
      double d = 0.0;
      for (std::size_t k = 0; k < l; ++k)
        d = std::max(d, std::abs(c.latent[k] - zz[k]));
      if (d <= problem_.definition().options.duplicate_tol)
        return true;
    }
    return false;
  };

  for (auto z : lhs_search(problem_.dims().q0, l, search_rng_)) {
    DesignPoint x = plan.extract(z);
    LatentPoint zz = plan.embed(x);
    // Rounding can collapse search points in discrete spaces.
    for (int t = 0; t < kSearchRedraws && duplicate(zz); ++t) {
      for (auto &v : z)
        v = uniform01(search_rng_);
      x = plan.extract(z);
      zz = plan.embed(x);
    }
    if (duplicate(zz)) {
      warn("search point dropped: no distinct design found");
      continue;
    }
    batch.points.push_back({std::move(x), std::move(zz), std::nullopt, false});
  }
  return batch;
}

CandidateBatch Moop::optimizer_batch(int k) {
  const auto &dims = problem_.dims();
  const auto &defn = problem_.definition();
  const auto &plan = problem_.plan();
  const std::size_t neighbors = dims.l + 1;
  const TrustRegionNorm norm = defn.options.trust_region_norm;

  const auto data = db_.latent_points();
  std::vector<std::vector<std::vector<double>>> values;
  std::vector<RbfSurrogate> global;
  bool any_local = false;
  for (std::size_t i = 0; i < defn.simulations.size(); ++i) {
    const auto &sim = defn.simulations[i];
    values.push_back(db_.outputs_block(problem_.sim_offsets()[i], sim.output_dim));
    try {
      global.push_back(RbfSurrogate::fit(data, values.back(), sim.surrogate.mode));
    } catch (const NumericalError &e) {
      throw NumericalError("simulation '" + sim.name + "': " + e.what());
    } catch (const Error &e) {
      throw Error("simulation '" + sim.name + "': " + e.what());
    }
    any_local = any_local || sim.surrogate.mode == SurrogateMode::local;
  }

  const ParetoArchive archive(db_);
  const auto front = archive.objectives();
  std::vector<ScalarizationState> states;
  for (std::size_t i = 0; i < dims.q; ++i)
    states.push_back(refresh(defn.acquisitions[i], problem_.acquisition_weights()[i], dims.o,
                             front, acquisition_rngs_[i], defn.options.kappa,
                             defn.options.epsilon_rho));

  std::vector<SolveResult> solved(dims.q);
  std::vector<std::exception_ptr> failures(dims.q);
  auto solve_one = [&](std::size_t i) {
    try {
      const std::size_t start = select_start(states[i], db_, penalty_.lambda);
      const LatentPoint &z0 = db_[start].latent;
      TrustRegion region =
          trust_region_at(z0, data, neighbors, norm).value_or(TrustRegion{z0, 1.0});
      if (!any_local) {
        solved[i] = solve_subproblem(problem_, states[i], global, z0, region, penalty_.lambda);
        return;
      }
      std::vector<RbfSurrogate> models;
      models.reserve(global.size());
      for (std::size_t s = 0; s < global.size(); ++s) {
        models.push_back(global[s]);
        if (models.back().mode() == SurrogateMode::local)
          region = models.back().set_center(z0, data, values[s], neighbors, norm);
      }
      solved[i] = solve_subproblem(problem_, states[i], models, z0, region, penalty_.lambda);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (defn.options.parallel_solves)
    kernels::for_each_task(dims.q, workers_, solve_one);
  else
    kernels::for_each_task_serial(dims.q, solve_one);
  for (std::size_t i = 0; i < dims.q; ++i)
    if (failures[i])
      rethrow_with_context(failures[i], i);

  CandidateBatch batch;
  batch.iteration = k;
  auto duplicate = [&](const LatentPoint &zz) {
    if (db_.contains_near(zz, problem_.definition().options.duplicate_tol))
      return true;
    for (const auto &c : batch.points) {
      double d = 0.0;
      for (std::size_t j = 0; j < zz.size(); ++j)
        d = std::max(d, std::abs(c.latent[j] - zz[j]));
      if (d <= problem_.definition().options.duplicate_tol)
        return true;
    }
    return false;
  };
  auto reembed = [&](const LatentPoint &z) { return plan.embed(plan.extract(z)); };

  for (std::size_t i = 0; i < dims.q; ++i) {
    const auto &r = solved[i];
    if (!r.improve_requested) {
      DesignPoint x = plan.extract(r.candidate);
      LatentPoint zz = plan.embed(x);
      if (!duplicate(zz)) {
        batch.points.push_back({std::move(x), std::move(zz), i, false});
        continue;
      }
    }
    const LatentPoint z = improvement_point(
        r.region, data, acquisition_rngs_[i],
        [&](const LatentPoint &cand) { return duplicate(reembed(cand)); });
    DesignPoint x = plan.extract(z);
    LatentPoint zz = plan.embed(x);
    if (duplicate(zz)) {
      warn("acquisition " + std::to_string(i) + ": no distinct improvement point, slot dropped");
      continue;
    }
    batch.points.push_back({std::move(x), std::move(zz), i, true});
  }
  return batch;
}

std::vector<EvaluationResult> Moop::evaluate_batch(const CandidateBatch &batch) {
  std::vector<DesignPoint> xs;
  xs.reserve(batch.size());
  for (const auto &c : batch.points)
    xs.push_back(c.x);
  auto results = evaluate_points(problem_, xs, workers_);
  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].ok)
      warn("evaluation skipped (iteration " + std::to_string(batch.iteration) + ", point " +
           std::to_string(i) + "): " + results[i].error);
  return results;
}

std::vector<std::size_t> Moop::merge(const CandidateBatch &batch,
                                     const std::vector<EvaluationResult> &results) {
  const double tol = problem_.definition().options.feasibility_tol;
  std::vector<std::size_t> index(results.size(), kNoRecord);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok)
      continue;
    try {
      db_.add(problem_, results[i].x, results[i].outputs, batch.iteration, tol);
      index[i] = db_.size() - 1;
    } catch (const NumericalError &e) {
      warn("evaluation skipped (iteration " + std::to_string(batch.iteration) + ", point " +
           std::to_string(i) + "): " + e.what());
    }
  }
  evaluations_ += batch.size();
  return index;
}

void Moop::step() {
  const int k = next_iteration_;
  const CandidateBatch batch = iterate(k);
  const auto results = evaluate_batch(batch);
  const auto index = merge(batch, results);
  if (k >= 1) {
    std::vector<bool> feasible;
    for (std::size_t i = 0; i < batch.size(); ++i)
      if (batch.points[i].acquisition && !batch.points[i].improve && index[i] != kNoRecord)
        feasible.push_back(db_[index[i]].feasible);
    penalty_ = update_penalty(penalty_, feasible);
  }
  next_iteration_ = k + 1;
  if (checkpoint_path_)
    checkpoint_save(*checkpoint_path_);
  if (callback_)
    callback_(*this, batch);
}

ParetoArchive Moop::solve(std::size_t budget) {
  const auto &dims = problem_.dims();
  if (budget < dims.q0)
    throw Error("solve: budget " + std::to_string(budget) + " is below the search size " +
                std::to_string(dims.q0));
  for (;;) {
    const std::size_t next = next_iteration_ == 0 ? dims.q0 : dims.q;
    if (evaluations_ + next > budget)
      break;
    step();
  }
  return archive();
}

} // namespace moso
