//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "moso/acquisition.hpp"
#include "moso/problem.hpp"
#include "moso/surrogate.hpp"

namespace moso {

/// Scalar objective on the latent cube; fills `grad` when it is non-null.
using LatentObjective = std::function<double(std::span<const double> z, std::vector<double> *grad)>;

/// Scalarized surrogate problem with the cumulative constraint penalty
///
///   A( F(E_out(z), S(z)) + lambda * sum_i max(G_i(E_out(z), S(z)), 0),  Sigma(z) )
///
/// where S is given by one fitted surrogate per simulation. Categorical latent
/// blocks enter only through the surrogates, so the relaxation is continuous.
class PenalizedObjective {
public:
  PenalizedObjective(const Problem &problem, const ScalarizationState &state,
                     std::span<const RbfSurrogate> surrogates, double lambda);

  double operator()(std::span<const double> z, std::vector<double> *grad) const;

  /// Simulation outputs predicted at z, concatenated.
  std::vector<double> predict(std::span<const double> z) const;

  LatentObjective as_function() const {
    return [this](std::span<const double> z, std::vector<double> *g) { return (*this)(z, g); };
  }

private:
  double uncertainty_term(std::span<const double> z, std::span<const double> s,
                          const DesignPoint &x) const;

  const Problem &problem_;
  const ScalarizationState &state_;
  std::span<const RbfSurrogate> surrogates_;
  double lambda_;
  std::vector<double> design_scale_;
};

struct PenalizedValue {
  double value;
  std::vector<double> grad;
};

PenalizedValue penalized_value(const Problem &problem, const ScalarizationState &state,
                               std::span<const double> z, std::span<const RbfSurrogate> surrogates,
                               double lambda);

struct BoxMinimizeOptions {
  std::size_t max_iterations = 100;
  double projected_gradient_tol = 1e-8;
  double armijo = 1e-4;
  std::size_t max_backtracks = 40;
};

struct BoxMinimizeResult {
  LatentPoint z;
  double value = 0.0;
  double start_value = 0.0;
  std::size_t iterations = 0;
};

/// Projected BFGS with Armijo backtracking along the projection arc.
/// `z0` is projected onto [lower, upper] first.
BoxMinimizeResult minimize_box(const LatentObjective &f, std::span<const double> z0,
                               std::span<const double> lower, std::span<const double> upper,
                               const BoxMinimizeOptions &options = {});

struct SolveResult {
  bool improve_requested = false;
  LatentPoint candidate; // meaningful when !improve_requested
  TrustRegion region;
  double start_value = 0.0;
  double value = 0.0;
};

/// Minimizes `f` over region ∩ [0,1]^l from z0. Returns a candidate when the
/// final value is at most start - gamma * max(1, |start|); otherwise asks for
/// a model-improvement step in the same region.
SolveResult solve_subproblem(const LatentObjective &f, std::span<const double> z0,
                             const TrustRegion &region, const SolverOptions &options);

SolveResult solve_subproblem(const Problem &problem, const ScalarizationState &state,
                             std::span<const RbfSurrogate> surrogates, std::span<const double> z0,
                             const TrustRegion &region, double lambda);

} // namespace moso
