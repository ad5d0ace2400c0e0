//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moso/design.hpp"
#include "moso/embedding.hpp"

namespace moso {

/// Black-box simulation: design point -> m_i outputs. Must be safe to call
/// from several worker threads at once.
using SimulationFunction = std::function<std::vector<double>(const DesignPoint &)>;

/// Partial derivatives of an algebraic objective or constraint.
/// `dx` has one entry per design variable (ignored for categorical ones),
/// `ds` one entry per concatenated simulation output.
struct AlgebraicGradient {
  std::vector<double> dx;
  std::vector<double> ds;
};

using AlgebraicFunction = std::function<double(const DesignPoint &, std::span<const double>)>;
using AlgebraicGradientFunction =
    std::function<AlgebraicGradient(const DesignPoint &, std::span<const double>)>;

struct SearchConfig {
  /// Size of the initial Latin hypercube design.
  std::size_t size = 0;
};

enum class SurrogateMode { global, local };

struct SurrogateConfig {
  SurrogateMode mode = SurrogateMode::global;
};

struct SimulationSpec {
  std::string name;
  std::size_t output_dim = 0;
  SimulationFunction evaluator;
  SearchConfig search;
  SurrogateConfig surrogate;
};

/// F_j(x, s); value <= 0 means satisfied when used as a constraint.
struct ObjectiveSpec {
  std::string name;
  AlgebraicFunction func;
  AlgebraicGradientFunction grad; // optional
};

using ConstraintSpec = ObjectiveSpec;

enum class AcquisitionKind { fixed_weight, random_weight, random_epsilon_constraint };

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::fixed_weight;
  /// Only for fixed_weight; normalized to sum to one during validation.
  std::vector<double> weights;

  static AcquisitionSpec fixed(std::vector<double> weights) {
    return {AcquisitionKind::fixed_weight, std::move(weights)};
  }
  static AcquisitionSpec random_weight() { return {AcquisitionKind::random_weight, {}}; }
  static AcquisitionSpec epsilon_constraint() {
    return {AcquisitionKind::random_epsilon_constraint, {}};
  }
};

/// Exponential penalty schedule for relaxable constraints.
struct PenaltyState {
  double lambda = 1.0;
  double growth = 2.0;
  double cap = 1e8;

  friend bool operator==(const PenaltyState &, const PenaltyState &) = default;
};

/// Distance used for trust-region radii: the (l+1)-th nearest-neighbor
/// distance is measured in this norm.
enum class TrustRegionNorm { euclidean, max };

/// Tunables of the iteration loop. Defaults match the documented solver.
struct SolverOptions {
  std::size_t inner_iterations = 100;
  double projected_gradient_tol = 1e-8;
  double armijo = 1e-4;
  double sufficient_decrease = 1e-8;
  double kappa = 0.0;       // exploration weight on surrogate uncertainty
  double epsilon_rho = 100; // exact-penalty weight of epsilon-constraint targets
  double feasibility_tol = 1e-8;
  double fd_step = 1e-6;
  double duplicate_tol = 1e-8; // max-norm latent distance treated as the same point
  TrustRegionNorm trust_region_norm = TrustRegionNorm::euclidean;
  std::size_t workers = 1;
  bool parallel_solves = false;
};

struct MoopDefinition {
  std::vector<DesignVariable> variables;
  std::vector<SimulationSpec> simulations;
  std::vector<ObjectiveSpec> objectives;
  std::vector<ConstraintSpec> constraints;
  std::vector<AcquisitionSpec> acquisitions;
  PenaltyState penalty;
  std::uint64_t rng_seed = 0;
  SolverOptions options;
};

struct ProblemDims {
  std::size_t n = 0; // design variables
  std::size_t m = 0; // total simulation outputs
  std::size_t o = 0; // objectives
  std::size_t p = 0; // constraints
  std::size_t q = 0; // acquisitions (batch size)
  std::size_t l = 0; // latent dimension
  std::size_t q0 = 0; // initial search size

  friend bool operator==(const ProblemDims &, const ProblemDims &) = default;
};

/// A validated, immutable MOSO problem with its embedding and cached sizes.
class Problem {
public:
  const MoopDefinition &definition() const noexcept { return *defn_; }
  const ProblemDims &dims() const noexcept { return dims_; }
  const std::shared_ptr<const DesignSpace> &space() const noexcept { return space_; }
  const EmbeddingPlan &plan() const noexcept { return *plan_; }
  /// Offset of each simulation's block inside the concatenated output vector.
  const std::vector<std::size_t> &sim_offsets() const noexcept { return sim_offsets_; }
  /// Normalized fixed weights per acquisition (empty for random kinds).
  const std::vector<std::vector<double>> &acquisition_weights() const noexcept {
    return weights_;
  }

  DesignPoint point(std::vector<double> values) const { return DesignPoint(space_, std::move(values)); }

private:
  friend Problem validate(MoopDefinition defn);

  std::shared_ptr<const MoopDefinition> defn_;
  std::shared_ptr<const DesignSpace> space_;
  std::shared_ptr<const EmbeddingPlan> plan_;
  ProblemDims dims_;
  std::vector<std::size_t> sim_offsets_;
  std::vector<std::vector<double>> weights_;
};

/// Checks every invariant of the definition. Throws ValidationError with the
/// full list of problems found.
Problem validate(MoopDefinition defn);

/// Throws NumericalError naming the objective index on a non-finite value.
std::vector<double> eval_objectives(const Problem &problem, const DesignPoint &x,
                                    std::span<const double> s);
std::vector<double> eval_constraints(const Problem &problem, const DesignPoint &x,
                                     std::span<const double> s);

bool is_feasible(std::span<const double> constraints, double tol = 0.0);

/// Sum of positive parts of the constraint values.
double constraint_violation(std::span<const double> constraints);

/// Gradient of one algebraic function; uses the supplied gradient when
/// present, else forward differences with step `h` (scaled by variable range
/// for design inputs, by max(1,|s_i|) for simulation outputs).
AlgebraicGradient algebraic_gradient(const Problem &problem, const ObjectiveSpec &spec,
                                     const DesignPoint &x, std::span<const double> s, double h);

} // namespace moso
