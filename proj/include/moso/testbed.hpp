//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moso/problem.hpp"

namespace moso::testbed {

/// DTLZ2 with o objectives on x in [0,1]^n (n >= o). Throws Error when a
/// coordinate is outside [0,1].
std::vector<double> dtlz2(std::span<const double> x, std::size_t o = 3);

/// Wraps `sim` so every call first sleeps Uniform[t_min, t_max] seconds. The
/// sleep durations come from a mutex-guarded generator seeded with `seed`;
/// outputs are those of `sim`.
SimulationFunction delay_wrapper(SimulationFunction sim, double t_min, double t_max,
                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Residual model: 13 inputs, 198 residuals in three classes of 66.

inline constexpr std::size_t kResidualInputs = 13;
inline constexpr std::size_t kResidualOutputs = 198;
inline constexpr std::size_t kResidualClasses = 3;
inline constexpr std::size_t kResidualsPerClass = kResidualOutputs / kResidualClasses;
/// Seed of the generator that fixes every residual coefficient.
inline constexpr std::uint64_t kResidualSeed = 20240607;

struct BoxVariable {
  const char *name;
  double lower;
  double upper;
};

/// Physical bounds of the 13 inputs.
const std::array<BoxVariable, kResidualInputs> &residual_variables();

/// Residuals at u in [0,1]^13 (normalized coordinates).
std::vector<double> residuals_unit(std::span<const double> u);

/// Residuals at a design point holding the 13 inputs in physical units.
std::vector<double> synthetic_residuals(const DesignPoint &x);

/// Per-class sums of squared residuals at a design point.
std::vector<double> synthetic_residuals_summed(const DesignPoint &x);

/// Output indices of class j.
std::vector<std::size_t> residual_class(std::size_t j);

/// Upper bound imposed on each class sum by the constrained formulation.
inline constexpr double kResidualCap = 20.0;

// ---------------------------------------------------------------------------
// Flow-reactor model: T, RT, EQR continuous; solvent, base categorical.

inline constexpr std::array<BoxVariable, 3> kReactorVariables = {{
    {"T", 35.0, 150.0},
    {"RT", 60.0, 300.0},
    {"EQR", 0.8, 1.5},
}};
inline const std::array<const char *, 2> kSolventLevels = {"S1", "S2"};
inline const std::array<const char *, 2> kBaseLevels = {"B1", "B2"};

/// (product, byproduct) in percent for temperature T, residence time RT, equivalence
/// ratio EQR and level indices of solvent and base.
std::array<double, 2> reactor(double T, double RT, double EQR, std::size_t solvent,
                              std::size_t base);

/// Reads (T, RT, EQR, solvent, base) from the first five design values.
std::vector<double> cfr_analog(const DesignPoint &x);
/// (product, byproduct, RT).
std::vector<double> cfr_analog_with_rt(const DesignPoint &x);

/// Largest product over the whole design space.
double reactor_max_product();

/// Smallest RT among points whose product reaches `fraction` of the maximum
/// product; +inf when none does. `points` hold (product, RT).
double min_rt_at_purity(const std::vector<std::array<double, 2>> &points, double fraction = 0.75);

// ---------------------------------------------------------------------------
// Ready-made definitions (no acquisitions; callers add them).

enum class Wiring { structured, black_box };

MoopDefinition dtlz2_problem(std::size_t n = 10, std::size_t o = 3, std::size_t q0 = 200);

/// Three objectives F_j = sum of squared class-j residuals with constraints
/// F_j <= kResidualCap. Structured: one 198-output simulation; black-box:
/// one simulation returning the three sums.
MoopDefinition residual_problem(Wiring wiring, std::size_t q0 = 200);

/// Objectives (-product, byproduct, RT). Structured: the simulation returns
/// (product, byproduct) and RT is read from the design; black-box: the
/// simulation also returns RT.
MoopDefinition reactor_problem(Wiring wiring, std::size_t q0 = 50);

/// DTLZ2 (n=10, o=3) behind a Uniform[t_min, t_max] sleep, 40 search
/// points and a batch of 8 (one equal-weight and seven epsilon-constraint
/// acquisitions). Used for wall-clock scaling runs.
MoopDefinition scaling_problem(double t_min, double t_max, std::uint64_t seed);

/// Names accepted by builtin_simulation.
std::vector<std::string> builtin_names();

/// Evaluator and output count of a built-in simulation by name.
struct Builtin {
  SimulationFunction evaluator;
  std::size_t output_dim;
};
Builtin builtin_simulation(const std::string &name, std::size_t num_variables);

} // namespace moso::testbed
