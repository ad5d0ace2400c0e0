//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/testbed.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "moso/error.hpp"
#include "moso/forms.hpp"
#include "moso/random.hpp"

namespace moso::testbed {

std::vector<double> dtlz2(std::span<const double> x, std::size_t o) {
  const std::size_t n = x.size();
  if (o < 1 || n < o)
    throw Error("dtlz2: need n >= o >= 1");
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error("dtlz2: input outside [0,1]");
  double g = 0.0;
  for (std::size_t i = o - 1; i < n; ++i)
    g += (x[i] - 0.5) * (x[i] - 0.5);
  const double half_pi = std::numbers::pi / 2.0;
  std::vector<double> f(o, 1.0 + g);
  for (std::size_t k = 0; k < o; ++k) {
    // f_k uses cos of the first o-1-k angles and sin of the next one.
    for (std::size_t j = 0; j + 1 + k < o; ++j)
      f[k] *= std::cos(x[j] * half_pi);
    if (k > 0)
      f[k] *= std::sin(x[o - 1 - k] * half_pi);
  }
  return f;
}

SimulationFunction delay_wrapper(SimulationFunction sim, double t_min, double t_max,
                                 std::uint64_t seed) {
  if (!(t_min >= 0.0 && t_min <= t_max))
    throw Error("delay_wrapper: need 0 <= t_min <= t_max");
  struct Clock {
    std::mutex mu;
    Rng rng;
  };
  auto clock = std::make_shared<Clock>();
  clock->rng = make_stream(seed, 0);
  return [sim = std::move(sim), clock, t_min, t_max](const DesignPoint &x) {
    double t;
    {
      std::lock_guard lock(clock->mu);
      t = uniform(clock->rng, t_min, t_max);
    }
    if (t > 0.0)
      std::this_thread::sleep_for(std::chrono::duration<double>(t));
    return sim(x);
  };
}

// ---------------------------------------------------------------------------

namespace {

// R_i(u) = sin(a_i.u + b_i) + 0.1 (|u - c_i|^2 - d_i). Within class j,
// b_i = beta_i - a_i.x*_j and d_i = |x*_j - c_i|^2, so every residual of the
// class is small (|R_i| = |sin beta_i| <= 0.1) at the class optimum x*_j.
struct ResidualCoefficients {
  std::array<std::array<double, kResidualInputs>, kResidualClasses> optimum;
  std::vector<std::array<double, kResidualInputs>> a, c;
  std::vector<double> b, d;
};

const ResidualCoefficients &residual_coefficients() {
  static const ResidualCoefficients coef = [] {
    ResidualCoefficients r;
    Rng rng = make_stream(kResidualSeed, 0);
    const double scale = 3.0 / std::sqrt(static_cast<double>(kResidualInputs));
    for (auto &opt : r.optimum)
      for (auto &v : opt)
        v = uniform(rng, 0.2, 0.8);
    r.a.resize(kResidualOutputs);
    r.c.resize(kResidualOutputs);
    r.b.resize(kResidualOutputs);
    r.d.resize(kResidualOutputs);
    for (std::size_t i = 0; i < kResidualOutputs; ++i) {
      const auto &opt = r.optimum[i / kResidualsPerClass];
      double dot = 0.0, dist = 0.0;
      for (std::size_t k = 0; k < kResidualInputs; ++k) {
        r.a[i][k] = scale * uniform(rng, -1.0, 1.0);
        dot += r.a[i][k] * opt[k];
      }
      r.b[i] = uniform(rng, -0.1, 0.1) - dot;
      for (std::size_t k = 0; k < kResidualInputs; ++k) {
        r.c[i][k] = opt[k] + uniform(rng, -0.15, 0.15);
        dist += (opt[k] - r.c[i][k]) * (opt[k] - r.c[i][k]);
      }
      r.d[i] = dist;
    }
    return r;
  }();
  return coef;
}

} // namespace

const std::array<BoxVariable, kResidualInputs> &residual_variables() {
  static const std::array<BoxVariable, kResidualInputs> vars = {{
      {"rho_eq", 0.146, 0.167},
      {"E_A", -16.21, -15.50},
      {"K", 137.2, 234.4},
      {"J", 19.5, 37.0},
      {"L", 2.20, 69.6},
      {"h2v", 0.0, 100.0},
      {"a_s_minus", 0.418, 0.706},
      {"h_nabla_s", 0.0, 0.516},
      {"kappa", 0.076, 0.216},
      {"kappa_prime", -0.892, 0.982},
      {"f_xi_ex", -4.62, -4.38},
      {"h_xi_plus", 3.94, 4.27},
      {"h_xi_nabla", -0.96, 3.66},
  }};
  return vars;
}

std::vector<double> residuals_unit(std::span<const double> u) {
  if (u.size() != kResidualInputs)
    throw Error("synthetic_residuals: expected 13 inputs");
  const auto &coef = residual_coefficients();
  std::vector<double> r(kResidualOutputs);
  for (std::size_t i = 0; i < kResidualOutputs; ++i) {
    double dot = coef.b[i], dist = 0.0;
    for (std::size_t k = 0; k < kResidualInputs; ++k) {
      dot += coef.a[i][k] * u[k];
      dist += (u[k] - coef.c[i][k]) * (u[k] - coef.c[i][k]);
    }
    r[i] = std::sin(dot) + 0.1 * (dist - coef.d[i]);
  }
  return r;
}

std::vector<double> synthetic_residuals(const DesignPoint &x) {
  if (x.size() < kResidualInputs)
    throw Error("synthetic_residuals: expected 13 design values");
  const auto &vars = residual_variables();
  std::array<double, kResidualInputs> u;
  for (std::size_t k = 0; k < kResidualInputs; ++k)
    u[k] = (x[k] - vars[k].lower) / (vars[k].upper - vars[k].lower);
  return residuals_unit(u);
}

std::vector<double> synthetic_residuals_summed(const DesignPoint &x) {
  const auto r = synthetic_residuals(x);
  std::vector<double> sums(kResidualClasses, 0.0);
  // Same accumulation order as forms::sum_of_squares over residual_class(j).
  for (std::size_t j = 0; j < kResidualClasses; ++j)
    for (std::size_t i : residual_class(j))
      sums[j] += r[i] * r[i];
  return sums;
}

std::vector<std::size_t> residual_class(std::size_t j) {
  std::vector<std::size_t> idx(kResidualsPerClass);
  for (std::size_t i = 0; i < kResidualsPerClass; ++i)
    idx[i] = j * kResidualsPerClass + i;
  return idx;
}

// ---------------------------------------------------------------------------

namespace {

// Yield and side-product scale per (solvent, base) combination, row-major.
// Percent of the limiting reagent.
constexpr std::array<double, 4> kProductScale = {70.0, 85.0, 100.0, 80.0};
constexpr std::array<double, 4> kByproductScale = {30.0, 20.0, 25.0, 40.0};

double selectivity(double T) { return std::exp(-std::pow((T - 110.0) / 45.0, 2)); }
double time_constant(double T) { return 300.0 * std::exp(-(T - 35.0) / 80.0); }
double ratio_factor(double EQR) { return std::exp(-std::pow((EQR - 1.15) / 0.5, 2)); }
double side_rate(double T) { return std::exp(-std::pow((T - 130.0) / 40.0, 2)); }

} // namespace

std::array<double, 2> reactor(double T, double RT, double EQR, std::size_t solvent,
                              std::size_t base) {
  if (solvent > 1 || base > 1)
    throw Error("cfr_analog: illegal level");
  const std::size_t combo = solvent * 2 + base;
  const double product =
      kProductScale[combo] * selectivity(T) * (1.0 - std::exp(-RT / time_constant(T))) *
      ratio_factor(EQR);
  const double byproduct = kByproductScale[combo] * side_rate(T) * RT / 300.0;
  return {product, byproduct};
}

namespace {

std::array<double, 2> reactor_at(const DesignPoint &x) {
  if (x.size() < 5)
    throw Error("cfr_analog: expected (T, RT, EQR, solvent, base)");
  const double sv = x[3], bv = x[4];
  if (sv != std::round(sv) || bv != std::round(bv) || sv < 0 || bv < 0)
    throw Error("cfr_analog: illegal level");
  return reactor(x[0], x[1], x[2], static_cast<std::size_t>(sv), static_cast<std::size_t>(bv));
}

} // namespace

std::vector<double> cfr_analog(const DesignPoint &x) {
  const auto v = reactor_at(x);
  return {v[0], v[1]};
}

std::vector<double> cfr_analog_with_rt(const DesignPoint &x) {
  const auto v = reactor_at(x);
  return {v[0], v[1], x[1]};
}

double reactor_max_product() {
  // Product grows with RT and peaks at EQR = 1.15 and in the best
  // combination, leaving a 1-D search over T.
  static const double best = [] {
    const auto [lo, hi] = std::pair{kReactorVariables[0].lower, kReactorVariables[0].upper};
    const double rt = kReactorVariables[1].upper;
    double best_v = 0.0, best_t = lo;
    const int grid = 100000;
    for (int i = 0; i <= grid; ++i) {
      const double T = lo + (hi - lo) * i / grid;
      const double v = reactor(T, rt, 1.15, 1, 0)[0];
      if (v > best_v) {
        best_v = v;
        best_t = T;
      }
    }
    // Golden-section polish around the grid maximum.
    double a = std::max(lo, best_t - (hi - lo) / grid), b = std::min(hi, best_t + (hi - lo) / grid);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double c = b - phi * (b - a), d = a + phi * (b - a);
      if (reactor(c, rt, 1.15, 1, 0)[0] > reactor(d, rt, 1.15, 1, 0)[0])
        b = d;
      else
        a = c;
    }
    return std::max(best_v, reactor(0.5 * (a + b), rt, 1.15, 1, 0)[0]);
  }();
  return best;
}

double min_rt_at_purity(const std::vector<std::array<double, 2>> &points, double fraction) {
  const double threshold = fraction * reactor_max_product();
  double best = std::numeric_limits<double>::infinity();
  for (const auto &[product, rt] : points)
    if (product >= threshold)
      best = std::min(best, rt);
  return best;
}

// ---------------------------------------------------------------------------

MoopDefinition dtlz2_problem(std::size_t n, std::size_t o, std::size_t q0) {
  MoopDefinition d;
  for (std::size_t i = 0; i < n; ++i)
    d.variables.push_back(DesignVariable::continuous("x" + std::to_string(i + 1), 0.0, 1.0));
  SimulationSpec sim;
  sim.name = "dtlz2";
  sim.output_dim = o;
  sim.evaluator = [o](const DesignPoint &x) { return dtlz2(x.values(), o); };
  sim.search.size = q0;
  d.simulations.push_back(std::move(sim));
  for (std::size_t j = 0; j < o; ++j)
    d.objectives.push_back(forms::identity("f" + std::to_string(j + 1), j));
  return d;
}

MoopDefinition residual_problem(Wiring wiring, std::size_t q0) {
  MoopDefinition d;
  for (const auto &v : residual_variables())
    d.variables.push_back(DesignVariable::continuous(v.name, v.lower, v.upper));
  SimulationSpec sim;
  sim.search.size = q0;
  sim.surrogate.mode = SurrogateMode::local;
  if (wiring == Wiring::structured) {
    sim.name = "residuals";
    sim.output_dim = kResidualOutputs;
    sim.evaluator = synthetic_residuals;
  } else {
    sim.name = "residual_sums";
    sim.output_dim = kResidualClasses;
    sim.evaluator = synthetic_residuals_summed;
  }
  d.simulations.push_back(std::move(sim));
  for (std::size_t j = 0; j < kResidualClasses; ++j) {
    const std::string name = "class" + std::to_string(j + 1);
    if (wiring == Wiring::structured) {
      d.objectives.push_back(forms::sum_of_squares(name, residual_class(j)));
      d.constraints.push_back(forms::sum_of_squares(name + "_cap", residual_class(j), kResidualCap));
    } else {
      d.objectives.push_back(forms::identity(name, j));
      d.constraints.push_back(forms::linear(name + "_cap", {{{j, 1.0}}, {}, -kResidualCap}));
    }
  }
  return d;
}

MoopDefinition reactor_problem(Wiring wiring, std::size_t q0) {
  MoopDefinition d;
  for (const auto &v : kReactorVariables)
    d.variables.push_back(DesignVariable::continuous(v.name, v.lower, v.upper));
  d.variables.push_back(
      DesignVariable::categorical("solvent", {kSolventLevels[0], kSolventLevels[1]}));
  d.variables.push_back(DesignVariable::categorical("base", {kBaseLevels[0], kBaseLevels[1]}));
  SimulationSpec sim;
  sim.search.size = q0;
  if (wiring == Wiring::structured) {
    sim.name = "reactor";
    sim.output_dim = 2;
    sim.evaluator = cfr_analog;
  } else {
    sim.name = "reactor_with_rt";
    sim.output_dim = 3;
    sim.evaluator = cfr_analog_with_rt;
  }
  d.simulations.push_back(std::move(sim));
  d.objectives.push_back(forms::linear("neg_product", {{{0, -1.0}}, {}, 0.0}));
  d.objectives.push_back(forms::identity("byproduct", 1));
  if (wiring == Wiring::structured)
    d.objectives.push_back(forms::design_value("RT", 1));
  else
    d.objectives.push_back(forms::identity("RT", 2));
  return d;
}

MoopDefinition scaling_problem(double t_min, double t_max, std::uint64_t seed) {
  MoopDefinition d = dtlz2_problem(10, 3, 40);
  d.simulations[0].evaluator = delay_wrapper(d.simulations[0].evaluator, t_min, t_max, seed);
  d.acquisitions.push_back(AcquisitionSpec::fixed({1.0, 1.0, 1.0}));
  for (int i = 0; i < 7; ++i)
    d.acquisitions.push_back(AcquisitionSpec::epsilon_constraint());
  d.rng_seed = seed;
  return d;
}

std::vector<std::string> builtin_names() {
  return {"dtlz2", "synthetic_residuals", "synthetic_residuals_summed", "cfr_analog",
          "cfr_analog_with_rt"};
}

Builtin builtin_simulation(const std::string &name, std::size_t num_variables) {
  if (name == "dtlz2")
    return {[](const DesignPoint &x) { return dtlz2(x.values(), 3); }, 3};
  if (name.rfind("dtlz2_", 0) == 0) {
    const std::size_t o = std::stoul(name.substr(6));
    if (o < 1 || o > num_variables)
      throw Error("dtlz2: need 1 <= objectives <= variables");
    return {[o](const DesignPoint &x) { return dtlz2(x.values(), o); }, o};
  }
  if (name == "synthetic_residuals")
    return {synthetic_residuals, kResidualOutputs};
  if (name == "synthetic_residuals_summed")
    return {synthetic_residuals_summed, kResidualClasses};
  if (name == "cfr_analog")
    return {cfr_analog, 2};
  if (name == "cfr_analog_with_rt")
    return {cfr_analog_with_rt, 3};
  throw Error("unknown simulation '" + name + "'");
}

} // namespace moso::testbed
