//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "moso/log.hpp"

namespace moso {

namespace {

void check_unique(const std::vector<std::string> &names, const std::string &what,
                  std::vector<std::string> &errs) {
  std::set<std::string> seen;
  for (const auto &n : names) {
    if (n.empty())
      errs.push_back(what + " with empty name");
    else if (!seen.insert(n).second)
      errs.push_back("duplicate names: " + what + " '" + n + "'");
  }
}

template <class Spec>
std::vector<std::string> names_of(const std::vector<Spec> &specs) {
  std::vector<std::string> out;
  for (const auto &s : specs)
    out.push_back(s.name);
  return out;
}

std::vector<double> eval_algebraic(const std::vector<ObjectiveSpec> &specs, const char *what,
                                   const DesignPoint &x, std::span<const double> s) {
  std::vector<double> out(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    out[j] = specs[j].func(x, s);
    if (!std::isfinite(out[j]))
      throw NumericalError(std::string("non-finite ") + what + " value at index " +
                           std::to_string(j) + " ('" + specs[j].name + "')");
  }
  return out;
}

} // namespace

Problem validate(MoopDefinition defn) {
  std::vector<std::string> errs;

  std::vector<std::string> var_names;
  for (const auto &v : defn.variables) {
    auto e = DesignSpace::check(v);
    errs.insert(errs.end(), e.begin(), e.end());
    var_names.push_back(v.name);
  }
  check_unique(var_names, "variable", errs);
  if (defn.variables.empty())
    errs.push_back("empty design space");

  check_unique(names_of(defn.simulations), "simulation", errs);
  check_unique(names_of(defn.objectives), "objective", errs);
  check_unique(names_of(defn.constraints), "constraint", errs);

  for (const auto &sim : defn.simulations) {
    if (sim.output_dim == 0)
      errs.push_back("simulation '" + sim.name + "': output_dim must be >= 1");
    if (!sim.evaluator)
      errs.push_back("simulation '" + sim.name + "': missing evaluator");
  }
  if (defn.objectives.empty())
    errs.push_back("empty objectives");
  for (const auto &f : defn.objectives)
    if (!f.func)
      errs.push_back("objective '" + f.name + "': missing function");
  for (const auto &g : defn.constraints)
    if (!g.func)
      errs.push_back("constraint '" + g.name + "': missing function");

  const std::size_t o = defn.objectives.size();
  std::vector<std::vector<double>> weights;
  if (defn.acquisitions.empty())
    errs.push_back("empty acquisitions");
  for (std::size_t i = 0; i < defn.acquisitions.size(); ++i) {
    const auto &a = defn.acquisitions[i];
    if (a.kind != AcquisitionKind::fixed_weight) {
      weights.emplace_back();
      continue;
    }
    const std::string who = "acquisition " + std::to_string(i) + ": ";
    if (a.weights.size() != o) {
      errs.push_back(who + "weights length differs from number of objectives");
      weights.emplace_back();
      continue;
    }
    double sum = 0.0;
    bool ok = true;
    for (double w : a.weights) {
      if (!(w >= 0.0) || !std::isfinite(w))
        ok = false;
      sum += w;
    }
    if (!ok || !(sum > 0.0)) {
      errs.push_back(who + "weights must be nonnegative with positive sum");
      weights.emplace_back();
      continue;
    }
    std::vector<double> w(a.weights);
    for (double &wi : w)
      wi /= sum;
    weights.push_back(std::move(w));
  }

  const auto &pen = defn.penalty;
  if (!(pen.growth > 1.0))
    errs.push_back("penalty growth must be > 1");
  if (!(pen.lambda >= 1.0 && pen.lambda <= pen.cap))
    errs.push_back("penalty lambda must lie in [1, cap]");

  const auto &opt = defn.options;
  if (opt.inner_iterations == 0)
    errs.push_back("solver inner_iterations must be >= 1");
  if (!(opt.projected_gradient_tol >= 0.0) || !(opt.sufficient_decrease >= 0.0) ||
      !(opt.feasibility_tol >= 0.0) || !(opt.duplicate_tol >= 0.0))
    errs.push_back("solver tolerances must be >= 0");
  if (!(opt.armijo > 0.0 && opt.armijo < 1.0))
    errs.push_back("solver armijo constant must lie in (0, 1)");
  if (!(opt.fd_step > 0.0))
    errs.push_back("solver fd_step must be > 0");
  if (!(opt.kappa >= 0.0))
    errs.push_back("solver kappa must be >= 0");
  if (!(opt.epsilon_rho > 0.0))
    errs.push_back("solver epsilon_rho must be > 0");

  std::size_t q0 = 0;
  for (const auto &sim : defn.simulations)
    q0 = std::max(q0, sim.search.size);
  if (!defn.simulations.empty() && q0 == 0)
    errs.push_back("initial search size must be >= 1");

  if (!errs.empty())
    throw ValidationError(std::move(errs));

  if (defn.simulations.empty())
    warn("problem has no simulations; every objective is purely algebraic");

  Problem p;
  p.space_ = std::make_shared<const DesignSpace>(defn.variables);
  p.plan_ = std::make_shared<const EmbeddingPlan>(p.space_);
  p.dims_.n = defn.variables.size();
  for (const auto &sim : defn.simulations) {
    p.sim_offsets_.push_back(p.dims_.m);
    p.dims_.m += sim.output_dim;
  }
  p.dims_.o = o;
  p.dims_.p = defn.constraints.size();
  p.dims_.q = defn.acquisitions.size();
  p.dims_.l = p.plan_->latent_dim();
  p.dims_.q0 = q0;
  p.weights_ = std::move(weights);
  p.defn_ = std::make_shared<const MoopDefinition>(std::move(defn));
  return p;
}

std::vector<double> eval_objectives(const Problem &problem, const DesignPoint &x,
                                    std::span<const double> s) {
  if (s.size() != problem.dims().m)
    throw Error("eval_objectives: expected " + std::to_string(problem.dims().m) +
                " simulation outputs");
  return eval_algebraic(problem.definition().objectives, "objective", x, s);
}

std::vector<double> eval_constraints(const Problem &problem, const DesignPoint &x,
                                     std::span<const double> s) {
  if (s.size() != problem.dims().m)
    throw Error("eval_constraints: expected " + std::to_string(problem.dims().m) +
                " simulation outputs");
  return eval_algebraic(problem.definition().constraints, "constraint", x, s);
}

bool is_feasible(std::span<const double> constraints, double tol) {
  return std::all_of(constraints.begin(), constraints.end(), [tol](double g) { return g <= tol; });
}

double constraint_violation(std::span<const double> constraints) {
  double v = 0.0;
  for (double g : constraints)
    v += std::max(g, 0.0);
  return v;
}

AlgebraicGradient algebraic_gradient(const Problem &problem, const ObjectiveSpec &spec,
                                     const DesignPoint &x, std::span<const double> s, double h) {
  if (spec.grad) {
    auto g = spec.grad(x, s);
    if (g.dx.size() != x.size() || g.ds.size() != s.size())
      throw Error("gradient of '" + spec.name + "' has the wrong shape");
    return g;
  }
  AlgebraicGradient g{std::vector<double>(x.size(), 0.0), std::vector<double>(s.size(), 0.0)};
  const double f0 = spec.func(x, s);
  const auto &space = problem.space();
  std::vector<double> xv(x.values().begin(), x.values().end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto &v = (*space)[i];
    if (v.kind != VariableKind::continuous && v.kind != VariableKind::integer)
      continue;
    const double range = v.upper - v.lower;
    if (range <= 0)
      continue;
    double step = h * range;
    if (xv[i] + step > v.upper)
      step = -step;
    const double saved = xv[i];
    xv[i] = saved + step;
    g.dx[i] = (spec.func(DesignPoint(space, xv), s) - f0) / step;
    xv[i] = saved;
  }
  std::vector<double> sv(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(sv[i]));
    const double saved = sv[i];
    sv[i] = saved + step;
    g.ds[i] = (spec.func(x, sv) - f0) / step;
    sv[i] = saved;
  }
  return g;
}

} // namespace moso
