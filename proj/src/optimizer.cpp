//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace moso {

namespace {

// Relative distance from an epsilon bound treated as sitting on it.
constexpr double kKinkTol = 1e-6;

} // namespace

PenalizedObjective::PenalizedObjective(const Problem &problem, const ScalarizationState &state,
                                       std::span<const RbfSurrogate> surrogates, double lambda)
    : problem_(problem), state_(state), surrogates_(surrogates), lambda_(lambda),
      design_scale_(problem.plan().design_scale()) {
  if (surrogates_.size() != problem.definition().simulations.size())
    throw Error("penalized objective: need one surrogate per simulation");
}

std::vector<double> PenalizedObjective::predict(std::span<const double> z) const {
  std::vector<double> s(problem_.dims().m);
  for (std::size_t i = 0; i < surrogates_.size(); ++i) {
    const auto v = surrogates_[i].evaluate(z);
    std::copy(v.begin(), v.end(), s.begin() + static_cast<std::ptrdiff_t>(problem_.sim_offsets()[i]));
  }
  return s;
}

double PenalizedObjective::uncertainty_term(std::span<const double> z, std::span<const double> s,
                                            const DesignPoint &x) const {
  // Linearized propagation |dF_j/ds| . sigma_s of the surrogate uncertainty.
  std::vector<double> sigma_s(problem_.dims().m);
  for (std::size_t i = 0; i < surrogates_.size(); ++i) {
    const auto u = surrogates_[i].uncertainty(z);
    std::copy(u.begin(), u.end(),
              sigma_s.begin() + static_cast<std::ptrdiff_t>(problem_.sim_offsets()[i]));
  }
  const auto &objs = problem_.definition().objectives;
  const double h = problem_.definition().options.fd_step;
  double term = 0.0;
  for (std::size_t j = 0; j < objs.size(); ++j) {
    const auto g = algebraic_gradient(problem_, objs[j], x, s, h);
    double sj = 0.0;
    for (std::size_t k = 0; k < sigma_s.size(); ++k)
      sj += std::abs(g.ds[k]) * sigma_s[k];
    term += state_.weights[j] * sj;
  }
  return state_.kappa * term;
}

double PenalizedObjective::operator()(std::span<const double> z, std::vector<double> *grad) const {
  const auto &dims = problem_.dims();
  const auto &defn = problem_.definition();
  const DesignPoint x = problem_.plan().extract(z);

  std::vector<RbfSurrogate::Evaluation> evals;
  evals.reserve(surrogates_.size());
  std::vector<double> s(dims.m);
  for (std::size_t i = 0; i < surrogates_.size(); ++i) {
    evals.push_back(surrogates_[i].evaluate_cached(z));
    std::copy(evals.back().value.begin(), evals.back().value.end(),
              s.begin() + static_cast<std::ptrdiff_t>(problem_.sim_offsets()[i]));
  }

  const auto F = eval_objectives(problem_, x, s);
  const auto G = eval_constraints(problem_, x, s);
  const double penalty = lambda_ * constraint_violation(G);
  std::vector<double> f(F);
  for (double &fj : f)
    fj += penalty;

  double value = scalarize(state_, f);
  const bool explore = state_.weighted() && state_.kappa != 0.0;
  if (explore)
    value -= uncertainty_term(z, s, x);
  if (!std::isfinite(value))
    throw NumericalError("penalized objective is not finite");
  if (!grad)
    return value;

  const double h = defn.options.fd_step;
  // Latent gradient of sum_j d_j f_j; linear in d.
  auto latent_grad = [&](const std::vector<double> &d) {
    double dsum = 0.0;
    for (double dj : d)
      dsum += dj;
    std::vector<double> gs(dims.m, 0.0), gx(dims.n, 0.0);
    auto accumulate = [&](const ObjectiveSpec &spec, double weight) {
      if (weight == 0.0)
        return;
      const auto g = algebraic_gradient(problem_, spec, x, s, h);
      for (std::size_t k = 0; k < dims.m; ++k)
        gs[k] += weight * g.ds[k];
      for (std::size_t k = 0; k < dims.n; ++k)
        gx[k] += weight * g.dx[k];
    };
    for (std::size_t j = 0; j < defn.objectives.size(); ++j)
      accumulate(defn.objectives[j], d[j]);
    for (std::size_t i = 0; i < defn.constraints.size(); ++i)
      if (G[i] > 0.0)
        accumulate(defn.constraints[i], dsum * lambda_);

    std::vector<double> out(dims.l, 0.0);
    for (std::size_t i = 0; i < surrogates_.size(); ++i) {
      const std::size_t off = problem_.sim_offsets()[i];
      const auto gi = surrogates_[i].vjp(
          z, evals[i], std::span<const double>(gs).subspan(off, surrogates_[i].outputs()));
      for (std::size_t k = 0; k < dims.l; ++k)
        out[k] += gi[k];
    }
    for (const auto &b : problem_.plan().blocks()) {
      if (b.rule == EmbeddingPlan::Rule::continuous_rescale ||
          b.rule == EmbeddingPlan::Rule::integer_rescale)
        out[b.offset] += gx[b.variable] * design_scale_[b.variable];
    }
    return out;
  };

  auto d = scalarize_gradient(state_, f);
  std::vector<std::size_t> kinks;
  if (!state_.weighted()) {
    for (std::size_t j = 0; j < f.size(); ++j)
      if (j != state_.target &&
          std::abs(f[j] - state_.bounds[j]) <= kKinkTol * std::max(1.0, std::abs(state_.bounds[j]))) {
        kinks.push_back(j);
        d[j] = 0.0;
      }
  }
  *grad = latent_grad(d);
  if (!kinks.empty()) {
    // At max(f_j - eps_j, 0) = 0 use the least-norm subgradient
    // grad + sum mu_j grad f_j, 0 <= mu_j <= rho (coordinate descent).
    std::vector<std::vector<double>> cols;
    std::vector<double> sq;
    for (std::size_t j : kinks) {
      std::vector<double> e(f.size(), 0.0);
      e[j] = 1.0;
      cols.push_back(latent_grad(e));
      double n2 = 0.0;
      for (double v : cols.back())
        n2 += v * v;
      sq.push_back(n2);
    }
    std::vector<double> mu(kinks.size(), 0.0);
    std::vector<double> &r = *grad;
    for (int sweep = 0; sweep < 200; ++sweep) {
      double moved = 0.0;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (sq[c] == 0.0)
          continue;
        double dot = 0.0;
        for (std::size_t k = 0; k < dims.l; ++k)
          dot += cols[c][k] * r[k];
        const double next = std::clamp(mu[c] - dot / sq[c], 0.0, state_.rho);
        const double step = next - mu[c];
        if (step == 0.0)
          continue;
        for (std::size_t k = 0; k < dims.l; ++k)
          r[k] += step * cols[c][k];
        mu[c] = next;
        moved = std::max(moved, std::abs(step));
      }
      if (moved <= 1e-12 * std::max(1.0, state_.rho))
        break;
    }
  }

  if (explore) {
    // Forward differences of the exploration term only.
    std::vector<double> zp(z.begin(), z.end());
    const double u0 = uncertainty_term(z, s, x);
    for (std::size_t k = 0; k < dims.l; ++k) {
      double step = h;
      if (zp[k] + step > 1.0)
        step = -step;
      const double saved = zp[k];
      zp[k] = saved + step;
      const DesignPoint xp = problem_.plan().extract(zp);
      const double up = uncertainty_term(zp, predict(zp), xp);
      (*grad)[k] -= (up - u0) / step;
      zp[k] = saved;
    }
  }
  return value;
}

PenalizedValue penalized_value(const Problem &problem, const ScalarizationState &state,
                               std::span<const double> z, std::span<const RbfSurrogate> surrogates,
                               double lambda) {
  PenalizedObjective obj(problem, state, surrogates, lambda);
  PenalizedValue out;
  out.value = obj(z, &out.grad);
  return out;
}

BoxMinimizeResult minimize_box(const LatentObjective &f, std::span<const double> z0,
                               std::span<const double> lower, std::span<const double> upper,
                               const BoxMinimizeOptions &opt) {
  using Eigen::VectorXd;
  const auto n = static_cast<Eigen::Index>(z0.size());
  auto project = [&](VectorXd v) {
    for (Eigen::Index k = 0; k < n; ++k)
      v(k) = std::clamp(v(k), lower[static_cast<std::size_t>(k)], upper[static_cast<std::size_t>(k)]);
    return v;
  };
  auto call = [&](const VectorXd &v, VectorXd *g) {
    std::vector<double> gv;
    const double val = f(std::span<const double>(v.data(), static_cast<std::size_t>(n)),
                         g ? &gv : nullptr);
    if (g)
      *g = Eigen::Map<const VectorXd>(gv.data(), n);
    return val;
  };

  VectorXd x = project(Eigen::Map<const VectorXd>(z0.data(), n));
  VectorXd g;
  double fx = call(x, &g);
  BoxMinimizeResult res;
  res.start_value = fx;

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool identity = true;
  bool scaled = false;
  std::size_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    const VectorXd pg = project(x - g) - x;
    if (pg.lpNorm<Eigen::Infinity>() <= opt.projected_gradient_tol)
      break;

    // Variables held at a bound by the gradient stay fixed this iteration.
    Eigen::Array<bool, Eigen::Dynamic, 1> free(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      free(k) = !((x(k) <= lower[ks] && g(k) > 0) || (x(k) >= upper[ks] && g(k) < 0));
    }
    VectorXd gf = free.select(g, 0.0);
    VectorXd d = -(H * gf);
    d = free.select(d, 0.0);
    if (!(g.dot(d) < 0)) {
      H.setIdentity();
      identity = true;
      d = -gf;
    }

    bool accepted = false;
    VectorXd xn, s;
    double fn = fx;
    double alpha = 1.0;
    for (std::size_t bt = 0; bt < opt.max_backtracks; ++bt, alpha *= 0.5) {
      xn = project(x + alpha * d);
      s = xn - x;
      if (s.lpNorm<Eigen::Infinity>() == 0.0)
        break;
      fn = call(xn, nullptr);
      if (std::isfinite(fn) && fn <= fx + opt.armijo * g.dot(s)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (identity)
        break;
      H.setIdentity();
      identity = true;
      continue;
    }

    VectorXd gn;
    fn = call(xn, &gn);
    const VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        H *= sy / y.dot(y);
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n) - rho * y * s.transpose();
      H = V.transpose() * H * V + rho * s * s.transpose();
      identity = false;
    }
    x = xn;
    fx = fn;
    g = gn;
  }

  res.z.assign(x.data(), x.data() + n);
  res.value = fx;
  res.iterations = it;
  return res;
}

SolveResult solve_subproblem(const LatentObjective &f, std::span<const double> z0,
                             const TrustRegion &region, const SolverOptions &options) {
  const std::size_t l = z0.size();
  std::vector<double> lo(l), hi(l);
  for (std::size_t k = 0; k < l; ++k) {
    lo[k] = region.lower(k);
    hi[k] = region.upper(k);
  }
  BoxMinimizeOptions bo;
  bo.max_iterations = options.inner_iterations;
  bo.projected_gradient_tol = options.projected_gradient_tol;
  bo.armijo = options.armijo;
  const auto r = minimize_box(f, z0, lo, hi, bo);

  SolveResult out;
  out.region = region;
  out.start_value = r.start_value;
  out.value = r.value;
  const double required =
      r.start_value - options.sufficient_decrease * std::max(1.0, std::abs(r.start_value));
  if (r.value <= required) {
    out.candidate = r.z;
  } else {
    out.improve_requested = true;
  }
  return out;
}

SolveResult solve_subproblem(const Problem &problem, const ScalarizationState &state,
                             std::span<const RbfSurrogate> surrogates, std::span<const double> z0,
                             const TrustRegion &region, double lambda) {
  PenalizedObjective obj(problem, state, surrogates, lambda);
  return solve_subproblem(obj.as_function(), z0, region, problem.definition().options);
}

} // namespace moso
