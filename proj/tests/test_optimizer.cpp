//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include <gtest/gtest.h>

#include "moso/forms.hpp"
#include "moso/optimizer.hpp"

using namespace moso;

namespace {

SimulationSpec sim(std::size_t m) {
  SimulationSpec s;
  s.name = "s";
  s.output_dim = m;
  s.search.size = 3;
  s.evaluator = [m](const DesignPoint &) { return std::vector<double>(m, 0.0); };
  return s;
}

ScalarizationState weights(std::vector<double> w) {
  ScalarizationState s;
  s.kind = AcquisitionKind::fixed_weight;
  s.weights = std::move(w);
  return s;
}

// Problem on [0,1] x [-1,2] with three outputs: F = (s0 + 0.5 b, s1^2 + s0), G = s2 - 0.1.
Problem smooth_problem() {
  MoopDefinition d;
  d.variables = {DesignVariable::continuous("a", 0, 1), DesignVariable::continuous("b", -1, 2)};
  d.simulations.push_back(sim(3));
  d.objectives = {forms::linear("f1", {{{0, 1.0}}, {{1, 0.5}}, 0.0}),
                  forms::linear("f2", {{{0, 1.0}}, {}, 0.0})};
  ObjectiveSpec sq = forms::sum_of_squares("sq", {1});
  d.objectives[1].func = [sq](const DesignPoint &x, std::span<const double> s) {
    return sq.func(x, s) + s[0];
  };
  d.objectives[1].grad = [sq](const DesignPoint &x, std::span<const double> s) {
    auto g = sq.grad(x, s);
    g.ds[0] += 1.0;
    return g;
  };
  d.constraints = {forms::linear("g", {{{2, 1.0}}, {}, -0.1})};
  d.acquisitions.push_back(AcquisitionSpec::fixed({1, 1}));
  return validate(d);
}

std::vector<RbfSurrogate> smooth_surrogates(Rng &rng) {
  std::vector<LatentPoint> z;
  std::vector<std::vector<double>> y;
  for (int i = 0; i < 30; ++i) {
    LatentPoint p = {uniform01(rng), uniform01(rng)};
    y.push_back({std::sin(3 * p[0]) + p[1], std::cos(2 * p[1]) * p[0], p[0] * p[1] - 0.2});
    z.push_back(p);
  }
  return {RbfSurrogate::fit(z, y)};
}

} // namespace

TEST(PenalizedValue, OnePointSurrogate) {
  MoopDefinition d;
  d.variables = {DesignVariable::continuous("x", 0, 1)};
  d.simulations.push_back(sim(1));
  d.objectives = {forms::identity("f", 0)};
  d.acquisitions.push_back(AcquisitionSpec::fixed({1}));
  const auto p = validate(d);
  const LatentPoint z = {0.4};
  const std::vector<RbfSurrogate> s = {RbfSurrogate::fit({z}, {{2.0}})};
  const auto v = penalized_value(p, weights({1.0}), z, s, 1.0);
  EXPECT_NEAR(v.value, 2.0, 1e-12);
  ASSERT_EQ(v.grad.size(), 1u);
  EXPECT_EQ(v.grad[0], 0.0);
}

TEST(PenalizedValue, PenaltyAddedToEveryObjective) {
  MoopDefinition d;
  d.variables = {DesignVariable::continuous("x", 0, 1)};
  d.simulations.push_back(sim(3));
  d.objectives = {forms::identity("f1", 0), forms::identity("f2", 1)};
  d.constraints = {forms::identity("g", 2)};
  d.acquisitions.push_back(AcquisitionSpec::fixed({1, 1}));
  const auto p = validate(d);
  const LatentPoint z = {0.5};
  const std::vector<RbfSurrogate> s = {RbfSurrogate::fit({z}, {{1.0, 2.0, 0.5}})};
  EXPECT_NEAR(penalized_value(p, weights({0.5, 0.5}), z, s, 2.0).value, 2.5, 1e-12);
}

TEST(PenalizedValue, GradientMatchesFiniteDifferences) {
  const auto p = smooth_problem();
  Rng rng = make_stream(31, 0);
  const auto s = smooth_surrogates(rng);
  const double h = 1e-6;
  int checked = 0;
  for (int t = 0; t < 200 && checked < 40; ++t) {
    ScalarizationState st;
    if (t % 2) {
      st = weights({uniform01(rng), uniform01(rng)});
    } else {
      st.kind = AcquisitionKind::random_epsilon_constraint;
      st.target = t % 4 / 2;
      st.bounds = {uniform(rng, -0.5, 1.5), uniform(rng, -0.5, 1.5)};
    }
    const LatentPoint z = {uniform(rng, 0.02, 0.98), uniform(rng, 0.02, 0.98)};
    const double lambda = uniform(rng, 1, 8);
    // Stay away from the kinks of max(., 0).
    PenalizedObjective obj(p, st, s, lambda);
    const auto sv = obj.predict(z);
    const auto x = p.plan().extract(z);
    const auto F = eval_objectives(p, x, sv);
    const auto G = eval_constraints(p, x, sv);
    const double pen = lambda * constraint_violation(G);
    bool near_kink = std::abs(G[0]) < 1e-3;
    if (!st.weighted())
      for (std::size_t j = 0; j < 2; ++j)
        near_kink = near_kink || (j != st.target && std::abs(F[j] + pen - st.bounds[j]) < 1e-3);
    if (near_kink)
      continue;
    ++checked;
    const auto v = penalized_value(p, st, z, s, lambda);
    for (std::size_t k = 0; k < 2; ++k) {
      auto a = z, b = z;
      a[k] += h;
      b[k] -= h;
      const double fd = (penalized_value(p, st, a, s, lambda).value -
                         penalized_value(p, st, b, s, lambda).value) / (2 * h);
      EXPECT_NEAR(v.grad[k], fd, 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
  EXPECT_GE(checked, 30);
}

TEST(PenalizedValue, StrictlyIncreasingInLambdaWhenInfeasible) {
  const auto p = smooth_problem();
  Rng rng = make_stream(32, 0);
  const auto s = smooth_surrogates(rng);
  int infeasible = 0;
  for (int t = 0; t < 100; ++t) {
    const LatentPoint z = {uniform01(rng), uniform01(rng)};
    const auto x = p.plan().extract(z);
    const auto G = eval_constraints(p, x, PenalizedObjective(p, weights({1, 1}), s, 1).predict(z));
    if (G[0] <= 0)
      continue;
    ++infeasible;
    double prev = -1e300;
    for (double lam : {1.0, 2.0, 4.0, 1e3}) {
      const double v = penalized_value(p, weights({0.3, 0.7}), z, s, lam).value;
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
  EXPECT_GT(infeasible, 5);
}

TEST(PenalizedValue, EpsilonBoundAtStartStillDescends) {
  // f1 = a + b, f2 = b - 2a: -grad f1 raises f2, but lowering b improves both.
  MoopDefinition d;
  d.variables = {DesignVariable::continuous("a", 0, 1), DesignVariable::continuous("b", 0, 1)};
  d.simulations.push_back(sim(2));
  d.objectives = {forms::identity("f1", 0), forms::identity("f2", 1)};
  d.acquisitions.push_back(AcquisitionSpec::fixed({1, 1}));
  const auto p = validate(d);
  std::vector<LatentPoint> z;
  std::vector<std::vector<double>> y;
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) {
      const double a = i / 6.0, b = j / 6.0;
      z.push_back({a, b});
      y.push_back({a + b, b - 2 * a});
    }
  const std::vector<RbfSurrogate> s = {RbfSurrogate::fit(z, y)};
  const LatentPoint z0 = {0.5, 0.5};

  ScalarizationState st;
  st.kind = AcquisitionKind::random_epsilon_constraint;
  st.target = 0;
  st.rho = 100;
  st.bounds = PenalizedObjective(p, st, s, 1.0).predict(z0);

  const auto v = penalized_value(p, st, z0, s, 1.0);
  double g2 = 0;
  for (double gk : v.grad)
    g2 += gk * gk;
  ASSERT_GT(g2, 1e-4);
  const double h = 1e-6 / std::sqrt(g2);
  const LatentPoint step = {z0[0] - h * v.grad[0], z0[1] - h * v.grad[1]};
  const double slope = (penalized_value(p, st, step, s, 1.0).value - v.value) / h;
  EXPECT_LT(slope, -0.5 * g2);

  const auto r = solve_subproblem(p, st, s, z0, TrustRegion{z0, 0.2}, 1.0);
  ASSERT_FALSE(r.improve_requested);
  EXPECT_LT(r.value, r.start_value - 0.05);
}

TEST(Solve, QuadraticMinimizer) {
  const LatentPoint c = {0.3, 0.7, 0.55};
  auto f = [&](std::span<const double> z, std::vector<double> *g) {
    // Coupled convex quadratic with minimizer c.
    const double a = z[0] - c[0], b = z[1] - c[1], e = z[2] - c[2];
    if (g)
      *g = {2 * a + b, a + 4 * b, 6 * e};
    return a * a + a * b + 2 * b * b + 3 * e * e + 1.0;
  };
  SolverOptions opt;
  const auto r = solve_subproblem(f, std::vector<double>{0.9, 0.1, 0.2}, TrustRegion{{0.5, 0.5, 0.5}, 1.0}, opt);
  ASSERT_FALSE(r.improve_requested);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(r.candidate[k], c[k], 1e-6);
  EXPECT_LT(r.value, r.start_value);
}

TEST(Solve, ConstantRequestsImprovement) {
  auto f = [](std::span<const double>, std::vector<double> *g) {
    if (g)
      *g = {0.0, 0.0};
    return 4.2;
  };
  const TrustRegion region{{0.5, 0.5}, 0.1};
  const auto r = solve_subproblem(f, std::vector<double>{0.5, 0.5}, region, SolverOptions{});
  EXPECT_TRUE(r.improve_requested);
  EXPECT_EQ(r.region.center, region.center);
  EXPECT_EQ(r.region.radius, region.radius);
}

TEST(Solve, MinimumOutsideRegionProjects) {
  Rng rng = make_stream(33, 0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 1 + uniform_index(rng, 5);
    LatentPoint c(d), w(d), center(d);
    for (std::size_t k = 0; k < d; ++k) {
      c[k] = uniform(rng, -0.5, 1.5);
      w[k] = uniform(rng, 0.5, 5);
      center[k] = uniform01(rng);
    }
    const TrustRegion region{center, uniform(rng, 0.05, 0.3)};
    auto f = [&](std::span<const double> z, std::vector<double> *g) {
      double v = 0;
      if (g)
        g->assign(d, 0.0);
      for (std::size_t k = 0; k < d; ++k) {
        v += w[k] * (z[k] - c[k]) * (z[k] - c[k]);
        if (g)
          (*g)[k] = 2 * w[k] * (z[k] - c[k]);
      }
      return v;
    };
    const auto r = solve_subproblem(f, center, region, SolverOptions{});
    if (r.improve_requested) {
      // Only possible when the center is already the projected minimizer.
      for (std::size_t k = 0; k < d; ++k)
        EXPECT_NEAR(center[k], std::clamp(c[k], region.lower(k), region.upper(k)), 1e-6);
      continue;
    }
    for (std::size_t k = 0; k < d; ++k) {
      EXPECT_NEAR(r.candidate[k], std::clamp(c[k], region.lower(k), region.upper(k)), 1e-6);
      EXPECT_TRUE(region.contains(r.candidate, 0.0));
    }
  }
}

TEST(Solve, SurrogateCandidateStaysInBoxAndDecreases) {
  const auto p = smooth_problem();
  Rng rng = make_stream(34, 0);
  const auto s = smooth_surrogates(rng);
  for (int t = 0; t < 40; ++t) {
    const LatentPoint z0 = {uniform01(rng), uniform01(rng)};
    const TrustRegion region{z0, uniform(rng, 0.05, 0.5)};
    const auto st = weights({uniform01(rng), uniform01(rng)});
    const auto r = solve_subproblem(p, st, s, z0, region, 2.0);
    if (r.improve_requested)
      continue;
    EXPECT_TRUE(region.contains(r.candidate, 0.0));
    for (double v : r.candidate) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(penalized_value(p, st, r.candidate, s, 2.0).value,
              penalized_value(p, st, z0, s, 2.0).value);
  }
}

TEST(MinimizeBox, RosenbrockInBox) {
  auto f = [](std::span<const double> z, std::vector<double> *g) {
    const double x = 2 * z[0], y = 2 * z[1];
    if (g)
      *g = {2 * (-2 * (1 - x) - 400 * x * (y - x * x)), 2 * (200 * (y - x * x))};
    return (1 - x) * (1 - x) + 100 * (y - x * x) * (y - x * x);
  };
  BoxMinimizeOptions o;
  o.max_iterations = 500;
  const auto r = minimize_box(f, std::vector<double>{0.1, 0.9}, std::vector<double>{0, 0},
                              std::vector<double>{1, 1}, o);
  EXPECT_NEAR(r.z[0], 0.5, 1e-4);
  EXPECT_NEAR(r.z[1], 0.5, 1e-4);
}
