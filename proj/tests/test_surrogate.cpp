//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "moso/surrogate.hpp"
#include "properties.hpp"

using namespace moso;

namespace {

std::vector<LatentPoint> random_points(std::size_t n, std::size_t d, Rng &rng) {
  std::vector<LatentPoint> z(n, LatentPoint(d));
  for (auto &p : z)
    for (auto &v : p)
      v = uniform01(rng);
  return z;
}

// Sorted distances to `c`, one self-match removed: brute-force k-NN.
double kth_distance(const LatentPoint &c, const std::vector<LatentPoint> &data, std::size_t k) {
  std::vector<double> d;
  bool self = false;
  for (const auto &p : data) {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      s += (p[i] - c[i]) * (p[i] - c[i]);
    if (s == 0 && !self) {
      self = true;
      continue;
    }
    d.push_back(std::sqrt(s));
  }
  std::sort(d.begin(), d.end());
  return d[k - 1];
}

} // namespace

TEST(RbfFit, SinglePoint) {
  const auto m = RbfSurrogate::fit({{0.3, 0.6}}, {{2.5, -1.0}});
  EXPECT_NEAR(m.evaluate(std::vector<double>{0.3, 0.6})[0], 2.5, 1e-12);
  EXPECT_NEAR(m.evaluate(std::vector<double>{0.3, 0.6})[1], -1.0, 1e-12);
  const auto g = m.gradient(std::vector<double>{0.3, 0.6});
  EXPECT_EQ(g.cwiseAbs().maxCoeff(), 0.0);
}

TEST(RbfFit, InterpolatesFiveRandomPoints) {
  Rng rng = make_stream(3, 0);
  const auto z = random_points(5, 2, rng);
  std::vector<std::vector<double>> y;
  for (const auto &p : z)
    y.push_back({std::exp(p[0]) - p[1] * p[1]});
  const auto m = RbfSurrogate::fit(z, y);
  for (std::size_t i = 0; i < z.size(); ++i)
    EXPECT_NEAR(m.evaluate(z[i])[0], y[i][0], 1e-6);
  EXPECT_GT(m.shape(), 0.0);
  EXPECT_GT(m.nugget(), 0.0);
}

TEST(RbfFit, LinearDataAtHeldOutMidpoint) {
  std::vector<LatentPoint> z;
  std::vector<std::vector<double>> y;
  auto lin = [](double a, double b) { return 0.3 + 0.5 * a - 0.2 * b; };
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      z.push_back({i / 4.0, j / 4.0});
      y.push_back({lin(i / 4.0, j / 4.0)});
    }
  const auto m = RbfSurrogate::fit(z, y);
  EXPECT_NEAR(m.evaluate(std::vector<double>{0.375, 0.625})[0], lin(0.375, 0.625), 5e-2);
  EXPECT_NEAR(m.evaluate(std::vector<double>{0.5, 0.5})[0], lin(0.5, 0.5), 5e-2);
}

TEST(RbfFit, Errors) {
  EXPECT_THROW(RbfSurrogate::fit({}, {}), Error);
  EXPECT_THROW(RbfSurrogate::fit({{0.1}, {0.1}}, {{1.0}, {2.0}}), Error);
  EXPECT_THROW(RbfSurrogate::fit({{0.1}, {0.2}}, {{1.0}}), Error);
}

TEST(RbfEvaluate, SymmetricMidpointAndFarField) {
  const auto m = RbfSurrogate::fit({{0.25, 0.5}, {0.75, 0.5}}, {{1.0}, {-1.0}});
  EXPECT_NEAR(m.evaluate(std::vector<double>{0.5, 0.5})[0], 0.0, 1e-12);
  const auto g = m.gradient(std::vector<double>{0.5, 0.5});
  EXPECT_LT(g(0, 0), 0.0);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-12);
  // Far from the data the centered model returns the data mean (0 here).
  EXPECT_NEAR(m.evaluate(std::vector<double>{40.0, 40.0})[0], 0.0, 1e-12);

  const auto off = RbfSurrogate::fit({{0.25}, {0.75}}, {{3.0}, {5.0}});
  EXPECT_NEAR(off.evaluate(std::vector<double>{60.0})[0], 4.0, 1e-12);
}

TEST(RbfGradient, MatchesCentralDifferences) {
  Rng rng = make_stream(8, 0);
  const auto z = random_points(25, 3, rng);
  std::vector<std::vector<double>> y;
  for (const auto &p : z)
    y.push_back({std::sin(3 * p[0]) + p[1] * p[2], std::cos(p[2] - p[0])});
  const auto m = RbfSurrogate::fit(z, y);
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    LatentPoint p = {uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95)};
    const auto J = m.gradient(p);
    std::vector<double> w = {0.7, -1.3};
    const auto ev = m.evaluate_cached(p);
    const auto vj = m.vjp(p, ev, w);
    for (std::size_t k = 0; k < 3; ++k) {
      auto a = p, b = p;
      a[k] += h;
      b[k] -= h;
      const auto fa = m.evaluate(a), fb = m.evaluate(b);
      for (std::size_t j = 0; j < 2; ++j) {
        const double fd = (fa[j] - fb[j]) / (2 * h);
        EXPECT_NEAR(J(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)), fd,
                    1e-5 * std::max(1.0, std::abs(fd)));
      }
      EXPECT_NEAR(vj[k], w[0] * J(0, static_cast<Eigen::Index>(k)) + w[1] * J(1, static_cast<Eigen::Index>(k)), 1e-10);
    }
  }
}

TEST(RbfUncertainty, ZeroAtDataPriorFarAway) {
  Rng rng = make_stream(10, 0);
  const auto z = random_points(12, 2, rng);
  std::vector<std::vector<double>> y;
  for (const auto &p : z)
    y.push_back({p[0] + 2 * p[1], 10 * p[0]});
  const auto m = RbfSurrogate::fit(z, y);
  for (const auto &p : z)
    for (double u : m.uncertainty(p))
      EXPECT_LE(u, 1e-6);
  // Prior variance phi(0) = 1 times the data standard deviation.
  std::vector<double> sd(2, 0.0), mu(2, 0.0);
  for (const auto &v : y)
    for (int j = 0; j < 2; ++j)
      mu[j] += v[j] / 12.0;
  for (const auto &v : y)
    for (int j = 0; j < 2; ++j)
      sd[j] += (v[j] - mu[j]) * (v[j] - mu[j]) / 12.0;
  const auto far = m.uncertainty(std::vector<double>{50.0, -50.0});
  for (int j = 0; j < 2; ++j)
    EXPECT_NEAR(far[j], std::sqrt(sd[j]), 1e-9);
}

TEST(RbfUncertainty, NonincreasingTowardNearestCenter) {
  const std::vector<LatentPoint> z = {{0.2, 0.2}, {0.8, 0.3}, {0.5, 0.9}, {0.1, 0.7}};
  const auto m = RbfSurrogate::fit(z, {{1.0}, {2.0}, {0.0}, {3.0}});
  const LatentPoint start = {0.45, 0.45};
  // Nearest center by scan.
  const LatentPoint c = z[0];
  double prev = 1e300;
  for (int s = 0; s <= 200; ++s) {
    const double t = s / 200.0;
    const LatentPoint p = {start[0] + t * (c[0] - start[0]), start[1] + t * (c[1] - start[1])};
    const double u = m.uncertainty(p)[0];
    EXPECT_LE(u, prev + 1e-12);
    prev = u;
  }
}

TEST(RbfRefit, ExactAfterAddingMispredictedPoint) {
  Rng rng = make_stream(12, 0);
  auto z = random_points(10, 2, rng);
  std::vector<std::vector<double>> y;
  auto f = [](const LatentPoint &p) { return std::sin(5 * p[0]) * std::cos(4 * p[1]); };
  for (const auto &p : z)
    y.push_back({f(p)});
  const LatentPoint probe = {0.37, 0.52};
  const auto before = RbfSurrogate::fit(z, y);
  ASSERT_GT(std::abs(before.evaluate(probe)[0] - f(probe)), 1e-4);
  z.push_back(probe);
  y.push_back({f(probe)});
  const auto after = RbfSurrogate::fit(z, y);
  EXPECT_NEAR(after.evaluate(probe)[0], f(probe), 1e-6);
}

TEST(RbfProperty, InterpolationAndGradient) {
  const auto interp = props::rbf_interpolation(300, 21);
  EXPECT_TRUE(interp.ok) << interp.detail;
  const auto grad = props::rbf_gradient_fd(50, 22);
  EXPECT_TRUE(grad.ok) << grad.detail;
}

TEST(TrustRegion, OrderedNeighbors) {
  const LatentPoint c = {0.0, 0.0};
  const std::vector<LatentPoint> data = {{0.0, 0.4}, {0.1, 0.0}, {0.3, 0.0}, {0.0, 0.2}, {0, 0}};
  const auto r = trust_region_at(c, data, 3);
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->radius, 0.3);
  EXPECT_EQ(r->center, c);
}

TEST(TrustRegion, CoincidentPointsCount) {
  const LatentPoint c = {0.5, 0.5};
  const std::vector<LatentPoint> data = {c, c, c, {0.5, 1.0}};
  const auto r = trust_region_at(c, data, 3);
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->radius, 0.5);
}

TEST(TrustRegion, GridMatchesBruteForce) {
  std::vector<LatentPoint> grid;
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j)
      for (int k = 0; k <= 3; ++k)
        grid.push_back({i / 6.0, j / 6.0, k / 3.0});
  Rng rng = make_stream(13, 0);
  for (int t = 0; t < 50; ++t) {
    const auto &c = grid[uniform_index(rng, grid.size())];
    for (std::size_t nb : {1u, 4u, 7u}) {
      const auto r = trust_region_at(c, grid, nb);
      ASSERT_TRUE(r);
      EXPECT_NEAR(r->radius, kth_distance(c, grid, nb), 1e-15);
    }
  }
  // Interior grid point: the 4th neighbor sits one step of 1/6 away.
  EXPECT_NEAR(trust_region_at(LatentPoint{0.5, 0.5, 1.0 / 3}, grid, 4)->radius, 1.0 / 6, 1e-15);
}

TEST(TrustRegion, MaxNormOption) {
  const LatentPoint c = {0.5, 0.5};
  const std::vector<LatentPoint> data = {{0.6, 0.6}, {0.5, 0.3}, {0.9, 0.5}};
  EXPECT_NEAR(trust_region_at(c, data, 1)->radius, std::sqrt(0.02), 1e-15);
  EXPECT_NEAR(trust_region_at(c, data, 1, TrustRegionNorm::max)->radius, 0.1, 1e-15);
  // Second neighbor: (0.5, 0.3) in both norms.
  EXPECT_NEAR(trust_region_at(c, data, 2, TrustRegionNorm::max)->radius, 0.2, 1e-15);
}

TEST(TrustRegion, BoxClipping) {
  TrustRegion r{{0.1, 0.95}, 0.2};
  EXPECT_DOUBLE_EQ(r.lower(0), 0.0);
  EXPECT_DOUBLE_EQ(r.upper(1), 1.0);
  EXPECT_TRUE(r.contains(std::vector<double>{0.25, 0.8}));
  EXPECT_FALSE(r.contains(std::vector<double>{0.35, 0.8}));
}

TEST(SetCenter, TooFewPointsFallsBackToGlobal) {
  const std::vector<LatentPoint> z = {{0.1, 0.1}, {0.9, 0.9}};
  auto m = RbfSurrogate::fit(z, {{1.0}, {2.0}}, SurrogateMode::local);
  const auto r = m.set_center(z[0], z, {{1.0}, {2.0}}, 3);
  EXPECT_EQ(m.mode(), SurrogateMode::global);
  EXPECT_EQ(r.lower(0), 0.0);
  EXPECT_EQ(r.upper(1), 1.0);
}

TEST(SetCenter, LocalRefitUsesWindow) {
  Rng rng = make_stream(14, 0);
  const auto z = random_points(60, 2, rng);
  std::vector<std::vector<double>> y;
  for (const auto &p : z)
    y.push_back({p[0] * p[1]});
  auto m = RbfSurrogate::fit(z, y, SurrogateMode::local);
  const auto r = m.set_center(z[0], z, y, 3);
  std::size_t inside = 0;
  for (const auto &p : z)
    inside += std::hypot(p[0] - z[0][0], p[1] - z[0][1]) <= 2 * r.radius;
  EXPECT_EQ(m.size(), inside);
  EXPECT_LT(m.size(), z.size());
  ASSERT_TRUE(m.trust_region());
  EXPECT_EQ(m.trust_region()->radius, r.radius);
}

TEST(Improve, PrefersLowVarianceDirection) {
  // Data spread along dimension 1 only.
  std::vector<LatentPoint> data;
  for (int i = 0; i <= 20; ++i)
    data.push_back({i / 20.0, 0.5});
  const TrustRegion region{{0.5, 0.5}, 0.2};
  Rng rng = make_stream(15, 0);
  int wins = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto z = improvement_point(region, data, rng);
    ASSERT_TRUE(region.contains(z, 1e-15));
    wins += std::abs(z[1] - 0.5) > std::abs(z[0] - 0.5);
  }
  EXPECT_GE(wins, 900);
}

TEST(Improve, OneDimensionInsideRegion) {
  const std::vector<LatentPoint> data = {{0.2}, {0.4}, {0.45}};
  const TrustRegion region{{0.4}, 0.05};
  Rng rng = make_stream(16, 0);
  for (int t = 0; t < 200; ++t) {
    const auto z = improvement_point(region, data, rng);
    EXPECT_TRUE(region.contains(z, 1e-15));
    EXPECT_EQ(std::find(data.begin(), data.end(), z), data.end());
  }
}

TEST(Improve, ZeroRadiusFallsBackToCube) {
  const std::vector<LatentPoint> data = {{0.2, 0.2}};
  const TrustRegion region{{0.2, 0.2}, 0.0};
  Rng rng = make_stream(17, 0);
  bool moved = false;
  for (int t = 0; t < 20; ++t) {
    const auto z = improvement_point(region, data, rng);
    for (double v : z) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    moved = moved || std::abs(z[0] - 0.2) > 0.2;
  }
  EXPECT_TRUE(moved);
}
