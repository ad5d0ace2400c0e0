//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include <gtest/gtest.h>

#include "moso/embedding.hpp"
#include "moso/testbed.hpp"
#include "properties.hpp"

using namespace moso;

namespace {

std::shared_ptr<const DesignSpace> space_of(std::vector<DesignVariable> v) {
  return std::make_shared<const DesignSpace>(std::move(v));
}

std::shared_ptr<const DesignSpace> reactor_space() {
  std::vector<DesignVariable> v;
  for (const auto &b : testbed::kReactorVariables)
    v.push_back(DesignVariable::continuous(b.name, b.lower, b.upper));
  v.push_back(DesignVariable::categorical("solvent", {"S1", "S2"}));
  v.push_back(DesignVariable::categorical("base", {"B1", "B2"}));
  return space_of(v);
}

// Independent nearest-vertex search over the K simplex vertices.
std::size_t nearest_vertex(const std::vector<double> &block) {
  const std::size_t k = block.size() + 1;
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t j = 0; j < k; ++j) {
    double d = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
      const double v = (j >= 1 && i == j - 1) ? 1.0 : 0.0;
      d += (block[i] - v) * (block[i] - v);
    }
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

class SpyEmbedder : public CustomEmbedder {
public:
  std::size_t width() const override { return 2; }
  std::vector<double> embed(double v) const override { return {v / 4.0, 1.0 - v / 4.0}; }
  double extract(std::span<const double> z) const override { return std::round(4.0 * z[0]); }
  bool contains(double v) const override { return v >= 0 && v <= 4 && v == std::round(v); }
};

} // namespace

TEST(Embed, ContinuousMidpoint) {
  EmbeddingPlan plan(space_of({DesignVariable::continuous("x", 0, 10)}));
  const auto z = plan.embed(DesignPoint(plan.space(), {5.0}));
  EXPECT_EQ(z, LatentPoint{0.5});
}

TEST(Embed, IntegerEndpoints) {
  EmbeddingPlan plan(space_of({DesignVariable::integer("n", 1, 5)}));
  EXPECT_EQ(plan.embed(DesignPoint(plan.space(), {1.0}))[0], 0.0);
  EXPECT_EQ(plan.embed(DesignPoint(plan.space(), {5.0}))[0], 1.0);
}

TEST(Embed, JointCategoricalCombinations) {
  EmbeddingPlan plan(space_of({DesignVariable::categorical("solvent", {"S1", "S2"}),
                               DesignVariable::categorical("base", {"B1", "B2"})}));
  EXPECT_EQ(plan.categorical_combo_count(), 4u);
  EXPECT_EQ(plan.latent_dim(), 3u);
  const auto sp = plan.space();
  EXPECT_EQ(plan.embed(make_point(sp, {"S1", "B1"})), (LatentPoint{0, 0, 0}));
  EXPECT_EQ(plan.embed(make_point(sp, {"S1", "B2"})), (LatentPoint{1, 0, 0}));
  EXPECT_EQ(plan.embed(make_point(sp, {"S2", "B1"})), (LatentPoint{0, 1, 0}));
  EXPECT_EQ(plan.embed(make_point(sp, {"S2", "B2"})), (LatentPoint{0, 0, 1}));
}

TEST(Embed, Errors) {
  EmbeddingPlan plan(space_of({DesignVariable::continuous("x", 0, 1),
                               DesignVariable::categorical("c", {"a", "b"})}));
  EXPECT_THROW(plan.embed(DesignPoint(plan.space(), {1.5, 0})), Error);
  EXPECT_THROW(plan.embed(DesignPoint(plan.space(), {0.5, 2})), Error);
  EXPECT_THROW(plan.embed(DesignPoint(plan.space(), {0.5, 0.5})), Error);
}

TEST(Extract, CategoricalNearestVertex) {
  EmbeddingPlan plan(reactor_space());
  const LatentPoint z = {0.2, 0.3, 0.9, 0.6, 0.1, 0.2};
  const auto x = plan.extract(z);
  EXPECT_EQ(plan.combination_index(x), 1u);
  EXPECT_EQ(x.label("solvent"), "S1");
  EXPECT_EQ(x.label("base"), "B2");
}

TEST(Extract, CategoricalMatchesBruteForce) {
  EmbeddingPlan plan(space_of({DesignVariable::categorical("a", {"x", "y", "z"}),
                               DesignVariable::categorical("b", {"u", "v"})}));
  Rng rng = make_stream(4, 0);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> z(plan.latent_dim());
    for (auto &v : z)
      v = uniform01(rng);
    EXPECT_EQ(plan.combination_index(plan.extract(z)), nearest_vertex(z));
  }
}

TEST(Extract, TiesGoToLowestIndex) {
  EmbeddingPlan plan(space_of({DesignVariable::categorical("a", {"x", "y", "z"})}));
  EXPECT_EQ(plan.extract(std::vector<double>{0.5, 0.5})[0], 0.0);
  EXPECT_EQ(plan.extract(std::vector<double>{0.7, 0.7})[0], 1.0);
}

TEST(Extract, IntegerRounding) {
  EmbeddingPlan plan(space_of({DesignVariable::integer("n", 1, 5)}));
  EXPECT_EQ(plan.extract(std::vector<double>{0.49})[0], 3.0);
  EXPECT_EQ(plan.extract(std::vector<double>{0.125})[0], 2.0); // 1.5 rounds away from zero
  EXPECT_EQ(plan.extract(std::vector<double>{1.0})[0], 5.0);
}

TEST(Extract, ClampsOutOfRange) {
  EmbeddingPlan plan(space_of({DesignVariable::continuous("x", 2, 4)}));
  EXPECT_EQ(plan.extract(std::vector<double>{1.5})[0], 4.0);
  EXPECT_EQ(plan.extract(std::vector<double>{-0.5})[0], 2.0);
}

TEST(LatentBox, Dimensions) {
  EmbeddingPlan cfr(reactor_space());
  EXPECT_EQ(cfr.latent_dim(), 6u);
  const auto [lo, hi] = latent_box(cfr);
  EXPECT_EQ(lo, LatentPoint(6, 0.0));
  EXPECT_EQ(hi, LatentPoint(6, 1.0));

  EmbeddingPlan one(space_of({DesignVariable::continuous("x", 0, 1)}));
  EXPECT_EQ(latent_box(one).second, LatentPoint{1.0});

  std::vector<DesignVariable> vars;
  for (const auto &b : testbed::residual_variables())
    vars.push_back(DesignVariable::continuous(b.name, b.lower, b.upper));
  EXPECT_EQ(latent_box(EmbeddingPlan(space_of(vars))).first.size(), 13u);
}

TEST(Embed, CustomEmbedder) {
  EmbeddingPlan plan(space_of({DesignVariable::continuous("x", 0, 1),
                               DesignVariable::custom("k", std::make_shared<SpyEmbedder>())}));
  EXPECT_EQ(plan.latent_dim(), 3u);
  const DesignPoint x(plan.space(), {0.25, 3.0});
  const auto z = plan.embed(x);
  EXPECT_EQ(z, (LatentPoint{0.25, 0.75, 0.25}));
  EXPECT_EQ(plan.extract(z), x);
}

TEST(EmbedProperty, RoundTripAndExclusivity) {
  const auto c = props::embedding_round_trip(1000, 17);
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_EQ(c.cases, 20000u);
}
