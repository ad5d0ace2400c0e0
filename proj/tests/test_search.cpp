//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "moso/search.hpp"
#include "properties.hpp"

using namespace moso;

TEST(Lhs, Quartiles) {
  Rng rng = make_stream(0, 0);
  const auto pts = lhs_search(4, 2, rng);
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t k = 0; k < 2; ++k) {
    std::set<int> bins;
    for (const auto &p : pts)
      bins.insert(static_cast<int>(std::floor(p[k] * 4)));
    EXPECT_EQ(bins, (std::set<int>{0, 1, 2, 3}));
  }
}

TEST(Lhs, SinglePoint) {
  Rng rng = make_stream(1, 0);
  const auto pts = lhs_search(1, 3, rng);
  ASSERT_EQ(pts.size(), 1u);
  for (double v : pts[0]) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Lhs, LargeDesign) {
  Rng rng = make_stream(2, 0);
  const auto pts = lhs_search(2000, 13, rng);
  ASSERT_EQ(pts.size(), 2000u);
  for (std::size_t k = 0; k < 13; ++k) {
    std::vector<int> hist(2000, 0);
    for (const auto &p : pts)
      ++hist[static_cast<std::size_t>(std::floor(p[k] * 2000))];
    for (int h : hist)
      ASSERT_EQ(h, 1);
  }
}

TEST(Lhs, Deterministic) {
  Rng a = make_stream(9, 2), b = make_stream(9, 2), c = make_stream(9, 3);
  EXPECT_EQ(lhs_search(30, 4, a), lhs_search(30, 4, b));
  Rng a2 = make_stream(9, 2);
  EXPECT_NE(lhs_search(30, 4, a2), lhs_search(30, 4, c));
}

TEST(Lhs, StratificationProperty) {
  const auto c = props::lhs_stratification(64, 10);
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_EQ(c.cases, 640u);
}

TEST(Random, PortableStreams) {
  // mt19937_64 is fully specified; the 10000th output of the default seed is fixed.
  Rng r;
  r.discard(9999);
  EXPECT_EQ(r(), 9981545732273789042ULL);
  Rng s = make_stream(5, 1);
  const auto state = serialize_rng(s);
  Rng t = deserialize_rng(state);
  EXPECT_EQ(s(), t());
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(s);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
