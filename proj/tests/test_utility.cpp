// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

namespace sparsessd {
namespace {

OutcomeGrid unit_grid(std::size_t n1) { return build_grid({0.0, 1.0}, n1); }

// Exact binomial coefficient by Pascal's triangle, independent of the
// multiplicative formula used by the library.
std::uint64_t pascal(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k];
}

TEST(Grid, EquallySpacedWithExactEndpoints) {
  const auto g = build_grid({-0.1, 0.2}, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.points.front(), -0.1);
  EXPECT_EQ(g.points.back(), 0.2);
  EXPECT_NEAR(g.points[1], 0.0, 1e-15);
  EXPECT_NEAR(g.points[2], 0.1, 1e-15);
}

TEST(Grid, RejectsDegenerateSupport) {
  EXPECT_THROW(build_grid({0.05, 0.05}, 10), DegenerateSupportError);
  EXPECT_THROW(build_grid({0.0, 1.0}, 1), ParameterError);
}

TEST(Enumerate, SmallClasses) {
  const auto two = enumerate_utilities(unit_grid(2), 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].weights(), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(two[1].weights(), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(enumerate_utilities(unit_grid(3), 3).size(), 6u);
}

TEST(Enumerate, DefaultClassHas715Members) {
  const auto us = enumerate_utilities(unit_grid(10), 5);
  EXPECT_EQ(us.size(), 715u);
  EXPECT_EQ(utility_count(10, 5), 715u);
}

TEST(Enumerate, CountMatchesClosedFormOnRange) {
  for (std::size_t n1 = 2; n1 <= 10; ++n1) {
    for (std::size_t n2 = 2; n2 <= 6; ++n2) {
      const auto us = enumerate_utilities(unit_grid(n1), n2);
      EXPECT_EQ(us.size(), pascal(n1 + n2 - 2, n1 - 1)) << n1 << "," << n2;
      EXPECT_EQ(utility_count(n1, n2), us.size());
    }
  }
}

TEST(Enumerate, MembersAreDistinctAndNormalized) {
  const auto us = enumerate_utilities(unit_grid(5), 4);
  std::set<std::vector<int>> seen;
  for (const auto& u : us) {
    EXPECT_TRUE(seen.insert(u.numerators()).second);
    int s = 0;
    for (int k : u.numerators()) {
      EXPECT_GE(k, 0);
      s += k;
    }
    EXPECT_EQ(s, 3);
  }
}

TEST(Evaluate, HandExamples) {
  const auto g = unit_grid(2);
  const auto u = RussellSeoUtility::from_weights(g, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(u(0.5), -0.25);
  for (const auto& w : enumerate_utilities(build_grid({-0.2, 0.3}, 6), 4)) {
    EXPECT_EQ(w(0.3), 0.0);
  }
  const auto g4 = build_grid({-0.1, 0.2}, 4);
  const auto e2 = RussellSeoUtility::from_weights(g4, {0.0, 0.0, 1.0, 0.0});
  EXPECT_NEAR(e2(-0.05), -0.05 - 0.1, 1e-15);
  EXPECT_EQ(e2(0.15), 0.0);
}

TEST(Evaluate, MinOfLinesIdentity) {
  const SupportBounds b{-0.25, 0.4};
  const auto g = build_grid(b, 10);
  Rng rng(5);
  for (const auto& u : enumerate_utilities(g, 5)) {
    for (int k = 0; k < 1000; ++k) {
      const double y = b.lower + (b.upper - b.lower) * rng.uniform();
      EXPECT_NEAR(u(y), u.via_lines(y), 1e-12);
    }
  }
}

TEST(Evaluate, LinesUseMixtureWeights) {
  // c1[n] is the tail sum of v; the line through the top kink is flat at 0.
  const auto g = unit_grid(4);
  const auto u = RussellSeoUtility::from_weights(g, {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(u.slopes()[0], 1.0, 1e-15);
  EXPECT_NEAR(u.slopes()[2], 0.7, 1e-15);
  EXPECT_EQ(u.slopes()[4], 0.0);
}

TEST(Evaluate, ConcaveAndMonotone) {
  const SupportBounds b{-0.3, 0.3};
  const auto us = enumerate_utilities(build_grid(b, 7), 4);
  Rng rng(9);
  for (const auto& u : us) {
    for (int k = 0; k < 200; ++k) {
      const double y1 = -0.4 + 0.8 * rng.uniform();
      const double y2 = -0.4 + 0.8 * rng.uniform();
      const double t = rng.uniform();
      EXPECT_GE(u(t * y1 + (1 - t) * y2), t * u(y1) + (1 - t) * u(y2) - 1e-12);
      EXPECT_LE(u(std::min(y1, y2)), u(std::max(y1, y2)) + 1e-12);
    }
  }
}

TEST(RampMeans, MatchDirectAverage) {
  const auto g = build_grid({-0.1, 0.1}, 5);
  const std::vector<double> y{-0.08, 0.0, 0.05, 0.1, -0.1};
  const auto r = ramp_means(y, g.points);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double s = 0.0;
    for (double v : y) s += std::min(0.0, v - g.points[n]);
    EXPECT_NEAR(r[n], s / 5.0, 1e-15);
  }
  for (const auto& u : enumerate_utilities(g, 3)) {
    double direct = 0.0;
    for (double v : y) direct += u(v);
    EXPECT_NEAR(u.from_ramp_means(r), direct / 5.0, 1e-14);
  }
}

TEST(Utility, RejectsBadWeights) {
  const auto g = unit_grid(3);
  EXPECT_THROW(RussellSeoUtility(g, {1, 1, 0}, 3), ParameterError);
  EXPECT_THROW(RussellSeoUtility(g, {1, 1}, 2), ParameterError);
  EXPECT_THROW(RussellSeoUtility::from_weights(g, {0.0, 0.0, 0.0}), ParameterError);
  EXPECT_THROW(enumerate_utilities(g, 1), ParameterError);
}

}  // namespace
}  // namespace sparsessd
