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

#include "test_support.hpp"

namespace sparsessd {
namespace {

using testing::all_assets;
using testing::brute_force_optimum;
using testing::direct_value;
using testing::random_panel;

std::vector<double> column_weights(std::size_t p, std::size_t i) {
  std::vector<double> w(p, 0.0);
  w[i] = 1.0;
  return w;
}

TEST(MaxExpectedUtility, SingleAssetSupport) {
  const auto panel = random_panel(15, 3, 21);
  const auto g = build_grid(support_bounds(panel), 6);
  for (const auto& u : enumerate_utilities(g, 3)) {
    const std::vector<std::size_t> s{1};
    const auto sol = max_expected_utility(panel, u, s);
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.weights[1], 1.0, 1e-12);
    EXPECT_NEAR(sol.value, direct_value(panel, u, column_weights(3, 1)), 1e-12);
  }
}

TEST(MaxExpectedUtility, IdenticalColumnsMatchSingleAsset) {
  const auto base = random_panel(12, 1, 4);
  std::vector<double> v;
  for (std::size_t t = 0; t < 12; ++t) {
    v.push_back(base(t, 0));
    v.push_back(base(t, 0));
  }
  const auto panel = ReturnPanel::from_matrix(12, 2, v);
  const auto g = build_grid(support_bounds(panel), 5);
  for (const auto& u : enumerate_utilities(g, 3)) {
    const auto both = max_expected_utility(panel, u);
    const std::vector<std::size_t> one{0};
    EXPECT_NEAR(both.value, max_expected_utility(panel, u, one).value, 1e-12);
  }
}

TEST(MaxExpectedUtility, MatchesBruteForceGrid) {
  const auto panel = random_panel(10, 3, 77);
  const auto g = build_grid(support_bounds(panel), 5);
  const auto us = enumerate_utilities(g, 3);
  for (std::size_t k = 0; k < us.size(); k += 3) {
    const auto sol = max_expected_utility(panel, us[k]);
    ASSERT_TRUE(sol.optimal());
    const double brute = brute_force_optimum(panel, us[k], all_assets(3));
    EXPECT_NEAR(sol.value, brute, 1e-4);
    EXPECT_GE(sol.value, brute - 1e-12);
  }
}

TEST(MaxExpectedUtility, ReEvaluationAndSimplexFeasibility) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto panel = random_panel(40, 6, seed);
    const auto g = build_grid(support_bounds(panel), 10);
    const auto us = enumerate_utilities(g, 5);
    for (std::size_t k = 0; k < us.size(); k += 37) {
      const auto sol = max_expected_utility(panel, us[k]);
      ASSERT_TRUE(sol.optimal());
      double total = 0.0;
      for (double w : sol.weights.weights()) {
        EXPECT_GE(w, -1e-8);
        total += w;
      }
      EXPECT_NEAR(total, 1.0, 1e-8);
      EXPECT_NEAR(sol.value, direct_value(panel, us[k], sol.weights.weights()), 1e-7);
    }
  }
}

TEST(MaxExpectedUtility, DenseBackendAgrees) {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    const auto panel = random_panel(25, 5, seed);
    const auto g = build_grid(support_bounds(panel), 8);
    const auto us = enumerate_utilities(g, 4);
    const std::vector<std::size_t> sub{0, 2, 4};
    for (std::size_t k = 0; k < us.size(); k += 11) {
      LpOptions dense;
      dense.backend = LpBackend::dense;
      const auto a = max_expected_utility(panel, us[k], sub);
      const auto b = max_expected_utility(panel, us[k], sub, dense);
      ASSERT_TRUE(a.optimal());
      ASSERT_TRUE(b.optimal()) << b.diagnostics;
      EXPECT_NEAR(a.value, b.value, 1e-9);
      for (std::size_t i = 0; i < 5; ++i) {
        if (std::find(sub.begin(), sub.end(), i) == sub.end()) {
          EXPECT_EQ(a.weights[i], 0.0);
        }
      }
    }
  }
}

TEST(MaxExpectedUtility, MonotoneInSupport) {
  const auto panel = random_panel(30, 5, 8);
  const auto g = build_grid(support_bounds(panel), 10);
  const auto us = enumerate_utilities(g, 5);
  const std::vector<std::size_t> small{1, 3}, large{0, 1, 3, 4};
  for (std::size_t k = 0; k < us.size(); k += 13) {
    EXPECT_GE(max_expected_utility(panel, us[k], large).value,
              max_expected_utility(panel, us[k], small).value - 1e-9);
  }
}

TEST(MaxExpectedUtility, WarmStartDoesNotChangeValues) {
  const auto panel = random_panel(60, 6, 13);
  const auto g = build_grid(support_bounds(panel), 10);
  const auto us = enumerate_utilities(g, 5);
  const std::vector<std::size_t> s1{0, 2}, s2{0, 2, 5};
  for (std::size_t k = 0; k < us.size(); k += 17) {
    const auto first = max_expected_utility(panel, us[k], s1);
    LpOptions warm;
    warm.warm = &first.basis;
    const auto hot = max_expected_utility(panel, us[k], s2, warm);
    const auto cold = max_expected_utility(panel, us[k], s2);
    EXPECT_NEAR(hot.value, cold.value, 1e-9);
  }
}

TEST(MaxExpectedUtility, Deterministic) {
  const auto panel = random_panel(50, 4, 3);
  const auto g = build_grid(support_bounds(panel), 10);
  const auto u = enumerate_utilities(g, 5)[123];
  const auto a = max_expected_utility(panel, u);
  const auto b = max_expected_utility(panel, u);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.weights.weights(), b.weights.weights());
}

TEST(MaxExpectedUtility, FlatUtilityShortCircuits) {
  const auto panel = random_panel(20, 3, 2);
  const auto g = build_grid(support_bounds(panel), 5);
  // A single ramp at the lower bound vanishes on the whole support.
  const auto u = RussellSeoUtility::from_weights(g, {1, 0, 0, 0, 0});
  const auto sol = max_expected_utility(panel, u);
  ASSERT_TRUE(sol.optimal());
  EXPECT_EQ(sol.value, 0.0);
  EXPECT_NEAR(sol.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(sol.iterations, 0u);
}

TEST(MaxExpectedUtility, Preconditions) {
  const auto panel = random_panel(5, 2, 2);
  const auto g = build_grid(support_bounds(panel), 3);
  const auto u = RussellSeoUtility::equal_mixture(g);
  const std::vector<std::size_t> none;
  EXPECT_THROW(max_expected_utility(panel, u, none), EmptyUniverseError);
  const std::vector<std::size_t> bad{7};
  EXPECT_THROW(max_expected_utility(panel, u, bad), ValidationError);
}

TEST(UtilityLp, Shape) {
  const auto panel = random_panel(7, 4, 2);
  const auto g = build_grid(support_bounds(panel), 6);
  const auto u = RussellSeoUtility::from_weights(g, {1, 0, 2, 0, 1, 0});
  const std::vector<std::size_t> s{0, 3};
  const auto prog = build_utility_lp(panel, u, s);
  EXPECT_EQ(prog.num_vars, 7u + 2u);
  EXPECT_EQ(prog.rows.size(), 7u * u.active().size() + 1u);
  std::ostringstream os;
  lp::write_lp_format(os, prog);
  const std::string text = os.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("budget:"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(DenseSimplex, SmallTextbookProgram) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  lp::LinearProgram prog;
  prog.add_var("x", 3.0);
  prog.add_var("y", 5.0);
  prog.rows.push_back({{{0, 1.0}}, lp::Sense::le, 4.0, "c1"});
  prog.rows.push_back({{{1, 2.0}}, lp::Sense::le, 12.0, "c2"});
  prog.rows.push_back({{{0, 3.0}, {1, 2.0}}, lp::Sense::le, 18.0, "c3"});
  const auto s = lp::solve_dense(prog);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.value, 36.0, 1e-12);
  EXPECT_NEAR(s.x[0], 2.0, 1e-12);
  EXPECT_NEAR(s.x[1], 6.0, 1e-12);
}

TEST(DenseSimplex, DetectsInfeasibility) {
  lp::LinearProgram prog;
  prog.add_var("x", 1.0);
  prog.rows.push_back({{{0, 1.0}}, lp::Sense::ge, 2.0, "lo"});
  prog.rows.push_back({{{0, 1.0}}, lp::Sense::le, 1.0, "hi"});
  EXPECT_EQ(lp::solve_dense(prog).status, LpStatus::infeasible);
}

TEST(Lpm, HandExamples) {
  const std::vector<double> y{-0.1, 0.2};
  EXPECT_NEAR(lpm(y, 0.0), 0.05, 1e-15);
  EXPECT_EQ(lpm(y, -0.1), 0.0);
  EXPECT_NEAR(lpm(y, 0.3), 0.3 - 0.05, 1e-15);
}

TEST(Lpm, PanelFormsAndShift) {
  const auto panel = random_panel(30, 3, 6);
  const auto b = support_bounds(panel);
  const auto k = SimplexPortfolio::uniform(3);
  const auto l = SimplexPortfolio::unit(3, 2);
  EXPECT_EQ(lpm(panel, k, b.lower), 0.0);
  EXPECT_EQ(lpmd(panel, k, k, 0.01), 0.0);
  EXPECT_EQ(lpmd(panel, k, l, b.lower), 0.0);
  const auto kr = portfolio_returns(panel, k.weights());
  std::vector<double> lr = kr;
  for (auto& v : lr) v += 0.01;
  const double z = *std::max_element(lr.begin(), lr.end());
  EXPECT_GT(lpmd(kr, lr, z), 0.0);
  EXPECT_NEAR(lpmd(kr, lr, z), 0.01, 1e-12);
}

// Utility differences are weighted sums of LPM differentials on the grid.
TEST(Lpm, UtilityDifferenceIsWeightedLpmd) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto panel = random_panel(25, 4, seed);
    const auto g = build_grid(support_bounds(panel), 10);
    Rng rng(seed + 100);
    std::vector<double> a(4), c(4);
    for (auto& x : a) x = rng.uniform();
    for (auto& x : c) x = rng.uniform();
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sc = std::accumulate(c.begin(), c.end(), 0.0);
    for (auto& x : a) x /= sa;
    for (auto& x : c) x /= sc;
    const SimplexPortfolio kappa(a), lambda(c);
    double best_lpmd = -INFINITY, best_diff = -INFINITY;
    for (std::size_t n = 0; n < g.size(); ++n) {
      best_lpmd = std::max(best_lpmd, lpmd(panel, kappa, lambda, g.points[n]));
      std::vector<double> e(g.size(), 0.0);
      e[n] = 1.0;
      const auto u = RussellSeoUtility::from_weights(g, e);
      best_diff = std::max(best_diff, expected_utility(panel, u, c) - expected_utility(panel, u, a));
    }
    EXPECT_NEAR(best_lpmd, best_diff, 1e-6);
  }
}

}  // namespace
}  // namespace sparsessd
