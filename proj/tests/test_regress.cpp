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

#include <numbers>

#include "test_support.hpp"

namespace sparsessd {
namespace {

TEST(Ols, ExactLine) {
  std::vector<double> x, y;
  for (int t = 0; t < 10; ++t) {
    x.push_back(0.1 * t - 0.3);
    y.push_back(2.0 + 3.0 * x.back());
  }
  const auto r = ols(y, {x}, {"x"});
  EXPECT_NEAR(r.coef[0], 2.0, 1e-12);
  EXPECT_NEAR(r.coef[1], 3.0, 1e-12);
  EXPECT_NEAR(r.r2, 1.0, 1e-12);
  for (double e : r.residuals) EXPECT_NEAR(e, 0.0, 1e-12);
  EXPECT_EQ(r.names, (std::vector<std::string>{"alpha", "x"}));
}

// y = {1, 2, 4} on x = {0, 1, 2}: b = 3/2, a = 5/6, s^2 = 1/6 with one
// residual degree of freedom, so t follows a Cauchy law.
TEST(Ols, ThreePointHandExample) {
  const std::vector<double> y{1.0, 2.0, 4.0};
  const std::vector<double> x{0.0, 1.0, 2.0};
  const auto r = ols(y, {x});
  EXPECT_NEAR(r.coef[0], 5.0 / 6.0, 1e-10);
  EXPECT_NEAR(r.coef[1], 1.5, 1e-10);
  EXPECT_NEAR(r.se[1], std::sqrt(1.0 / 12.0), 1e-10);
  EXPECT_NEAR(r.se[0], std::sqrt(5.0) / 6.0, 1e-10);
  EXPECT_NEAR(r.t[1], 1.5 * std::sqrt(12.0), 1e-10);
  EXPECT_NEAR(r.t[0], std::sqrt(5.0), 1e-10);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(r.p[j], 1.0 - 2.0 * std::atan(std::abs(r.t[j])) / std::numbers::pi, 1e-10);
    EXPECT_NEAR(r.t[j], r.coef[j] / r.se[j], 1e-12);
  }
  EXPECT_EQ(r.dof, 1u);
  EXPECT_NEAR(r.r2, 1.0 - (1.0 / 6.0) / (14.0 / 3.0), 1e-10);
}

TEST(Ols, FittedPlusResidualsReproduceY) {
  const auto p = testing::random_panel(50, 3, 4);
  const auto y = p.column(0);
  const auto r = ols(y, {p.column(1), p.column(2)}, {"f1", "f2"});
  // Equal up to the rounding of one addition.
  for (std::size_t t = 0; t < 50; ++t) EXPECT_DOUBLE_EQ(r.fitted[t] + r.residuals[t], y[t]);
}

TEST(Ols, InterceptOnlyIsMean) {
  const std::vector<double> y{0.1, 0.4, -0.2, 0.3};
  const auto r = ols(y, {});
  ASSERT_EQ(r.coef.size(), 1u);
  EXPECT_NEAR(r.coef[0], mean_of(y), 1e-15);
  EXPECT_NEAR(r.se[0], sd_of(y) / 2.0, 1e-14);
}

TEST(Ols, IndependentRegressorInsignificant) {
  const auto p = testing::random_panel(5000, 2, 12, 0.0, 1.0);
  const auto r = ols(p.column(0), {p.column(1)});
  EXPECT_LE(std::abs(r.coef[1]), 3.0 * r.se[1]);
}

TEST(Ols, ZeroColumnIsRankDeficient) {
  const auto p = testing::random_panel(20, 2, 1);
  const std::vector<double> zero(20, 0.0);
  try {
    ols(p.column(0), {p.column(1), zero}, {"MKT", "ZERO"});
    FAIL() << "expected a rank-deficiency error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ZERO"), std::string::npos) << e.what();
  }
}

TEST(Ols, TooFewObservations) {
  const std::vector<double> y{1.0, 2.0}, x{0.0, 1.0};
  EXPECT_THROW(ols(y, {x}), ValidationError);
}

// With zero lags the Newey-West estimator is White's sandwich.
TEST(NeweyWest, ZeroLagsIsWhite) {
  const std::vector<double> y{1.0, 2.0, 4.0, 3.0, 7.0};
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const auto r = ols(y, {x}, {}, SeKind::newey_west, 0);
  // Hand sandwich for simple regression: var(b) = sum (x - xbar)^2 e^2 / Sxx^2.
  const double xbar = 2.0;
  double sxx = 0.0, meat = 0.0;
  for (std::size_t t = 0; t < 5; ++t) {
    sxx += (x[t] - xbar) * (x[t] - xbar);
    meat += (x[t] - xbar) * (x[t] - xbar) * r.residuals[t] * r.residuals[t];
  }
  EXPECT_NEAR(r.se[1], std::sqrt(meat) / sxx, 1e-12);
  EXPECT_EQ(r.lags, 0u);
}

TEST(NeweyWest, BartlettLagOne) {
  const std::vector<double> y{1.0, 2.0, 4.0, 3.0, 7.0, 6.0};
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const auto r = ols(y, {x}, {}, SeKind::newey_west, 1);
  const double xbar = 2.5;
  double sxx = 0.0, meat = 0.0;
  std::vector<double> g(6);
  for (std::size_t t = 0; t < 6; ++t) {
    g[t] = (x[t] - xbar) * r.residuals[t];
    sxx += (x[t] - xbar) * (x[t] - xbar);
    meat += g[t] * g[t];
  }
  double cross = 0.0;
  for (std::size_t t = 1; t < 6; ++t) cross += g[t] * g[t - 1];
  meat += 2.0 * 0.5 * cross;
  EXPECT_NEAR(r.se[1], std::sqrt(meat) / sxx, 1e-12);
}

TEST(NeweyWest, DefaultLag) {
  EXPECT_EQ(default_newey_west_lags(100), 3u);
  EXPECT_EQ(default_newey_west_lags(1000), 7u);
}

}  // namespace
}  // namespace sparsessd
