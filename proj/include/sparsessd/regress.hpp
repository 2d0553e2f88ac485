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

// Least squares with an intercept and plain or Newey-West standard errors.

#pragma once

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"

namespace sparsessd {

enum class SeKind { plain, newey_west };

struct RegressionResult {
  std::vector<std::string> names;  // "alpha" then regressors
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> t;
  std::vector<double> p;
  double r2 = 0.0;
  std::vector<double> fitted;
  std::vector<double> residuals;
  std::size_t dof = 0;
  SeKind se_kind = SeKind::plain;
  std::size_t lags = 0;
};

inline std::size_t default_newey_west_lags(std::size_t T) {
  return static_cast<std::size_t>(std::floor(0.75 * std::cbrt(static_cast<double>(T))));
}

// y = a + X b + e. `x` holds one column per regressor.
inline RegressionResult ols(std::span<const double> y, const std::vector<std::vector<double>>& x,
                            std::vector<std::string> names = {}, SeKind se_kind = SeKind::plain,
                            std::optional<std::size_t> lags = std::nullopt) {
  const std::size_t T = y.size();
  const std::size_t k = x.size();
  if (names.empty()) {
    for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  if (names.size() != k) throw ParameterError("one name per regressor is required");
  for (const auto& col : x) {
    if (col.size() != T) throw ValidationError("regressor length differs from the response");
  }
  if (T <= k + 1) throw ValidationError("need more observations than regressors plus one");

  const auto n = static_cast<Eigen::Index>(T);
  const auto m = static_cast<Eigen::Index>(k + 1);
  Eigen::MatrixXd X(n, m);
  Eigen::VectorXd Y(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    X(t, 0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) X(t, static_cast<Eigen::Index>(j + 1)) = x[j][t];
    Y(t) = y[static_cast<std::size_t>(t)];
  }

  RegressionResult res;
  res.names.push_back("alpha");
  for (auto& s : names) res.names.push_back(s);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) {
    const auto perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index r = qr.rank(); r < m; ++r) {
      if (!cols.empty()) cols += ", ";
      cols += res.names[static_cast<std::size_t>(perm(r))];
    }
    throw ValidationError("regressors are collinear; dependent columns: " + cols);
  }
  const Eigen::VectorXd beta = qr.solve(Y);
  const Eigen::VectorXd fitted = X * beta;
  const Eigen::VectorXd resid = Y - fitted;
  res.dof = T - k - 1;
  res.se_kind = se_kind;

  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  Eigen::MatrixXd cov;
  if (se_kind == SeKind::plain) {
    const double s2 = resid.squaredNorm() / static_cast<double>(res.dof);
    cov = s2 * xtx_inv;
  } else {
    const std::size_t L = lags.value_or(default_newey_west_lags(T));
    res.lags = L;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index t = 0; t < n; ++t) {
      S += resid(t) * resid(t) * X.row(t).transpose() * X.row(t);
    }
    for (std::size_t l = 1; l <= L && l < T; ++l) {
      const double w = 1.0 - static_cast<double>(l) / static_cast<double>(L + 1);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index t = static_cast<Eigen::Index>(l); t < n; ++t) {
        const Eigen::Index s = t - static_cast<Eigen::Index>(l);
        G += resid(t) * resid(s) * X.row(t).transpose() * X.row(s);
      }
      S += w * (G + G.transpose());
    }
    cov = xtx_inv * S * xtx_inv;
  }

  boost::math::students_t dist(static_cast<double>(res.dof));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double c = beta(j);
    const double se = std::sqrt(std::max(0.0, cov(j, j)));
    res.coef.push_back(c);
    res.se.push_back(se);
    if (se > 0.0) {
      const double tv = c / se;
      res.t.push_back(tv);
      res.p.push_back(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(tv))));
    } else {
      res.t.push_back(c == 0.0 ? 0.0 : std::copysign(INFINITY, c));
      res.p.push_back(c == 0.0 ? 1.0 : 0.0);
    }
  }
  const double ybar = Y.mean();
  const double tss = (Y.array() - ybar).square().sum();
  res.r2 = tss > 0.0 ? 1.0 - resid.squaredNorm() / tss : (resid.squaredNorm() == 0.0 ? 1.0 : 0.0);
  res.fitted.assign(fitted.data(), fitted.data() + n);
  res.residuals.resize(T);
  for (std::size_t t = 0; t < T; ++t) res.residuals[t] = y[t] - res.fitted[t];
  return res;
}

}  // namespace sparsessd
