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

// Portfolios on the simplex, lower partial moments and the expected-utility
// linear program over a support-restricted simplex.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/lp/dense_simplex.hpp"
#include "sparsessd/lp/ramp_simplex.hpp"
#include "sparsessd/panel.hpp"
#include "sparsessd/utility.hpp"

namespace sparsessd {

using lp::LpStatus;

// Nonnegative weights over the panel's assets summing to one.
class SimplexPortfolio {
 public:
  SimplexPortfolio() = default;
  explicit SimplexPortfolio(std::vector<double> weights)
      : weights_(std::move(weights)) {}

  static SimplexPortfolio unit(std::size_t p, std::size_t i) {
    std::vector<double> w(p, 0.0);
    w.at(i) = 1.0;
    return SimplexPortfolio(std::move(w));
  }

  static SimplexPortfolio uniform(std::size_t p, std::span<const std::size_t> support) {
    std::vector<double> w(p, 0.0);
    for (std::size_t i : support) w.at(i) = 1.0 / static_cast<double>(support.size());
    return SimplexPortfolio(std::move(w));
  }

  static SimplexPortfolio uniform(std::size_t p) {
    return SimplexPortfolio(std::vector<double>(p, 1.0 / static_cast<double>(p)));
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  // Indices with strictly positive weight.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] > 0.0) s.push_back(i);
    }
    return s;
  }

  bool valid(double tol = 1e-8) const {
    if (weights_.empty()) return false;
    double total = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < -tol) return false;
      total += w;
    }
    return std::abs(total - 1.0) <= tol;
  }

  void validate(std::size_t p, double tol = 1e-8) const {
    if (weights_.size() != p) {
      throw ValidationError("portfolio has " + std::to_string(weights_.size()) +
                            " weights for " + std::to_string(p) + " assets");
    }
    if (!valid(tol)) throw ValidationError("portfolio is not on the simplex");
  }

 private:
  std::vector<double> weights_;
};

// X_t' w for every row.
inline std::vector<double> portfolio_returns(const ReturnPanel& panel,
                                             std::span<const double> w) {
  if (w.size() != panel.cols()) {
    throw ValidationError("weight vector does not match panel width");
  }
  std::vector<double> out(panel.rows(), 0.0);
  for (std::size_t t = 0; t < panel.rows(); ++t) {
    const auto row = panel.row(t);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) s += row[i] * w[i];
    }
    out[t] = s;
  }
  return out;
}

// (1/T) sum_t (z - y_t)_+.
inline double lpm(std::span<const double> y, double z) {
  if (y.empty()) return 0.0;
  double s = 0.0;
  for (double v : y) {
    if (z > v) s += z - v;
  }
  return s / static_cast<double>(y.size());
}

inline double lpm(const ReturnPanel& panel, const SimplexPortfolio& w, double z) {
  w.validate(panel.cols());
  return lpm(portfolio_returns(panel, w.weights()), z);
}

// D(z, kappa, lambda) = LPM_kappa(z) - LPM_lambda(z).
inline double lpmd(const ReturnPanel& panel, const SimplexPortfolio& kappa,
                   const SimplexPortfolio& lambda, double z) {
  return lpm(panel, kappa, z) - lpm(panel, lambda, z);
}

inline double lpmd(std::span<const double> kappa_returns,
                   std::span<const double> lambda_returns, double z) {
  return lpm(kappa_returns, z) - lpm(lambda_returns, z);
}

// (1/T) sum_t u(X_t' w).
inline double expected_utility(const ReturnPanel& panel, const RussellSeoUtility& u,
                               std::span<const double> w) {
  const auto y = portfolio_returns(panel, w);
  double s = 0.0;
  for (double v : y) s += u(v);
  return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

enum class LpBackend { ramp, dense };

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  double value = 0.0;
  SimplexPortfolio weights;
  std::size_t iterations = 0;
  std::string diagnostics;
  lp::RampBasis basis;  // only filled by the ramp backend

  bool optimal() const { return status == LpStatus::optimal; }
};

// The canonical LP: variables y_1..y_T (free) then lambda_i for i in support.
inline lp::LinearProgram build_utility_lp(const ReturnPanel& panel,
                                          const RussellSeoUtility& u,
                                          std::span<const std::size_t> support) {
  lp::LinearProgram prog;
  const std::size_t T = panel.rows();
  const double inv_t = 1.0 / static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t) {
    prog.add_var("y" + std::to_string(t + 1), inv_t, true);
  }
  std::vector<std::size_t> lam;
  for (std::size_t i : support) {
    lam.push_back(prog.add_var("l_" + std::to_string(i + 1), 0.0));
  }
  const auto& c1 = u.slopes();
  const auto& c0 = u.intercepts();
  for (std::size_t t = 0; t < T; ++t) {
    const auto row = panel.row(t);
    for (std::size_t n : u.active()) {
      lp::LinearProgram::Row r;
      r.terms.emplace_back(t, 1.0);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double a = -c1[n] * row[support[k]];
        if (a != 0.0) r.terms.emplace_back(lam[k], a);
      }
      r.sense = lp::Sense::le;
      r.rhs = c0[n];
      r.name = "u" + std::to_string(t + 1) + "_" + std::to_string(n + 1);
      prog.rows.push_back(std::move(r));
    }
  }
  lp::LinearProgram::Row budget;
  for (std::size_t k = 0; k < support.size(); ++k) budget.terms.emplace_back(lam[k], 1.0);
  budget.sense = lp::Sense::eq;
  budget.rhs = 1.0;
  budget.name = "budget";
  prog.rows.push_back(std::move(budget));
  return prog;
}

struct LpOptions {
  LpBackend backend = LpBackend::ramp;
  const lp::RampBasis* warm = nullptr;
};

// Expected-utility maximizer over a fixed row-major data block. Keeps the
// utility's piecewise-linear description so repeated solves stay cheap.
class UtilityMaximizer {
 public:
  UtilityMaximizer(const double* x, std::size_t rows, std::size_t cols,
                   const RussellSeoUtility& u)
      : x_(x), rows_(rows), cols_(cols), u_(&u) {
    pb_.x = x;
    pb_.rows = rows;
    pb_.cols = cols;
    pb_.kinks = u.kinks();
    weights_.reserve(u.kinks().size());
    // Kink weights are the slope drops between consecutive segments.
    const auto& g = u.segment_slopes();
    for (std::size_t k = 0; k + 1 < g.size(); ++k) weights_.push_back(g[k] - g[k + 1]);
    pb_.kink_weights = weights_;
    pb_.segment_slopes = u.segment_slopes();
  }

  UtilityMaximizer(const UtilityMaximizer&) = delete;
  UtilityMaximizer& operator=(const UtilityMaximizer&) = delete;

  LpSolution solve(std::span<const std::size_t> support,
                   const lp::RampBasis* warm = nullptr) const {
    LpSolution out;
    if (support.empty()) throw EmptyUniverseError("empty portfolio support");
    for (std::size_t i : support) {
      if (i >= cols_) throw ValidationError("support index out of range");
    }
    if (trivially_zero(support)) {
      out.status = LpStatus::optimal;
      out.value = 0.0;
      out.weights = SimplexPortfolio::uniform(cols_, support);
      return out;
    }
    lp::RampSimplex solver(pb_);
    lp::RampSolution r = solver.solve(support, warm);
    out.status = r.status;
    out.iterations = r.iterations;
    out.diagnostics = std::move(r.diagnostics);
    if (r.status == LpStatus::optimal) {
      out.value = r.value;
      out.weights = SimplexPortfolio(std::move(r.weights));
      out.basis = std::move(r.basis);
    }
    return out;
  }

  double value_of(std::span<const double> w) const {
    lp::RampSimplex solver(pb_);
    return solver.evaluate(w);
  }

  const RussellSeoUtility& utility() const { return *u_; }

 private:
  // u vanishes on every achievable outcome when all allowed returns lie at or
  // above the last kink.
  bool trivially_zero(std::span<const std::size_t> support) const {
    if (pb_.kinks.empty()) return true;
    const double top = pb_.kinks.back();
    for (std::size_t t = 0; t < rows_; ++t) {
      const double* row = x_ + t * cols_;
      for (std::size_t i : support) {
        if (row[i] < top) return false;
      }
    }
    return true;
  }

  const double* x_;
  std::size_t rows_, cols_;
  const RussellSeoUtility* u_;
  std::vector<double> weights_;
  lp::RampProblem pb_;
};

inline LpSolution solve_with_dense(const ReturnPanel& panel, const RussellSeoUtility& u,
                                   std::span<const std::size_t> support) {
  LpSolution out;
  const auto prog = build_utility_lp(panel, u, support);
  const auto d = lp::solve_dense(prog);
  out.status = d.status;
  out.iterations = d.iterations;
  out.diagnostics = d.diagnostics;
  if (d.status != LpStatus::optimal) return out;
  std::vector<double> w(panel.cols(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double v = std::max(0.0, d.x[panel.rows() + k]);
    w[support[k]] = v;
    total += v;
  }
  if (!(total > 0.0)) {
    out.status = LpStatus::numerical_failure;
    out.diagnostics = "degenerate weight vector";
    return out;
  }
  for (double& v : w) v /= total;
  out.value = expected_utility(panel, u, w);
  if (std::abs(out.value - d.value) > 1e-7) {
    out.status = LpStatus::numerical_failure;
    out.diagnostics = "objective does not match re-evaluated utility";
    return out;
  }
  out.weights = SimplexPortfolio(std::move(w));
  return out;
}

// sup over simplex portfolios supported on `support` of (1/T) sum_t u(X_t' w).
inline LpSolution max_expected_utility(const ReturnPanel& panel,
                                       const RussellSeoUtility& u,
                                       std::span<const std::size_t> support,
                                       const LpOptions& options = {}) {
  if (support.empty()) throw EmptyUniverseError("empty portfolio support");
  if (!panel.fully_observed()) {
    throw ValidationError("expected-utility program needs a fully observed panel");
  }
  if (panel.rows() == 0) throw ValidationError("panel has no observations");
  if (options.backend == LpBackend::dense) return solve_with_dense(panel, u, support);
  UtilityMaximizer m(panel.values().data(), panel.rows(), panel.cols(), u);
  return m.solve(support, options.warm);
}

inline LpSolution max_expected_utility(const ReturnPanel& panel,
                                       const RussellSeoUtility& u,
                                       const LpOptions& options = {}) {
  std::vector<std::size_t> all(panel.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return max_expected_utility(panel, u, all, options);
}

}  // namespace sparsessd
