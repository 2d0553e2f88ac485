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

// Subsampling confidence intervals for the diversification loss, and the
// block-bootstrap test of pairwise stochastic non-dominance.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/lp.hpp"
#include "sparsessd/parallel.hpp"
#include "sparsessd/random.hpp"
#include "sparsessd/spanning.hpp"
#include "sparsessd/utility.hpp"

namespace sparsessd {

inline std::size_t default_subsample_length(std::size_t T) {
  const auto b = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(T), 0.6)));
  return std::clamp<std::size_t>(b, 1, std::max<std::size_t>(T, 1));
}

struct SubsampleConfig {
  std::optional<std::size_t> block_length;  // b_T, default floor(T^0.6)
  double alpha = 0.05;
  // Drop utilities with weight on grid points below this threshold.
  std::optional<double> trim_below;
  std::size_t threads = 1;

  void validate(std::size_t T) const {
    if (!(alpha > 0.0 && alpha < 0.5)) {
      throw ParameterError("alpha must lie in (0, 0.5)");
    }
    if (block_length && (*block_length < 1 || *block_length > T)) {
      throw ParameterError("subsample length must lie in [1, T]");
    }
  }
};

struct ConfidenceInterval {
  double estimate = 0.0;  // M
  double lower = 0.0;
  double upper = 0.0;
  double quantile = 0.0;  // q-hat
  double alpha = 0.05;
  std::size_t block_length = 0;
  std::vector<double> statistics;
  std::size_t lp_solves = 0;
};

// (1 - alpha) empirical quantile as the ceil((1 - alpha) n)-th order statistic.
inline double upper_order_statistic(std::vector<double> v, double alpha) {
  if (v.empty()) throw ParameterError("no statistics to take a quantile of");
  const double pos = std::ceil((1.0 - alpha) * static_cast<double>(v.size()) - 1e-12);
  std::size_t k = static_cast<std::size_t>(std::max(1.0, pos));
  k = std::min(k, v.size());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

// Each subsample of consecutive rows reuses the full-sample sparse optimizers
// kappa_u; only the full-simplex side is re-optimized. Per subsample the exact
// maximum over utilities is found by bounding: the sum of single-ramp optima
// bounds every mixture from above, and known portfolios bound it from below,
// so programs are solved only for utilities that can still attain the max.
inline ConfidenceInterval subsample_ci(SpanningEngine& engine, const SpanningResult& spanning,
                                       const SubsampleConfig& config) {
  const ReturnPanel& panel = engine.panel();
  const std::size_t T = panel.rows();
  const std::size_t p = panel.cols();
  config.validate(T);
  const auto& utilities = engine.utilities();
  const std::size_t nu = utilities.size();
  if (spanning.sparse_optimizers.size() != nu) {
    throw ParameterError("spanning result does not match the utility class");
  }
  const std::size_t b = config.block_length.value_or(default_subsample_length(T));
  const auto& z = engine.grid().points;
  const std::size_t n1 = z.size();

  std::vector<char> use(nu, 1);
  if (config.trim_below) {
    for (std::size_t u = 0; u < nu; ++u) {
      const auto& v = utilities[u].weights();
      for (std::size_t n = 0; n < n1; ++n) {
        if (v[n] > 0.0 && z[n] < *config.trim_below) use[u] = 0;
      }
    }
    if (std::none_of(use.begin(), use.end(), [](char c) { return c != 0; })) {
      throw ParameterError("trimming removes every utility");
    }
  }

  // Candidate portfolios for lower bounds: full-sample optimizers, deduped.
  std::vector<std::vector<double>> cands;
  {
    const auto& full = engine.full_optimizers();
    for (const auto& w : full) {
      bool dup = false;
      for (const auto& c : cands) {
        double d = 0.0;
        for (std::size_t i = 0; i < p; ++i) d = std::max(d, std::abs(c[i] - w[i]));
        if (d < 1e-12) {
          dup = true;
          break;
        }
      }
      if (!dup) cands.push_back(w.weights());
    }
  }
  std::vector<RussellSeoUtility> ramps;
  for (std::size_t n = 0; n < n1; ++n) {
    std::vector<double> e(n1, 0.0);
    e[n] = 1.0;
    ramps.push_back(RussellSeoUtility::from_weights(engine.grid(), e));
  }

  const std::size_t count = T - b + 1;
  ConfidenceInterval ci;
  ci.estimate = spanning.loss;
  ci.alpha = config.alpha;
  ci.block_length = b;
  ci.statistics.assign(count, 0.0);
  std::vector<std::size_t> solves(count, 0);
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), std::size_t{0});

  auto port_ramps = [&](const double* x, std::span<const double> w) {
    std::vector<double> y(b);
    for (std::size_t t = 0; t < b; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        if (w[i] != 0.0) s += x[t * p + i] * w[i];
      }
      y[t] = s;
    }
    return ramp_means(y, z);
  };

  parallel_for(count, config.threads, [&](std::size_t s) {
    const double* x = panel.values().data() + s * p;
    // Sparse side, fixed portfolios.
    std::vector<double> base(nu);
    {
      std::vector<std::vector<double>> kr(nu);
      for (std::size_t u = 0; u < nu; ++u) {
        kr[u] = port_ramps(x, spanning.sparse_optimizers[u].weights());
        base[u] = utilities[u].from_ramp_means(kr[u]);
      }
    }
    // Single-ramp optima give the upper bounds, and their optimizers join the
    // candidate pool.
    std::vector<double> ramp_opt(n1);
    std::vector<std::vector<double>> pool_r;
    pool_r.reserve(cands.size() + n1);
    for (std::size_t n = 0; n < n1; ++n) {
      UtilityMaximizer m(x, b, p, ramps[n]);
      LpSolution sol = m.solve(all);
      ++solves[s];
      if (!sol.optimal()) {
        throw NumericalError("subsample " + std::to_string(s) + ": " + sol.diagnostics);
      }
      ramp_opt[n] = sol.value;
      pool_r.push_back(port_ramps(x, sol.weights.weights()));
    }
    for (const auto& c : cands) pool_r.push_back(port_ramps(x, c));

    std::vector<double> ub(nu), lb(nu);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < nu; ++u) {
      if (!use[u]) continue;
      const auto& v = utilities[u].weights();
      double up = 0.0;
      for (std::size_t n = 0; n < n1; ++n) up += v[n] * ramp_opt[n];
      double lo = -std::numeric_limits<double>::infinity();
      for (const auto& r : pool_r) lo = std::max(lo, utilities[u].from_ramp_means(r));
      ub[u] = up - base[u];
      lb[u] = lo - base[u];
      best = std::max(best, lb[u]);
    }
    std::vector<std::size_t> order;
    for (std::size_t u = 0; u < nu; ++u) {
      if (use[u]) order.push_back(u);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return ub[a] > ub[c]; });
    for (std::size_t u : order) {
      if (ub[u] <= best) break;
      if (ub[u] - lb[u] <= 1e-13) continue;
      UtilityMaximizer m(x, b, p, utilities[u]);
      LpSolution sol = m.solve(all);
      ++solves[s];
      if (!sol.optimal()) {
        throw NumericalError("subsample " + std::to_string(s) + ", utility " +
                             std::to_string(u) + ": " + sol.diagnostics);
      }
      best = std::max(best, sol.value - base[u]);
    }
    ci.statistics[s] = std::sqrt(static_cast<double>(b)) * (best - spanning.loss);
  });

  ci.lp_solves = std::accumulate(solves.begin(), solves.end(), std::size_t{0});
  ci.quantile = upper_order_statistic(ci.statistics, config.alpha);
  const double half = ci.quantile / std::sqrt(static_cast<double>(T));
  ci.lower = std::max(0.0, ci.estimate - half);
  ci.upper = std::max(ci.lower, ci.estimate + half);
  return ci;
}

inline std::size_t default_bootstrap_block(std::size_t T) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(T)) - 1e-12)));
}

struct DominanceConfig {
  std::vector<double> z_grid;  // empty: N1-point grid over the pooled range
  std::size_t grid_size = 10;
  std::optional<std::size_t> block_length;  // default ceil(T^(1/3))
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  bool recenter = true;
  double level = 0.05;
  std::size_t threads = 1;
};

struct DominanceTestResult {
  double statistic = 0.0;  // xi_T
  double argmax_z = 0.0;
  double p_value = 1.0;
  std::size_t replications = 0;
  std::size_t block_length = 0;
  bool reject = false;
  std::vector<double> bootstrap;
  std::vector<double> z_grid;
};

// max over the grid of LPM_kappa(z) - LPM_lambda(z).
inline std::pair<double, double> sup_lpmd(std::span<const double> kappa,
                                          std::span<const double> lambda,
                                          std::span<const double> z_grid) {
  double best = -std::numeric_limits<double>::infinity();
  double arg = z_grid.empty() ? 0.0 : z_grid.front();
  for (double z : z_grid) {
    const double d = lpmd(kappa, lambda, z);
    if (d > best) {
      best = d;
      arg = z;
    }
  }
  return {best, arg};
}

// H0: lambda does not strictly dominate kappa (second order). xi_T is the
// largest lower-partial-moment gap of kappa over lambda on the grid; the
// p-value is the share of circular block bootstrap statistics above it.
// Two series that coincide at every grid point satisfy H0 and never reject.
inline DominanceTestResult nondominance_test(std::span<const double> kappa,
                                             std::span<const double> lambda,
                                             const DominanceConfig& config) {
  if (kappa.size() != lambda.size()) {
    throw ValidationError("return series have different lengths");
  }
  const std::size_t T = kappa.size();
  if (T == 0) throw ValidationError("empty return series");
  if (config.replications < 1) throw ParameterError("replications must be >= 1");
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw ParameterError("test level must lie in (0, 1)");
  }
  DominanceTestResult res;
  res.z_grid = config.z_grid;
  if (res.z_grid.empty()) {
    const auto [a0, a1] = std::minmax_element(kappa.begin(), kappa.end());
    const auto [b0, b1] = std::minmax_element(lambda.begin(), lambda.end());
    SupportBounds sb{std::min(*a0, *b0), std::max(*a1, *b1)};
    if (sb.lower < sb.upper) {
      res.z_grid = build_grid(sb, std::max<std::size_t>(2, config.grid_size)).points;
    } else {
      res.z_grid = {sb.lower};
    }
  }
  const std::size_t L = config.block_length.value_or(default_bootstrap_block(T));
  if (L < 1 || L > T) throw ParameterError("block length must lie in [1, T]");
  res.block_length = L;
  res.replications = config.replications;
  const auto [xi, arg] = sup_lpmd(kappa, lambda, res.z_grid);
  res.statistic = xi;
  res.argmax_z = arg;

  std::vector<double> d0(res.z_grid.size());
  for (std::size_t k = 0; k < d0.size(); ++k) d0[k] = lpmd(kappa, lambda, res.z_grid[k]);

  res.bootstrap.assign(config.replications, 0.0);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    Rng rng(config.seed, r);
    std::vector<double> ka(T), la(T);
    std::size_t filled = 0;
    while (filled < T) {
      const std::size_t start = static_cast<std::size_t>(rng.below(T));
      for (std::size_t k = 0; k < L && filled < T; ++k, ++filled) {
        const std::size_t t = (start + k) % T;
        ka[filled] = kappa[t];
        la[filled] = lambda[t];
      }
    }
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d0.size(); ++k) {
      const double d = lpmd(ka, la, res.z_grid[k]) - (config.recenter ? d0[k] : 0.0);
      m = std::max(m, d);
    }
    res.bootstrap[r] = m;
  });
  std::size_t exceed = 0;
  for (double v : res.bootstrap) {
    if (v > res.statistic) ++exceed;
  }
  res.p_value = static_cast<double>(exceed) / static_cast<double>(config.replications);
  // Equality everywhere is non-dominance, so a zero gap is never evidence.
  res.reject = res.p_value < config.level && res.statistic > 1e-12;
  return res;
}

}  // namespace sparsessd
