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

// Rolling-window out-of-sample evaluation of the sparse spanning strategy and
// the equally weighted portfolio.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/lp.hpp"
#include "sparsessd/metrics.hpp"
#include "sparsessd/panel.hpp"
#include "sparsessd/parallel.hpp"
#include "sparsessd/spanning.hpp"

namespace sparsessd {

enum class Strategy { sparse_ssd, one_over_n };

inline const char* to_string(Strategy s) {
  return s == Strategy::sparse_ssd ? "sparse_ssd" : "one_over_n";
}

// Which sparse portfolio is held once the support is chosen.
enum class HeldPortfolio { argmax_gap, equal_mixture };

inline const char* to_string(HeldPortfolio h) {
  return h == HeldPortfolio::argmax_gap ? "argmax-gap-utility" : "equal-mixture-utility";
}

struct BacktestConfig {
  std::size_t window = 240;
  std::size_t step = 1;
  SpanningConfig spanning;
  std::vector<Strategy> strategies{Strategy::sparse_ssd, Strategy::one_over_n};
  std::size_t threads = 1;
};

struct BacktestRecord {
  Date date;                          // period whose return is realized
  std::size_t training_assets = 0;
  std::vector<std::size_t> support;   // panel asset indices
  std::size_t q = 0;
  double loss = 0.0;
  HeldPortfolio held = HeldPortfolio::equal_mixture;
  std::vector<double> weights;        // over all panel assets
  double realized = 0.0;
  std::size_t missing_next = 0;       // held assets without a next-period return
};

struct StrategyRun {
  Strategy strategy = Strategy::sparse_ssd;
  std::vector<BacktestRecord> records;

  std::vector<double> realized() const {
    std::vector<double> r;
    r.reserve(records.size());
    for (const auto& rec : records) r.push_back(rec.realized);
    return r;
  }
  std::vector<std::vector<double>> weights() const {
    std::vector<std::vector<double>> w;
    w.reserve(records.size());
    for (const auto& rec : records) w.push_back(rec.weights);
    return w;
  }
};

struct BacktestResult {
  std::vector<StrategyRun> runs;
};

// W_t = prod_{s <= t} (1 + R_s).
inline std::vector<double> cumulative_wealth(std::span<const double> r) {
  std::vector<double> w(r.size());
  double acc = 1.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    acc *= 1.0 + r[t];
    w[t] = acc;
  }
  return w;
}

namespace detail {

// Weights on the training sub-panel columns, chosen from data before `row`.
inline BacktestRecord sparse_ssd_weights(const ReturnPanel& train, const SpanningConfig& cfg) {
  BacktestRecord rec;
  SpanningEngine engine(train, cfg.n1, cfg.n2, 1);
  const SpanningResult res = engine.select(cfg);
  rec.support = res.sorted_support();
  rec.q = res.support.size();
  rec.loss = res.loss;
  if (res.loss > cfg.loss_tolerance) {
    rec.held = HeldPortfolio::argmax_gap;
    rec.weights = res.sparse_optimizers[res.argmax_utility].weights();
  } else {
    rec.held = HeldPortfolio::equal_mixture;
    const auto u = RussellSeoUtility::equal_mixture(engine.grid());
    UtilityMaximizer m(train.values().data(), train.rows(), train.cols(), u);
    const LpSolution sol = m.solve(rec.support);
    if (!sol.optimal()) throw NumericalError("held portfolio: " + sol.diagnostics);
    rec.weights = sol.weights.weights();
  }
  return rec;
}

}  // namespace detail

inline BacktestResult run_backtest(const ReturnPanel& panel, const BacktestConfig& config) {
  if (config.strategies.empty()) throw ParameterError("no strategy requested");
  if (config.window < 2) throw ParameterError("training window must be at least 2");
  if (config.step < 1) throw ParameterError("step must be at least 1");
  if (config.window + 1 > panel.rows()) {
    throw RangeError("panel has " + std::to_string(panel.rows()) +
                     " periods, fewer than window + 1");
  }
  config.spanning.validate();
  const std::size_t p = panel.cols();
  std::vector<std::size_t> dates;
  for (std::size_t r = config.window; r < panel.rows(); r += config.step) dates.push_back(r);

  BacktestResult out;
  for (Strategy s : config.strategies) {
    StrategyRun run;
    run.strategy = s;
    run.records.resize(dates.size());
    out.runs.push_back(std::move(run));
  }

  parallel_for(dates.size(), config.threads, [&](std::size_t k) {
    const std::size_t r = dates[k];
    const std::size_t first = r - config.window;
    ReturnPanel train;
    try {
      train = window_and_filter(panel, first, config.window);
    } catch (const EmptyUniverseError&) {
      throw EmptyUniverseError("no asset survives the training window ending before " +
                               panel.dates()[r].iso());
    }
    std::vector<std::size_t> keep;
    keep.reserve(train.cols());
    for (const auto& name : train.assets()) keep.push_back(panel.asset_index(name));
    for (std::size_t sidx = 0; sidx < config.strategies.size(); ++sidx) {
      BacktestRecord rec;
      std::vector<double> local;
      if (config.strategies[sidx] == Strategy::sparse_ssd) {
        rec = detail::sparse_ssd_weights(train, config.spanning);
        local = rec.weights;
        for (auto& i : rec.support) i = keep[i];
      } else {
        local.assign(keep.size(), 1.0 / static_cast<double>(keep.size()));
        rec.support = keep;
        rec.q = keep.size();
      }
      rec.date = panel.dates()[r];
      rec.training_assets = keep.size();
      rec.weights.assign(p, 0.0);
      double realized = 0.0;
      for (std::size_t j = 0; j < keep.size(); ++j) {
        rec.weights[keep[j]] = local[j];
        if (local[j] == 0.0) continue;
        // A held asset without a next-period return contributes zero.
        if (panel.observed(r, keep[j])) {
          realized += local[j] * panel(r, keep[j]);
        } else {
          ++rec.missing_next;
        }
      }
      rec.realized = realized;
      out.runs[sidx].records[k] = std::move(rec);
    }
  });
  return out;
}

}  // namespace sparsessd
