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

// Forward stepwise selection of a sparse spanning support and the
// diversification loss max_u (J_u - K_u(S)), where J_u is the best expected
// utility over all assets and K_u(S) the best over portfolios supported on S.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/lp.hpp"
#include "sparsessd/panel.hpp"
#include "sparsessd/parallel.hpp"
#include "sparsessd/utility.hpp"

namespace sparsessd {

struct SpanningConfig {
  std::size_t q_max = 10;
  std::optional<std::size_t> iteration_cap;  // default ceil(q ln(T + 1))
  double loss_tolerance = 1e-6;
  std::size_t n1 = 10;
  std::size_t n2 = 5;
  // Iterate up to the iteration cap instead of stopping at q_max assets.
  bool theory_mode = false;
  std::size_t threads = 1;

  void validate() const {
    if (q_max < 1) throw ParameterError("q_max must be at least 1");
    if (iteration_cap && *iteration_cap < q_max) {
      throw ParameterError("iteration cap must be at least q_max");
    }
    if (!(loss_tolerance >= 0.0)) throw ParameterError("loss tolerance must be >= 0");
    if (n1 < 2) throw ParameterError("N1 must be at least 2");
    if (n2 < 2) throw ParameterError("N2 must be at least 2");
  }

  std::size_t resolved_cap(std::size_t T) const {
    if (iteration_cap) return *iteration_cap;
    const double r = std::ceil(static_cast<double>(q_max) *
                               std::log(static_cast<double>(T) + 1.0));
    return std::max(q_max, static_cast<std::size_t>(r));
  }
};

struct UtilityGap {
  double full = 0.0;    // J_u
  double sparse = 0.0;  // K_u(S)
  double gap() const { return full - sparse; }
};

struct TraceStep {
  std::size_t asset = 0;
  double loss = 0.0;
};

enum class StopReason { tolerance, q_max, iteration_cap, universe_exhausted };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance:
      return "loss-within-tolerance";
    case StopReason::q_max:
      return "q-max-reached";
    case StopReason::iteration_cap:
      return "iteration-cap-reached";
    case StopReason::universe_exhausted:
      return "universe-exhausted";
  }
  return "unknown";
}

struct SpanningResult {
  std::vector<std::size_t> support;  // in selection order
  double loss = 0.0;
  std::vector<UtilityGap> per_utility;
  std::vector<TraceStep> trace;
  std::size_t argmax_utility = 0;
  std::vector<SimplexPortfolio> sparse_optimizers;  // per utility, on S
  StopReason stop = StopReason::q_max;
  bool theory_mode = false;
  std::size_t iteration_cap = 0;
  std::size_t lp_solves = 0;

  std::vector<std::size_t> sorted_support() const {
    auto s = support;
    std::sort(s.begin(), s.end());
    return s;
  }
};

inline double clamp_loss(double v) { return v < 0.0 && v >= -1e-9 ? 0.0 : v; }

// Owns the panel, the utility class and the cached full-universe optima.
class SpanningEngine {
 public:
  SpanningEngine(ReturnPanel panel, std::size_t n1, std::size_t n2,
                 std::size_t threads = 1)
      : panel_(std::move(panel)), threads_(threads) {
    if (panel_.empty()) throw EmptyUniverseError("empty return panel");
    if (!panel_.fully_observed()) {
      throw ValidationError("spanning requires a fully observed panel");
    }
    grid_ = build_grid(support_bounds(panel_), n1);
    utilities_ = enumerate_utilities(grid_, n2);
    init_maximizers();
  }

  // Uses a caller-supplied utility list (all on the same grid).
  SpanningEngine(ReturnPanel panel, OutcomeGrid grid,
                 std::vector<RussellSeoUtility> utilities, std::size_t threads = 1)
      : panel_(std::move(panel)),
        grid_(std::move(grid)),
        utilities_(std::move(utilities)),
        threads_(threads) {
    if (panel_.empty()) throw EmptyUniverseError("empty return panel");
    if (!panel_.fully_observed()) {
      throw ValidationError("spanning requires a fully observed panel");
    }
    if (utilities_.empty()) throw ParameterError("empty utility class");
    init_maximizers();
  }

  const ReturnPanel& panel() const { return panel_; }
  const OutcomeGrid& grid() const { return grid_; }
  const std::vector<RussellSeoUtility>& utilities() const { return utilities_; }
  const UtilityMaximizer& maximizer(std::size_t u) const { return *maximizers_[u]; }

  // J_u for every utility, solved once and cached.
  const std::vector<double>& full_universe_optima() {
    ensure_full();
    return full_value_;
  }

  const std::vector<SimplexPortfolio>& full_optimizers() {
    ensure_full();
    return full_weights_;
  }

  // K_u(S) for every utility.
  std::vector<LpSolution> sparse_optima(std::span<const std::size_t> support) const {
    check_support(support);
    std::vector<LpSolution> out(utilities_.size());
    parallel_for(utilities_.size(), threads_, [&](std::size_t u) {
      out[u] = solve_checked(u, support, nullptr);
    });
    return out;
  }

  double loss_of_support(std::span<const std::size_t> support) {
    ensure_full();
    const auto k = sparse_optima(support);
    double loss = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < utilities_.size(); ++u) {
      loss = std::max(loss, full_value_[u] - k[u].value);
    }
    return clamp_loss(loss);
  }

  SpanningResult select(const SpanningConfig& config) {
    config.validate();
    ensure_full();
    const std::size_t p = panel_.cols();
    const std::size_t T = panel_.rows();
    const std::size_t nu = utilities_.size();
    SpanningResult res;
    res.theory_mode = config.theory_mode;
    res.iteration_cap = config.resolved_cap(T);
    const std::size_t size_cap =
        std::min(p, config.theory_mode ? res.iteration_cap : config.q_max);

    // Lazily maintained sparse optimum per utility. `value` is K_u for some
    // subset of the current support, so J_u - value bounds the current gap.
    struct State {
      double value = -std::numeric_limits<double>::infinity();
      lp::RampBasis basis;
      bool exact = false;
    };
    std::vector<State> state(nu);
    std::vector<double> score(p, 0.0);
    std::vector<char> in_support(p, 0);

    // First step: single-asset expected utilities come from ramp means.
    {
      std::vector<std::vector<double>> k1(p);
      for (std::size_t j = 0; j < p; ++j) {
        const auto col = panel_.column(j);
        const auto rm = ramp_means(col, grid_.points);
        k1[j].resize(nu);
        for (std::size_t u = 0; u < nu; ++u) k1[j][u] = utilities_[u].from_ramp_means(rm);
      }
      std::size_t best = 0;
      double best_loss = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < p; ++j) {
        double l = -std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < nu; ++u) l = std::max(l, full_value_[u] - k1[j][u]);
        score[j] = l;
        if (l < best_loss) {
          best_loss = l;
          best = j;
        }
      }
      res.support.push_back(best);
      in_support[best] = 1;
      for (std::size_t u = 0; u < nu; ++u) {
        state[u].value = k1[best][u];
        state[u].exact = true;
      }
      res.trace.push_back({best, clamp_loss(best_loss)});
    }

    std::vector<std::size_t> order_u(nu), cand;
    std::vector<double> ub(nu);
    struct Solved {
      std::size_t u;
      double value;
      lp::RampBasis basis;
    };
    std::vector<Solved> work, best_work;

    while (true) {
      const double loss = res.trace.back().loss;
      if (loss <= config.loss_tolerance) {
        res.stop = StopReason::tolerance;
        break;
      }
      if (res.support.size() >= p) {
        res.stop = StopReason::universe_exhausted;
        break;
      }
      if (res.support.size() >= size_cap) {
        res.stop = config.theory_mode ? StopReason::iteration_cap : StopReason::q_max;
        break;
      }
      if (res.trace.size() >= res.iteration_cap) {
        res.stop = StopReason::iteration_cap;
        break;
      }

      for (std::size_t u = 0; u < nu; ++u) ub[u] = full_value_[u] - state[u].value;
      std::iota(order_u.begin(), order_u.end(), std::size_t{0});
      std::stable_sort(order_u.begin(), order_u.end(),
                       [&](std::size_t a, std::size_t b) { return ub[a] > ub[b]; });

      cand.clear();
      for (std::size_t j = 0; j < p; ++j) {
        if (!in_support[j]) cand.push_back(j);
      }
      // Promising candidates first; this only affects how much is pruned.
      std::stable_sort(cand.begin(), cand.end(),
                       [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

      std::vector<std::size_t> trial(res.support);
      trial.push_back(0);
      double best_loss = std::numeric_limits<double>::infinity();
      std::size_t best_j = p;
      for (std::size_t j : cand) {
        trial.back() = j;
        work.clear();
        double partial = -std::numeric_limits<double>::infinity();
        bool pruned = false;
        for (std::size_t u : order_u) {
          if (ub[u] <= partial) break;
          const auto& st = state[u];
          LpSolution s = solve_checked(u, trial, st.basis.empty() ? nullptr : &st.basis);
          ++res.lp_solves;
          partial = std::max(partial, full_value_[u] - s.value);
          work.push_back({u, s.value, std::move(s.basis)});
          if (partial > best_loss || (partial == best_loss && j > best_j)) {
            pruned = true;
            break;
          }
        }
        score[j] = partial;
        if (pruned) continue;
        best_loss = partial;
        best_j = j;
        std::swap(work, best_work);
      }

      res.support.push_back(best_j);
      in_support[best_j] = 1;
      for (auto& s : best_work) {
        state[s.u].value = s.value;
        state[s.u].basis = std::move(s.basis);
        state[s.u].exact = true;
      }
      res.trace.push_back({best_j, clamp_loss(best_loss)});
    }

    // Exact sparse optima on the final support.
    std::vector<LpSolution> fin(nu);
    parallel_for(nu, threads_, [&](std::size_t u) {
      fin[u] = solve_checked(u, res.support,
                             state[u].basis.empty() ? nullptr : &state[u].basis);
    });
    res.lp_solves += nu;
    res.per_utility.resize(nu);
    res.sparse_optimizers.resize(nu);
    double loss = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < nu; ++u) {
      res.per_utility[u] = {full_value_[u], fin[u].value};
      res.sparse_optimizers[u] = fin[u].weights;
      const double g = full_value_[u] - fin[u].value;
      if (g > loss) {
        loss = g;
        res.argmax_utility = u;
      }
    }
    res.loss = clamp_loss(loss);
    return res;
  }

  // Size-q support minimizing the loss, by enumeration; ties to the
  // lexicographically smallest support.
  std::pair<std::vector<std::size_t>, double> exhaustive_best_support(std::size_t q) {
    const std::size_t p = panel_.cols();
    if (q < 1 || q > p) throw ParameterError("support size out of range");
    std::vector<std::size_t> cur(q), best;
    std::iota(cur.begin(), cur.end(), std::size_t{0});
    double best_loss = std::numeric_limits<double>::infinity();
    while (true) {
      const double l = loss_of_support(cur);
      if (l < best_loss) {
        best_loss = l;
        best = cur;
      }
      std::size_t k = q;
      while (k > 0 && cur[k - 1] == p - q + k - 1) --k;
      if (k == 0) break;
      ++cur[k - 1];
      for (std::size_t m = k; m < q; ++m) cur[m] = cur[m - 1] + 1;
    }
    return {best, best_loss};
  }

 private:
  void init_maximizers() {
    maximizers_.clear();
    for (const auto& u : utilities_) {
      maximizers_.push_back(std::make_unique<UtilityMaximizer>(
          panel_.values().data(), panel_.rows(), panel_.cols(), u));
    }
  }

  void check_support(std::span<const std::size_t> support) const {
    if (support.empty()) throw EmptyUniverseError("empty portfolio support");
    for (std::size_t i : support) {
      if (i >= panel_.cols()) throw ValidationError("support index out of range");
    }
  }

  LpSolution solve_checked(std::size_t u, std::span<const std::size_t> support,
                           const lp::RampBasis* warm) const {
    LpSolution s = maximizers_[u]->solve(support, warm);
    if (!s.optimal()) {
      throw NumericalError("expected-utility program failed for utility " +
                           std::to_string(u) + " " + utilities_[u].label() + ": " +
                           s.diagnostics);
    }
    return s;
  }

  void ensure_full() {
    if (full_ready_) return;
    const std::size_t nu = utilities_.size();
    std::vector<std::size_t> all(panel_.cols());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<LpSolution> sol(nu);
    parallel_for(nu, threads_, [&](std::size_t u) { sol[u] = solve_checked(u, all, nullptr); });
    full_value_.resize(nu);
    full_weights_.resize(nu);
    for (std::size_t u = 0; u < nu; ++u) {
      full_value_[u] = sol[u].value;
      full_weights_[u] = std::move(sol[u].weights);
    }
    full_ready_ = true;
  }

  ReturnPanel panel_;
  OutcomeGrid grid_;
  std::vector<RussellSeoUtility> utilities_;
  std::vector<std::unique_ptr<UtilityMaximizer>> maximizers_;
  std::size_t threads_ = 1;
  bool full_ready_ = false;
  std::vector<double> full_value_;
  std::vector<SimplexPortfolio> full_weights_;
};

inline SpanningResult fss_select(const ReturnPanel& panel, const SpanningConfig& config) {
  config.validate();
  SpanningEngine engine(panel, config.n1, config.n2, config.threads);
  return engine.select(config);
}

struct LossCurvePoint {
  std::size_t q = 0;
  std::vector<std::size_t> support;
  double loss = 0.0;
  std::optional<std::pair<double, double>> ci;
};

struct LossCurve {
  std::vector<LossCurvePoint> points;
};

// One greedy path up to max(q_values); each point reads the path prefix.
inline LossCurve loss_curve(SpanningEngine& engine, std::span<const std::size_t> q_values,
                            SpanningConfig config) {
  if (q_values.empty()) throw ParameterError("empty list of q values");
  for (std::size_t k = 1; k < q_values.size(); ++k) {
    if (q_values[k] <= q_values[k - 1]) throw ParameterError("q values must ascend");
  }
  if (q_values.front() < 1) throw ParameterError("q values must be positive");
  config.q_max = std::min(q_values.back(), engine.panel().cols());
  config.theory_mode = false;
  config.iteration_cap.reset();
  const SpanningResult path = engine.select(config);
  LossCurve curve;
  for (std::size_t q : q_values) {
    LossCurvePoint pt;
    pt.q = q;
    const std::size_t m = std::min(q, path.trace.size());
    for (std::size_t k = 0; k < m; ++k) pt.support.push_back(path.trace[k].asset);
    pt.loss = path.trace[m - 1].loss;
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

inline LossCurve loss_curve(const ReturnPanel& panel, std::span<const std::size_t> q_values,
                            const SpanningConfig& config) {
  SpanningEngine engine(panel, config.n1, config.n2, config.threads);
  return loss_curve(engine, q_values, config);
}

}  // namespace sparsessd
