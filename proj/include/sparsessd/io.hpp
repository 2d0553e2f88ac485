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

// JSON and CSV emission of results. Every document carries schema_version.

#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparsessd/backtest.hpp"
#include "sparsessd/inference.hpp"
#include "sparsessd/metrics.hpp"
#include "sparsessd/regress.hpp"
#include "sparsessd/spanning.hpp"
#include "sparsessd/synth.hpp"

namespace sparsessd::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : json(nullptr);
}

inline json asset_names(const ReturnPanel& panel, const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (std::size_t i : idx) a.push_back(panel.assets()[i]);
  return a;
}

inline json to_json(const ReturnPanel& panel, const SpanningResult& r, const SpanningConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "spanning";
  j["support"] = asset_names(panel, r.support);
  j["support_size"] = r.support.size();
  j["loss"] = r.loss;
  j["stop_reason"] = to_string(r.stop);
  j["mode"] = r.theory_mode ? "theory" : "empirical";
  j["q_max"] = cfg.q_max;
  j["iteration_cap"] = r.iteration_cap;
  j["loss_tolerance"] = cfg.loss_tolerance;
  j["n1"] = cfg.n1;
  j["n2"] = cfg.n2;
  j["lp_solves"] = r.lp_solves;
  json trace = json::array();
  for (const auto& s : r.trace) {
    trace.push_back({{"asset", panel.assets()[s.asset]}, {"loss", s.loss}});
  }
  j["trace"] = trace;
  j["argmax_utility"] = r.argmax_utility;
  json pu = json::array();
  for (const auto& g : r.per_utility) pu.push_back({g.full, g.sparse});
  j["per_utility"] = pu;
  return j;
}

inline json to_json(const ReturnPanel& panel, const LossCurve& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "loss-curve";
  json pts = json::array();
  for (const auto& p : c.points) {
    json e{{"q", p.q}, {"loss", p.loss}, {"support", asset_names(panel, p.support)}};
    if (p.ci) {
      e["ci_lower"] = p.ci->first;
      e["ci_upper"] = p.ci->second;
    }
    pts.push_back(e);
  }
  j["points"] = pts;
  return j;
}

inline void write_loss_curve_csv(std::ostream& os, const ReturnPanel& panel, const LossCurve& c) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "q,loss,ci_lower,ci_upper,added_asset\n";
  os.precision(12);
  for (const auto& p : c.points) {
    os << p.q << ',' << p.loss << ',';
    if (p.ci) {
      os << p.ci->first << ',' << p.ci->second;
    } else {
      os << ',';
    }
    os << ',' << (p.support.empty() ? "" : panel.assets()[p.support.back()]) << '\n';
  }
}

inline json to_json(const ConfidenceInterval& ci) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "subsample-ci";
  j["estimate"] = ci.estimate;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["quantile"] = ci.quantile;
  j["alpha"] = ci.alpha;
  j["subsample_length"] = ci.block_length;
  j["lp_solves"] = ci.lp_solves;
  j["statistics"] = ci.statistics;
  return j;
}

inline json to_json(const DominanceTestResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "nondominance-test";
  j["statistic"] = r.statistic;
  j["argmax_z"] = r.argmax_z;
  j["p_value"] = r.p_value;
  j["reject_at_level"] = r.reject;
  j["replications"] = r.replications;
  j["block_length"] = r.block_length;
  j["z_grid"] = r.z_grid;
  j["bootstrap"] = r.bootstrap;
  return j;
}

inline json to_json(const PerformanceReport& r) {
  json j;
  j["average"] = r.moments.mean;
  j["standard_deviation"] = r.moments.sd;
  j["skewness"] = optional_number(r.moments.skewness);
  j["excess_kurtosis"] = optional_number(r.moments.excess_kurtosis);
  j["sharpe"] = optional_number(r.sharpe);
  j["downside_sharpe"] = optional_number(r.downside_sharpe);
  j["var95"] = r.tail.var;
  j["es95"] = r.tail.es;
  j["up_ratio"] = optional_number(r.up_ratio);
  j["turnover"] = optional_number(r.turnover);
  json ceq = json::object();
  for (const auto& [key, v] : r.ceq) {
    ceq[std::string(to_string(key.first)) + ":" + std::to_string(key.second)] = v;
  }
  j["ceq"] = ceq;
  json oc = json::object();
  for (const auto& [key, v] : r.opportunity_cost) {
    oc[std::string(to_string(key.first)) + ":" + std::to_string(key.second)] = v;
  }
  j["opportunity_cost"] = oc;
  j["return_loss"] = optional_number(r.return_loss);
  j["conventions"] = {
      {"sd", "T-1 denominator"},
      {"skewness", "m3/m2^1.5 with m_k = mean((x-mean)^k)"},
      {"kurtosis", "excess, m4/m2^2 - 3"},
      {"var_es", "lower order statistic ceil((1-level)T), positive for a loss"},
      {"exponential", "u(w) = -exp(-a w)"},
      {"power", "u(w) = w^(1-g)/(1-g)"}};
  return j;
}

inline json to_json(const McReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "monte-carlo";
  j["experiment"] = r.design.experiment;
  j["n_assets"] = r.design.n_assets;
  j["t_obs"] = r.design.t_obs;
  j["q"] = r.design.q;
  j["replications"] = r.design.replications;
  j["seed"] = r.design.seed;
  j["average_selected"] = r.mean_selected;
  j["sd_selected"] = r.sd_selected;
  j["average_held_assets"] = r.mean_held;
  j["average_loss"] = r.mean_loss;
  j["se_loss"] = r.se_loss;
  if (r.design.experiment == 2) j["share_inside_a_union_b"] = r.share_inside_dominant;
  json reps = json::array();
  for (const auto& x : r.replications) {
    reps.push_back({{"replication", x.replication},
                    {"selected", x.selected},
                    {"held_assets", x.held_assets},
                    {"loss", x.loss},
                    {"support", x.support},
                    {"stop_reason", to_string(x.stop)}});
  }
  j["per_replication"] = reps;
  return j;
}

inline void write_mc_csv(std::ostream& os, const McReport& r) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "experiment,n_assets,t_obs,q,replications,average_number,st_deviation,"
        "average_loss,standard_error\n";
  os.precision(10);
  os << r.design.experiment << ',' << r.design.n_assets << ',' << r.design.t_obs << ','
     << r.design.q << ',' << r.design.replications << ',' << r.mean_selected << ','
     << r.sd_selected << ',' << r.mean_loss << ',' << r.se_loss << '\n';
}

inline json to_json(const RegressionResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "regression";
  j["se"] = r.se_kind == SeKind::plain ? "plain" : "newey-west";
  if (r.se_kind == SeKind::newey_west) j["lags"] = r.lags;
  j["dof"] = r.dof;
  j["r2"] = r.r2;
  json rows = json::array();
  for (std::size_t k = 0; k < r.names.size(); ++k) {
    rows.push_back({{"name", r.names[k]},
                    {"coef", r.coef[k]},
                    {"se", r.se[k]},
                    {"t", number_or_null(r.t[k])},
                    {"p", r.p[k]}});
  }
  j["coefficients"] = rows;
  return j;
}

inline void write_regression_table(std::ostream& os, const RegressionResult& r) {
  os << "term,coef,se,t,p\n";
  os.precision(6);
  for (std::size_t k = 0; k < r.names.size(); ++k) {
    os << r.names[k] << ',' << r.coef[k] << ',' << r.se[k] << ',' << r.t[k] << ',' << r.p[k]
       << '\n';
  }
  os << "R2," << r.r2 << ",,,\n";
}

inline void write_records_csv(std::ostream& os, const ReturnPanel& panel,
                              const BacktestResult& bt) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "strategy,date,training_assets,q,loss,held,realized,missing_next,support\n";
  os.precision(12);
  for (const auto& run : bt.runs) {
    for (const auto& rec : run.records) {
      os << to_string(run.strategy) << ',' << rec.date.iso() << ',' << rec.training_assets << ','
         << rec.q << ',' << rec.loss << ','
         << (run.strategy == Strategy::sparse_ssd ? to_string(rec.held) : "equal") << ','
         << rec.realized << ',' << rec.missing_next << ',';
      for (std::size_t k = 0; k < rec.support.size(); ++k) {
        os << (k ? ";" : "") << panel.assets()[rec.support[k]];
      }
      os << '\n';
    }
  }
}

inline void write_wealth_csv(std::ostream& os, const BacktestResult& bt,
                             const std::vector<std::vector<double>>& net_series) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "date";
  for (const auto& run : bt.runs) os << ',' << to_string(run.strategy);
  for (const auto& run : bt.runs) os << ',' << to_string(run.strategy) << "_net";
  os << '\n';
  std::vector<std::vector<double>> gross;
  std::vector<std::vector<double>> net;
  for (std::size_t k = 0; k < bt.runs.size(); ++k) {
    gross.push_back(cumulative_wealth(bt.runs[k].realized()));
    net.push_back(cumulative_wealth(net_series[k]));
  }
  os.precision(12);
  const std::size_t T = bt.runs.empty() ? 0 : bt.runs.front().records.size();
  for (std::size_t t = 0; t < T; ++t) {
    os << bt.runs.front().records[t].date.iso();
    for (const auto& g : gross) os << ',' << g[t];
    for (const auto& g : net) os << ',' << g[t];
    os << '\n';
  }
}

}  // namespace sparsessd::io
