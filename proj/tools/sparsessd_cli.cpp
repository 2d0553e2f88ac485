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

// Command-line front end. Exit codes: 0 success, 2 invalid input or usage,
// 3 numerical failure.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsessd/io.hpp"
#include "sparsessd/sparsessd.hpp"

#ifndef SPARSESSD_VERSION
#define SPARSESSD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sparsessd;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = detail::trim(item);
    if (t.empty()) continue;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ParameterError("not a list of counts: '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = detail::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

// Output sink: a directory holding the artifacts and one manifest, or
// standard output for "-".
class Output {
 public:
  explicit Output(std::string target) : target_(std::move(target)) {
    if (!to_stdout()) fs::create_directories(target_);
  }

  bool to_stdout() const { return target_ == "-"; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& fn) {
    if (to_stdout()) {
      fn(std::cout);
      std::cout.flush();
      return;
    }
    const fs::path path = fs::path(target_) / name;
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path.string() + "'");
    fn(os);
    files_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

  void manifest(const std::string& sub, const CLI::App& app, std::uint64_t seed,
                const std::vector<std::string>& inputs, double seconds) {
    json m;
    m["schema_version"] = io::kSchemaVersion;
    m["subcommand"] = sub;
    json cfg = json::object();
    for (const CLI::Option* opt : app.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config") continue;
      const auto& res = opt->results();
      if (!res.empty()) {
        cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else {
        cfg[name] = opt->get_default_str();
      }
    }
    m["config"] = cfg;
    m["seed"] = seed;
    m["code_version"] = SPARSESSD_VERSION;
    json dig = json::object();
    for (const auto& path : inputs) {
      if (!path.empty()) dig[path] = sha256_file(path);
    }
    m["input_sha256"] = dig;
    m["wall_clock_seconds"] = seconds;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["finished_utc"] = stamp;
    m["outputs"] = files_;
    if (to_stdout()) {
      std::cerr << m.dump(2) << '\n';
      return;
    }
    std::ofstream os(fs::path(target_) / "run_manifest.json");
    os << m.dump(2) << '\n';
  }

 private:
  std::string target_;
  std::vector<std::string> files_;
};

struct Common {
  std::size_t threads = 0;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads (0 = available parallelism)")
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Root seed for every random stream")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory, or - for standard output")
      ->capture_default_str();
  sub->add_option("--config", c.config, "Flat key = value file; command-line values win");
}

// Option values from a flat key = value file. Keys are long option names
// without dashes; options already given on the command line are kept.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && item.parents != std::vector<std::string>{sub->get_name()}) {
      continue;
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw ValidationError("unknown key '" + item.name + "' in config file '" + path + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

void add_spanning(CLI::App* sub, SpanningConfig& s, std::size_t& cap) {
  sub->add_option("--q-max", s.q_max, "Sparsity cap q")->capture_default_str();
  sub->add_option("--iteration-cap", cap, "Greedy iteration cap (0 = ceil(q ln(T+1)))")
      ->capture_default_str();
  sub->add_option("--tol", s.loss_tolerance, "Loss treated as zero")->capture_default_str();
  sub->add_option("--n1", s.n1, "Outcome grid size N1")->capture_default_str();
  sub->add_option("--n2", s.n2, "Weight grid size N2")->capture_default_str();
  sub->add_flag("--theory-mode", s.theory_mode,
                "Iterate up to the iteration cap instead of stopping at q");
}

void finish_spanning(SpanningConfig& s, std::size_t cap, std::size_t threads) {
  if (cap > 0) s.iteration_cap = cap;
  s.threads = threads == 0 ? default_threads() : threads;
}

ReturnPanel load_full_panel(const std::string& path) {
  ReturnPanel p = load_panel(path);
  if (!p.fully_observed()) {
    throw ValidationError("'" + path + "' has " + std::to_string(p.missing_count()) +
                          " missing cells; spanning needs a complete panel");
  }
  return p;
}

std::vector<double> column_or_throw(const ReturnPanel& p, const std::string& name,
                                    const std::string& path) {
  const std::size_t i = p.asset_index(name);
  if (i == ReturnPanel::npos) {
    throw ValidationError("column '" + name + "' not found in '" + path + "'");
  }
  for (std::size_t t = 0; t < p.rows(); ++t) {
    if (!p.observed(t, i)) {
      throw ValidationError("column '" + name + "' has missing cells in '" + path + "'");
    }
  }
  return p.column(i);
}

// Risk-free series aligned on the dates of `dates`, zero when absent.
std::vector<double> load_rf(const std::string& path, const std::vector<Date>& dates) {
  std::vector<double> rf(dates.size(), 0.0);
  if (path.empty()) {
    std::cerr << "warning: no risk-free series given; using zero\n";
    return rf;
  }
  const ReturnPanel f = load_panel(path);
  const std::size_t i = f.asset_index("RF");
  if (i == ReturnPanel::npos) {
    std::cerr << "warning: no RF column in '" << path << "'; using zero\n";
    return rf;
  }
  for (std::size_t t = 0; t < dates.size(); ++t) {
    const std::size_t r = f.date_index(dates[t]);
    if (r == ReturnPanel::npos || !f.observed(r, i)) {
      throw ValidationError("risk-free rate missing for " + dates[t].iso());
    }
    rf[t] = f(r, i);
  }
  return rf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse second-order stochastic dominance spanning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPARSESSD_VERSION);

  Common common;
  std::string input;
  SpanningConfig span_cfg;
  std::size_t span_cap = 0;

  // span
  auto* span = app.add_subcommand("span", "Greedy sparse spanning support and its loss");
  span->add_option("--input", input, "Return panel CSV")->required();
  add_spanning(span, span_cfg, span_cap);
  add_common(span, common);

  // loss-curve
  std::string q_values;
  bool curve_ci = false;
  SubsampleConfig sub_cfg;
  std::size_t sub_len = 0;
  auto* curve = app.add_subcommand("loss-curve", "Diversification loss along the greedy path");
  curve->add_option("--input", input, "Return panel CSV")->required();
  curve->add_option("--q-values", q_values, "Comma-separated ascending q (default 1..q-max)");
  curve->add_flag("--with-ci", curve_ci, "Attach a subsampling interval to every point");
  curve->add_option("--alpha", sub_cfg.alpha, "Significance level")->capture_default_str();
  curve->add_option("--subsample-length", sub_len, "Subsample length b (0 = floor(T^0.6))")
      ->capture_default_str();
  add_spanning(curve, span_cfg, span_cap);
  add_common(curve, common);

  // ci
  double trim = std::numeric_limits<double>::quiet_NaN();
  auto* ci = app.add_subcommand("ci", "Fast subsampling confidence interval for the loss");
  ci->add_option("--input", input, "Return panel CSV")->required();
  ci->add_option("--alpha", sub_cfg.alpha, "Significance level")->capture_default_str();
  ci->add_option("--subsample-length,--block-length", sub_len,
                 "Subsample length b (0 = floor(T^0.6))")
      ->capture_default_str();
  ci->add_option("--trim", trim, "Ignore utilities with kinks below this return");
  add_spanning(ci, span_cfg, span_cap);
  add_common(ci, common);

  // test-dominance
  std::string kappa_name, lambda_name;
  DominanceConfig dom_cfg;
  std::size_t dom_block = 0;
  bool no_recenter = false;
  auto* dom = app.add_subcommand("test-dominance",
                                 "Block-bootstrap test that lambda does not dominate kappa");
  dom->add_option("--input", input, "CSV with one column per strategy")->required();
  dom->add_option("--kappa", kappa_name, "Benchmark column")->required();
  dom->add_option("--lambda", lambda_name, "Candidate dominating column")->required();
  dom->add_option("--block-length", dom_block, "Bootstrap block length (0 = ceil(T^(1/3)))")
      ->capture_default_str();
  dom->add_option("--replications", dom_cfg.replications, "Bootstrap replications R")
      ->capture_default_str();
  dom->add_option("--grid-size", dom_cfg.grid_size, "Threshold grid size")->capture_default_str();
  dom->add_flag("--no-recenter", no_recenter, "Do not recenter bootstrap statistics");
  add_common(dom, common);

  // backtest
  BacktestConfig bt_cfg;
  bt_cfg.spanning.q_max = 45;
  double trc = 0.0035;
  std::string rf_path, strategies = "sparse_ssd,one_over_n";
  auto* bt = app.add_subcommand("backtest", "Rolling-window out-of-sample evaluation");
  bt->add_option("--input", input, "Return panel CSV (empty cells = missing)")->required();
  bt->add_option("--window", bt_cfg.window, "Training window length")->capture_default_str();
  bt->add_option("--step", bt_cfg.step, "Rebalancing step")->capture_default_str();
  bt->add_option("--trc", trc, "Proportional transaction cost")->capture_default_str();
  bt->add_option("--rf", rf_path, "Factor CSV with an RF column");
  bt->add_option("--strategies", strategies, "Comma list of sparse_ssd, one_over_n")
      ->capture_default_str();
  add_spanning(bt, bt_cfg.spanning, span_cap);
  add_common(bt, common);

  // metrics
  std::string bench_name;
  auto* met = app.add_subcommand("metrics", "Performance and risk measures of return series");
  met->add_option("--input", input, "CSV with one column per strategy")->required();
  met->add_option("--rf", rf_path, "Factor CSV with an RF column");
  met->add_option("--benchmark", bench_name, "Column used for opportunity costs");
  met->add_option("--trc", trc, "Proportional transaction cost")->capture_default_str();
  add_common(met, common);

  // mc
  McDesign mc_design;
  auto* mc = app.add_subcommand("mc", "Monte Carlo selection-recovery experiments");
  mc->add_option("--experiment", mc_design.experiment, "1 or 2")->capture_default_str();
  mc->add_option("--q", mc_design.q, "Sparsity cap q")->capture_default_str();
  mc->add_option("--t", mc_design.t_obs, "Observations T")->capture_default_str();
  mc->add_option("--n", mc_design.n_assets, "Assets N (first experiment)")->capture_default_str();
  mc->add_option("--reps", mc_design.replications, "Replications")->capture_default_str();
  mc->add_option("--mean", mc_design.mean, "First experiment asset mean")->capture_default_str();
  mc->add_option("--sd", mc_design.sd, "First experiment asset sd")->capture_default_str();
  mc->add_option("--tol", mc_design.spanning.loss_tolerance, "Loss treated as zero")
      ->capture_default_str();
  mc->add_option("--n1", mc_design.spanning.n1, "Outcome grid size N1")->capture_default_str();
  mc->add_option("--n2", mc_design.spanning.n2, "Weight grid size N2")->capture_default_str();
  add_common(mc, common);

  // regress
  std::string factors_path, model, returns_column, se = "plain";
  long long lags = -1;
  auto* reg = app.add_subcommand("regress", "OLS factor regression of excess returns");
  reg->add_option("--returns", input, "CSV of strategy returns")->required();
  reg->add_option("--column", returns_column, "Strategy column (default: first)");
  reg->add_option("--factors", factors_path, "Factor CSV (RF column is subtracted)")->required();
  reg->add_option("--model", model, "Comma-separated factor names")->required();
  reg->add_option("--se", se, "plain or newey-west")->capture_default_str();
  reg->add_option("--lags", lags, "Newey-West lags (default floor(0.75 T^(1/3)))");
  add_common(reg, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  try {
    for (CLI::App* sub : app.get_subcommands()) {
      if (!common.config.empty()) apply_config(sub, common.config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const std::size_t threads = common.threads == 0 ? default_threads() : common.threads;

  try {
    Output out(common.out);
    if (span->parsed()) {
      finish_spanning(span_cfg, span_cap, threads);
      const ReturnPanel panel = load_full_panel(input);
      std::cerr << "span: T=" << panel.rows() << " p=" << panel.cols() << '\n';
      SpanningEngine engine(panel, span_cfg.n1, span_cfg.n2, span_cfg.threads);
      const SpanningResult r = engine.select(span_cfg);
      out.write_json("span.json", io::to_json(panel, r, span_cfg));
      out.manifest("span", *span, common.seed, {input}, elapsed());
    } else if (curve->parsed()) {
      finish_spanning(span_cfg, span_cap, threads);
      const ReturnPanel panel = load_full_panel(input);
      std::vector<std::size_t> qs = parse_size_list(q_values);
      if (qs.empty()) {
        for (std::size_t q = 1; q <= std::min(span_cfg.q_max, panel.cols()); ++q) qs.push_back(q);
      }
      SpanningEngine engine(panel, span_cfg.n1, span_cfg.n2, span_cfg.threads);
      LossCurve c = loss_curve(engine, qs, span_cfg);
      if (curve_ci) {
        sub_cfg.threads = threads;
        if (sub_len > 0) sub_cfg.block_length = sub_len;
        for (auto& pt : c.points) {
          SpanningConfig cq = span_cfg;
          cq.q_max = std::min(pt.q, panel.cols());
          cq.theory_mode = false;
          cq.iteration_cap.reset();
          const SpanningResult r = engine.select(cq);
          const ConfidenceInterval iv = subsample_ci(engine, r, sub_cfg);
          pt.ci = std::make_pair(iv.lower, iv.upper);
          std::cerr << "loss-curve: q=" << pt.q << " done\n";
        }
      }
      out.write_json("loss_curve.json", io::to_json(panel, c));
      out.write("loss_curve.csv", [&](std::ostream& os) { io::write_loss_curve_csv(os, panel, c); });
      out.manifest("loss-curve", *curve, common.seed, {input}, elapsed());
    } else if (ci->parsed()) {
      finish_spanning(span_cfg, span_cap, threads);
      const ReturnPanel panel = load_full_panel(input);
      SpanningEngine engine(panel, span_cfg.n1, span_cfg.n2, span_cfg.threads);
      const SpanningResult r = engine.select(span_cfg);
      sub_cfg.threads = threads;
      if (sub_len > 0) sub_cfg.block_length = sub_len;
      if (!std::isnan(trim)) sub_cfg.trim_below = trim;
      const ConfidenceInterval iv = subsample_ci(engine, r, sub_cfg);
      json j = io::to_json(iv);
      j["support"] = io::asset_names(panel, r.support);
      out.write_json("ci.json", j);
      out.manifest("ci", *ci, common.seed, {input}, elapsed());
    } else if (dom->parsed()) {
      const ReturnPanel panel = load_panel(input);
      const auto a = column_or_throw(panel, kappa_name, input);
      const auto b = column_or_throw(panel, lambda_name, input);
      if (dom_block > 0) dom_cfg.block_length = dom_block;
      dom_cfg.seed = common.seed;
      dom_cfg.recenter = !no_recenter;
      dom_cfg.threads = threads;
      const DominanceTestResult r = nondominance_test(a, b, dom_cfg);
      json j = io::to_json(r);
      j["kappa"] = kappa_name;
      j["lambda"] = lambda_name;
      j["recentered"] = dom_cfg.recenter;
      out.write_json("dominance.json", j);
      out.manifest("test-dominance", *dom, common.seed, {input}, elapsed());
    } else if (bt->parsed()) {
      finish_spanning(bt_cfg.spanning, span_cap, 1);
      bt_cfg.threads = threads;
      bt_cfg.strategies.clear();
      for (const auto& s : parse_name_list(strategies)) {
        if (s == "sparse_ssd") {
          bt_cfg.strategies.push_back(Strategy::sparse_ssd);
        } else if (s == "one_over_n") {
          bt_cfg.strategies.push_back(Strategy::one_over_n);
        } else {
          throw ParameterError("unknown strategy '" + s + "'");
        }
      }
      const ReturnPanel panel = load_panel(input);
      const BacktestResult res = run_backtest(panel, bt_cfg);
      std::vector<Date> dates;
      for (const auto& rec : res.runs.front().records) dates.push_back(rec.date);
      const auto rf = load_rf(rf_path, dates);
      ReportOptions ropt;
      ropt.trc = trc;
      json rep;
      rep["schema_version"] = io::kSchemaVersion;
      rep["kind"] = "backtest-report";
      rep["window"] = bt_cfg.window;
      rep["held_portfolio_rule"] =
          "argmax-gap utility optimizer when loss > tol, else equal-mixture utility optimizer";
      std::vector<std::vector<double>> nets;
      std::vector<PerformanceReport> reports;
      for (const auto& run : res.runs) {
        const auto r = run.realized();
        reports.push_back(performance_report(r, rf, run.weights(), ropt));
        nets.push_back(reports.back().net_of_cost);
      }
      for (std::size_t k = 0; k < res.runs.size(); ++k) {
        if (res.runs.size() == 2 && res.runs[k].strategy == Strategy::sparse_ssd) {
          const std::size_t other = 1 - k;
          compare_to_benchmark(reports[k], res.runs[k].realized(), res.runs[other].realized(),
                               ropt);
          reports[k].return_loss = defined_or_empty([&] { return return_loss(nets[k], nets[other]); });
        }
        rep["strategies"][to_string(res.runs[k].strategy)] = io::to_json(reports[k]);
      }
      out.write("records.csv", [&](std::ostream& os) { io::write_records_csv(os, panel, res); });
      out.write("wealth.csv", [&](std::ostream& os) { io::write_wealth_csv(os, res, nets); });
      out.write_json("report.json", rep);
      out.manifest("backtest", *bt, common.seed, {input, rf_path}, elapsed());
    } else if (met->parsed()) {
      const ReturnPanel panel = load_panel(input);
      const auto rf = load_rf(rf_path, panel.dates());
      ReportOptions ropt;
      ropt.trc = trc;
      json rep;
      rep["schema_version"] = io::kSchemaVersion;
      rep["kind"] = "metrics";
      std::vector<double> bench;
      if (!bench_name.empty()) bench = column_or_throw(panel, bench_name, input);
      for (const auto& name : panel.assets()) {
        const auto r = column_or_throw(panel, name, input);
        PerformanceReport pr = performance_report(r, rf, {}, ropt);
        if (!bench.empty() && name != bench_name) compare_to_benchmark(pr, r, bench, ropt);
        rep["strategies"][name] = io::to_json(pr);
      }
      out.write_json("metrics.json", rep);
      out.write("metrics.csv", [&](std::ostream& os) {
        os << "# schema_version=" << io::kSchemaVersion << "\nmeasure";
        for (const auto& name : panel.assets()) os << ',' << name;
        os << '\n';
        const auto& first = rep["strategies"][panel.assets().front()];
        for (const auto& [key, _] : first.items()) {
          if (key == "conventions" || key == "ceq" || key == "opportunity_cost") continue;
          os << key;
          for (const auto& name : panel.assets()) os << ',' << rep["strategies"][name][key].dump();
          os << '\n';
        }
      });
      out.manifest("metrics", *met, common.seed, {input, rf_path}, elapsed());
    } else if (mc->parsed()) {
      mc_design.seed = common.seed;
      mc_design.threads = threads;
      if (mc_design.experiment == 2) mc_design.n_assets = 50;
      std::cerr << "mc: experiment " << mc_design.experiment << ", " << mc_design.replications
                << " replications\n";
      const McReport r = run_experiment(mc_design);
      out.write_json("mc.json", io::to_json(r));
      out.write("mc.csv", [&](std::ostream& os) { io::write_mc_csv(os, r); });
      out.manifest("mc", *mc, common.seed, {}, elapsed());
    } else if (reg->parsed()) {
      const ReturnPanel rp = load_panel(input);
      const ReturnPanel fp = load_panel(factors_path);
      const std::string col = returns_column.empty() ? rp.assets().front() : returns_column;
      const auto r = column_or_throw(rp, col, input);
      const auto names = parse_name_list(model);
      if (names.empty()) throw ParameterError("empty factor model");
      const std::size_t rf_col = fp.asset_index("RF");
      std::vector<double> y;
      std::vector<std::vector<double>> x(names.size());
      std::vector<std::size_t> fidx;
      for (const auto& n : names) {
        const std::size_t i = fp.asset_index(n);
        if (i == ReturnPanel::npos) throw ValidationError("factor '" + n + "' not found");
        fidx.push_back(i);
      }
      for (std::size_t t = 0; t < rp.rows(); ++t) {
        const std::size_t f = fp.date_index(rp.dates()[t]);
        if (f == ReturnPanel::npos) {
          throw ValidationError("no factor row for " + rp.dates()[t].iso());
        }
        y.push_back(r[t] - (rf_col == ReturnPanel::npos ? 0.0 : fp(f, rf_col)));
        for (std::size_t k = 0; k < fidx.size(); ++k) x[k].push_back(fp(f, fidx[k]));
      }
      SeKind kind;
      if (se == "plain") {
        kind = SeKind::plain;
      } else if (se == "newey-west" || se == "nw") {
        kind = SeKind::newey_west;
      } else {
        throw ParameterError("unknown standard error kind '" + se + "'");
      }
      std::optional<std::size_t> l;
      if (lags >= 0) l = static_cast<std::size_t>(lags);
      const RegressionResult res = ols(y, x, names, kind, l);
      out.write_json("regress.json", io::to_json(res));
      out.write("regress.csv", [&](std::ostream& os) { io::write_regression_table(os, res); });
      if (!out.to_stdout()) io::write_regression_table(std::cout, res);
      out.manifest("regress", *reg, common.seed, {input, factors_path}, elapsed());
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
