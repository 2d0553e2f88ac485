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


// Walks through a small session: load a panel, trace the loss curve on the
// first ten years, then run a short rolling backtest against 1/N.
//
//   sparsessd_demo [panel.csv]

#include <cstdio>
#include <string>
#include <vector>

#include "sparsessd/sparsessd.hpp"

using namespace sparsessd;

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : SPARSESSD_DEMO_DIR "/panel.csv";
  try {
    const ReturnPanel panel = load_panel(path);
    std::printf("%s: %zu periods, %zu assets\n", path.c_str(), panel.rows(), panel.cols());

    const ReturnPanel train = window_and_filter(panel, 0, 60);
    std::printf("first 60 periods keep %zu fully observed assets\n", train.cols());

    SpanningConfig cfg;
    cfg.q_max = 5;
    const std::vector<std::size_t> qs{1, 2, 3, 4, 5};
    const LossCurve curve = loss_curve(train, qs, cfg);
    for (const auto& pt : curve.points) {
      std::string names;
      for (std::size_t i : pt.support) names += (names.empty() ? "" : " ") + train.assets()[i];
      std::printf("  q=%zu  loss=%.6f  {%s}\n", pt.q, pt.loss, names.c_str());
    }

    BacktestConfig bt;
    bt.window = 60;
    bt.step = 6;
    bt.spanning.q_max = 3;
    const BacktestResult res = run_backtest(panel, bt);
    for (const auto& run : res.runs) {
      const auto r = run.realized();
      const std::vector<double> rf(r.size(), 0.0);
      const auto rep = performance_report(r, rf, run.weights(), ReportOptions{});
      const auto wealth = cumulative_wealth(r);
      std::printf("%-10s sharpe=%.3f  es95=%.4f  turnover=%.3f  final wealth=%.3f\n",
                  to_string(run.strategy), rep.sharpe.value_or(NAN), rep.tail.es,
                  rep.turnover.value_or(NAN), wealth.empty() ? 1.0 : wealth.back());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
