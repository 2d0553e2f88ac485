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

// Performance and risk measures of realized return series. All inputs are
// simple periodic returns; nothing is annualized.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsessd/error.hpp"

namespace sparsessd {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // T - 1 denominator
  // Moment ratios m3 / m2^1.5 and m4 / m2^2 - 3 with m_k = mean((x - mean)^k).
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
};

inline double mean_of(std::span<const double> x) {
  if (x.empty()) throw ValidationError("empty return series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sd_of(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("standard deviation needs at least two returns");
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline Moments moments(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("moments need at least two returns");
  Moments out;
  out.mean = mean_of(x);
  out.sd = sd_of(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - out.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

// Same as moments() but raises UndefinedMeasure on a constant series.
inline Moments moments_or_throw(std::span<const double> x) {
  Moments m = moments(x);
  if (!m.skewness) throw UndefinedMeasure("skewness and kurtosis of a constant series");
  return m;
}

namespace detail {
inline void same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("series lengths differ");
  if (a.empty()) throw ValidationError("empty return series");
}
}  // namespace detail

// Mean excess return over the standard deviation of excess returns.
inline double sharpe(std::span<const double> r, std::span<const double> rf) {
  detail::same_length(r, rf);
  std::vector<double> ex(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) ex[t] = r[t] - rf[t];
  const double s = sd_of(ex);
  if (!(s > 0.0)) throw UndefinedMeasure("Sharpe ratio of a riskless excess series");
  return mean_of(ex) / s;
}

// (mean(r) - mean(rf)) / (sqrt(2) sigma_-), sigma_-^2 = sum min(r, 0)^2 / (T - 1).
inline double downside_sharpe(std::span<const double> r, std::span<const double> rf) {
  detail::same_length(r, rf);
  if (r.size() < 2) throw ValidationError("downside Sharpe needs at least two returns");
  double s = 0.0;
  for (double v : r) {
    if (v < 0.0) s += v * v;
  }
  const double sigma = std::sqrt(s / static_cast<double>(r.size() - 1));
  if (!(sigma > 0.0)) throw UndefinedMeasure("no negative returns: downside risk is zero");
  return (mean_of(r) - mean_of(rf)) / (std::sqrt(2.0) * sigma);
}

// mean((r - b)_+) / sqrt(mean(((b - r)_+)^2)).
inline double up_ratio(std::span<const double> r, std::span<const double> benchmark) {
  detail::same_length(r, benchmark);
  double up = 0.0, down = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double d = r[t] - benchmark[t];
    if (d > 0.0) up += d;
    if (d < 0.0) down += d * d;
  }
  const double n = static_cast<double>(r.size());
  if (!(down > 0.0)) throw UndefinedMeasure("no shortfall below the benchmark");
  return (up / n) / std::sqrt(down / n);
}

struct TailRisk {
  double var = 0.0;  // positive for a loss
  double es = 0.0;
};

// VaR is minus the ceil((1 - level) T)-th smallest return; ES is minus the
// mean of the returns at or below it.
inline TailRisk var_es(std::span<const double> r, double level = 0.95) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("level must lie in (0, 1)");
  if (r.empty()) throw ValidationError("empty return series");
  std::vector<double> s(r.begin(), r.end());
  std::sort(s.begin(), s.end());
  const double pos = std::ceil((1.0 - level) * static_cast<double>(s.size()) - 1e-9);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(pos, 1.0)), 1,
                                                s.size());
  const double q = s[k - 1];
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : s) {
    if (v <= q) {
      sum += v;
      ++n;
    }
  }
  return {-q, -sum / static_cast<double>(n)};
}

enum class UtilityKind { exponential, power };

inline const char* to_string(UtilityKind k) {
  return k == UtilityKind::exponential ? "exponential" : "power";
}

// Exponential: -exp(-a w). Power: w^(1 - g) / (1 - g), -inf for w <= 0.
inline double wealth_utility(UtilityKind kind, double aversion, double w) {
  if (kind == UtilityKind::exponential) return -std::exp(-aversion * w);
  if (w <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::pow(w, 1.0 - aversion) / (1.0 - aversion);
}

inline void check_aversion(UtilityKind kind, double aversion) {
  if (!(aversion > 0.0) || !std::isfinite(aversion)) {
    throw ParameterError("risk aversion must be positive");
  }
  if (kind == UtilityKind::power && aversion == 1.0) {
    throw ParameterError("power utility needs relative risk aversion different from 1");
  }
}

// Certainty equivalent: E u(1 + r) = u(1 + CEQ).
inline double ceq(std::span<const double> r, UtilityKind kind, double aversion) {
  check_aversion(kind, aversion);
  if (r.empty()) throw ValidationError("empty return series");
  const double n = static_cast<double>(r.size());
  if (kind == UtilityKind::exponential) {
    // Shift by the smallest exponent for stability.
    double lo = 0.0;
    bool first = true;
    for (double v : r) {
      const double e = -aversion * (1.0 + v);
      if (first || e > lo) lo = e;
      first = false;
    }
    double s = 0.0;
    for (double v : r) s += std::exp(-aversion * (1.0 + v) - lo);
    const double log_mean = std::log(s / n) + lo;
    return -log_mean / aversion - 1.0;
  }
  double s = 0.0;
  for (double v : r) {
    if (!(1.0 + v > 0.0)) throw DomainError("nonpositive gross return under power utility");
    s += std::pow(1.0 + v, 1.0 - aversion);
  }
  return std::pow(s / n, 1.0 / (1.0 - aversion)) - 1.0;
}

inline double expected_wealth_utility(std::span<const double> r, double shift, UtilityKind kind,
                                      double aversion) {
  double s = 0.0;
  for (double v : r) s += wealth_utility(kind, aversion, 1.0 + v + shift);
  return s / static_cast<double>(r.size());
}

// theta with E u(1 + bench + theta) = E u(1 + target), by bisection on
// [-0.9, 0.9].
inline double opportunity_cost(std::span<const double> bench, std::span<const double> target,
                               UtilityKind kind, double aversion) {
  check_aversion(kind, aversion);
  if (bench.empty() || target.empty()) throw ValidationError("empty return series");
  if (kind == UtilityKind::power) {
    for (double v : target) {
      if (!(1.0 + v > 0.0)) throw DomainError("nonpositive gross return under power utility");
    }
  }
  const double goal = expected_wealth_utility(target, 0.0, kind, aversion);
  auto f = [&](double th) { return expected_wealth_utility(bench, th, kind, aversion) - goal; };
  double lo = -0.9, hi = 0.9;
  const double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw BracketError("opportunity cost root outside [-0.9, 0.9] (f(-0.9)=" +
                       std::to_string(flo) + ", f(0.9)=" + std::to_string(fhi) + ")");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct TurnoverResult {
  double turnover = 0.0;         // mean sum |w_{t+1} - w_t|
  std::vector<double> net;       // returns after proportional costs
  std::vector<double> net_wealth;
  std::vector<double> changes;   // sum |w_t - w_{t-1}| per period, 0 first
};

// Rows of `weights` hold the portfolio earning `returns[t]`. The first
// position is not charged.
inline TurnoverResult turnover_and_costs(const std::vector<std::vector<double>>& weights,
                                         std::span<const double> returns, double trc = 0.0035) {
  if (weights.size() != returns.size()) {
    throw ValidationError("weight history and return series lengths differ");
  }
  if (!(trc >= 0.0)) throw ParameterError("transaction cost rate must be nonnegative");
  TurnoverResult out;
  const std::size_t T = weights.size();
  if (T == 0) return out;
  const std::size_t p = weights.front().size();
  for (std::size_t t = 0; t < T; ++t) {
    if (weights[t].size() != p) throw ValidationError("weight rows differ in length");
    double s = 0.0;
    for (double w : weights[t]) {
      if (w < -1e-6) throw ValidationError("negative weight in row " + std::to_string(t));
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-6) {
      throw ValidationError("weight row " + std::to_string(t) + " is off the simplex");
    }
  }
  out.changes.assign(T, 0.0);
  for (std::size_t t = 1; t < T; ++t) {
    double c = 0.0;
    for (std::size_t i = 0; i < p; ++i) c += std::abs(weights[t][i] - weights[t - 1][i]);
    out.changes[t] = c;
  }
  double total = 0.0;
  for (std::size_t t = 1; t < T; ++t) total += out.changes[t];
  out.turnover = T > 1 ? total / static_cast<double>(T - 1) : 0.0;
  out.net.resize(T);
  out.net_wealth.resize(T);
  double nw = 1.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double next = nw * (1.0 + returns[t]) * (1.0 - trc * out.changes[t]);
    out.net[t] = next / nw - 1.0;
    out.net_wealth[t] = next;
    nw = next;
  }
  return out;
}

// (mu_a / sigma_a) sigma_b - mu_b: return the benchmark gives up at the
// candidate's reward-to-risk.
inline double return_loss(std::span<const double> candidate, std::span<const double> benchmark) {
  const double sa = sd_of(candidate);
  if (!(sa > 0.0)) throw UndefinedMeasure("return loss of a riskless series");
  return mean_of(candidate) / sa * sd_of(benchmark) - mean_of(benchmark);
}

struct PerformanceReport {
  Moments moments;
  std::optional<double> sharpe;
  std::optional<double> downside_sharpe;
  TailRisk tail;
  std::optional<double> up_ratio;
  std::optional<double> turnover;
  std::map<std::pair<UtilityKind, double>, double> ceq;
  std::map<std::pair<UtilityKind, double>, double> opportunity_cost;
  std::optional<double> return_loss;
  std::vector<double> net_of_cost;
};

struct ReportOptions {
  std::vector<double> exponential_aversion{2.0, 4.0, 6.0};
  std::vector<double> power_aversion{2.0, 4.0, 6.0};
  double trc = 0.0035;
  double level = 0.95;
};

template <typename Fn>
std::optional<double> defined_or_empty(Fn&& fn) {
  try {
    return fn();
  } catch (const UndefinedMeasure&) {
    return std::nullopt;
  }
}

// rf doubles as the UP-ratio benchmark. `weights` may be empty.
inline PerformanceReport performance_report(std::span<const double> r, std::span<const double> rf,
                                            const std::vector<std::vector<double>>& weights,
                                            const ReportOptions& opt = {}) {
  PerformanceReport rep;
  rep.moments = moments(r);
  rep.sharpe = defined_or_empty([&] { return sharpe(r, rf); });
  rep.downside_sharpe = defined_or_empty([&] { return downside_sharpe(r, rf); });
  rep.tail = var_es(r, opt.level);
  rep.up_ratio = defined_or_empty([&] { return up_ratio(r, rf); });
  for (double a : opt.exponential_aversion) {
    rep.ceq[{UtilityKind::exponential, a}] = ceq(r, UtilityKind::exponential, a);
  }
  for (double g : opt.power_aversion) {
    try {
      rep.ceq[{UtilityKind::power, g}] = ceq(r, UtilityKind::power, g);
    } catch (const DomainError&) {
    }
  }
  if (!weights.empty()) {
    const auto tc = turnover_and_costs(weights, r, opt.trc);
    rep.turnover = tc.turnover;
    rep.net_of_cost = tc.net;
  }
  return rep;
}

// Adds opportunity costs and the return loss of `rep` (the candidate)
// relative to a benchmark strategy. Pass net-of-cost series for the
// cost-adjusted return loss.
inline void compare_to_benchmark(PerformanceReport& rep, std::span<const double> candidate,
                                 std::span<const double> bench, const ReportOptions& opt = {}) {
  for (double a : opt.exponential_aversion) {
    try {
      rep.opportunity_cost[{UtilityKind::exponential, a}] =
          opportunity_cost(bench, candidate, UtilityKind::exponential, a);
    } catch (const BracketError&) {
    }
  }
  for (double g : opt.power_aversion) {
    try {
      rep.opportunity_cost[{UtilityKind::power, g}] =
          opportunity_cost(bench, candidate, UtilityKind::power, g);
    } catch (const Error&) {
    }
  }
  rep.return_loss = defined_or_empty([&] { return return_loss(candidate, bench); });
}

}  // namespace sparsessd
