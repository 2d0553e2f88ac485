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

// Finite class of Russell-Seo utilities: convex mixtures of ramp functions
// r(y; z) = (y - z) 1(y <= z) anchored on an equally spaced outcome grid.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/panel.hpp"

namespace sparsessd {

struct OutcomeGrid {
  std::vector<double> points;  // strictly increasing, points.front() = lower

  std::size_t size() const { return points.size(); }
  double lower() const { return points.front(); }
  double upper() const { return points.back(); }
};

// z_n = lower + n / (n1 - 1) * (upper - lower), n = 0..n1-1, exact endpoints.
inline OutcomeGrid build_grid(const SupportBounds& bounds, std::size_t n1) {
  if (n1 < 2) throw ParameterError("grid size N1 must be at least 2");
  if (!std::isfinite(bounds.lower) || !std::isfinite(bounds.upper) ||
      bounds.lower > bounds.upper) {
    throw ParameterError("invalid support bounds");
  }
  if (!(bounds.lower < bounds.upper)) {
    throw DegenerateSupportError(
        "degenerate support: lower bound equals upper bound");
  }
  OutcomeGrid grid;
  grid.points.resize(n1);
  const double span = bounds.upper - bounds.lower;
  for (std::size_t n = 0; n < n1; ++n) {
    grid.points[n] =
        bounds.lower + static_cast<double>(n) / static_cast<double>(n1 - 1) * span;
  }
  grid.points.front() = bounds.lower;
  grid.points.back() = bounds.upper;
  return grid;
}

// u(y) = sum_n v_n (y - z_n) 1(y <= z_n). Equivalent min-of-lines form:
// u(y) = min_{n in active} (slope[n] * y + intercept[n]).
class RussellSeoUtility {
 public:
  RussellSeoUtility() = default;

  // Weights given as integer numerators over a common denominator.
  RussellSeoUtility(const OutcomeGrid& grid, std::vector<int> numerators,
                    int denominator)
      : numerators_(std::move(numerators)), denominator_(denominator) {
    if (numerators_.size() != grid.size()) {
      throw ParameterError("utility weight count must equal grid size");
    }
    if (denominator_ <= 0) throw ParameterError("denominator must be positive");
    int total = 0;
    for (int k : numerators_) {
      if (k < 0) throw ParameterError("negative utility weight");
      total += k;
    }
    if (total != denominator_) {
      throw ParameterError("utility weights must sum to one");
    }
    std::vector<double> v(numerators_.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
      v[n] = static_cast<double>(numerators_[n]) / denominator_;
    }
    init(grid, std::move(v));
  }

  // Arbitrary nonnegative mixture weights (renormalized to sum to one).
  static RussellSeoUtility from_weights(const OutcomeGrid& grid,
                                        std::vector<double> weights) {
    if (weights.size() != grid.size()) {
      throw ParameterError("utility weight count must equal grid size");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ParameterError("utility weights must be finite and nonnegative");
      }
      total += w;
    }
    if (!(total > 0.0)) throw ParameterError("utility weights sum to zero");
    for (double& w : weights) w /= total;
    RussellSeoUtility u;
    u.init(grid, std::move(weights));
    return u;
  }

  // Mixture with equal weight on every grid point.
  static RussellSeoUtility equal_mixture(const OutcomeGrid& grid) {
    return from_weights(grid, std::vector<double>(grid.size(), 1.0));
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& numerators() const { return numerators_; }
  int denominator() const { return denominator_; }
  const std::vector<double>& grid_points() const { return z_; }

  // c1[n] = sum_{m >= n} v_m, with c1[N1] = 0 (size N1 + 1).
  const std::vector<double>& slopes() const { return c1_; }
  // c0[n] = sum_{m >= n} (c1[m+1] - c1[m]) z_m (size N1).
  const std::vector<double>& intercepts() const { return c0_; }
  // {n : v_n > 0} union {N1 - 1}, ascending, 0-based.
  const std::vector<std::size_t>& active() const { return active_; }

  // Kink locations (grid points with positive weight), ascending.
  const std::vector<double>& kinks() const { return kinks_; }
  // Slope on each of the kinks().size() + 1 segments of the real line,
  // non-increasing from 1 (below the first kink) to 0 (above the last).
  const std::vector<double>& segment_slopes() const { return seg_slope_; }

  // Constant on the outcome range: all mass on the lowest grid point.
  bool is_flat_on_grid() const { return weights_.front() == 1.0; }

  double operator()(double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < kinks_.size(); ++k) {
      const double d = y - kinks_[k];
      if (d < 0.0) s += kink_weight_[k] * d;
    }
    return s;
  }

  // Same value through the min-of-lines representation.
  double via_lines(double y) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n : active_) best = std::min(best, c1_[n] * y + c0_[n]);
    return best;
  }

  // Expected utility under the ramp expectations R_n = E min(0, Y - z_n).
  double from_ramp_means(std::span<const double> ramp_means) const {
    double s = 0.0;
    for (std::size_t k = 0; k < kink_pos_.size(); ++k) {
      s += kink_weight_[k] * ramp_means[kink_pos_[k]];
    }
    return s;
  }

  std::string label() const {
    std::string s = "(";
    for (std::size_t n = 0; n < weights_.size(); ++n) {
      if (n) s += ',';
      if (!numerators_.empty()) {
        s += std::to_string(numerators_[n]) + "/" + std::to_string(denominator_);
      } else {
        s += std::to_string(weights_[n]);
      }
    }
    return s + ")";
  }

 private:
  void init(const OutcomeGrid& grid, std::vector<double> v) {
    weights_ = std::move(v);
    z_ = grid.points;
    const std::size_t n1 = z_.size();
    c1_.assign(n1 + 1, 0.0);
    for (std::size_t n = n1; n-- > 0;) c1_[n] = c1_[n + 1] + weights_[n];
    c0_.assign(n1, 0.0);
    double acc = 0.0;
    for (std::size_t m = n1; m-- > 0;) {
      acc += (c1_[m + 1] - c1_[m]) * z_[m];
      c0_[m] = acc;
    }
    active_.clear();
    kinks_.clear();
    kink_weight_.clear();
    kink_pos_.clear();
    for (std::size_t n = 0; n < n1; ++n) {
      if (weights_[n] > 0.0) {
        active_.push_back(n);
        kinks_.push_back(z_[n]);
        kink_weight_.push_back(weights_[n]);
        kink_pos_.push_back(n);
      }
    }
    if (active_.empty() || active_.back() != n1 - 1) active_.push_back(n1 - 1);
    seg_slope_.assign(kinks_.size() + 1, 0.0);
    double slope = 0.0;
    for (std::size_t k = kinks_.size(); k-- > 0;) {
      slope += kink_weight_[k];
      seg_slope_[k] = slope;
    }
  }

  std::vector<int> numerators_;
  int denominator_ = 0;
  std::vector<double> weights_;
  std::vector<double> z_;
  std::vector<double> c1_;
  std::vector<double> c0_;
  std::vector<std::size_t> active_;
  std::vector<double> kinks_;
  std::vector<double> kink_weight_;
  std::vector<std::size_t> kink_pos_;
  std::vector<double> seg_slope_;
};

// Closed-form class size C(N1 + N2 - 2, N1 - 1).
inline std::uint64_t utility_count(std::size_t n1, std::size_t n2) {
  if (n1 < 1 || n2 < 2) return 0;
  std::uint64_t r = 1;
  const std::uint64_t k = n1 - 1;
  const std::uint64_t n = n1 + n2 - 2;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All weight vectors on {0, 1/(N2-1), ..., 1}^{N1} summing to one, in
// descending lexicographic order of their numerators.
inline std::vector<RussellSeoUtility> enumerate_utilities(const OutcomeGrid& grid,
                                                          std::size_t n2) {
  if (n2 < 2) throw ParameterError("N2 must be at least 2");
  if (grid.size() < 2) throw ParameterError("grid size N1 must be at least 2");
  const int denom = static_cast<int>(n2 - 1);
  const std::size_t n1 = grid.size();
  std::vector<RussellSeoUtility> out;
  out.reserve(utility_count(n1, n2));
  std::vector<int> cur(n1, 0);
  // Depth-first over coordinates, largest first value first.
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == n1) {
      cur[pos] = remaining;
      out.emplace_back(grid, cur, denom);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  rec(rec, 0, denom);
  return out;
}

// R_n = (1/T) sum_t min(0, y_t - z_n) for every grid point.
inline std::vector<double> ramp_means(std::span<const double> y,
                                      std::span<const double> grid_points) {
  std::vector<double> out(grid_points.size(), 0.0);
  if (y.empty()) return out;
  for (std::size_t n = 0; n < grid_points.size(); ++n) {
    const double z = grid_points[n];
    double s = 0.0;
    for (double v : y) {
      if (v < z) s += v - z;
    }
    out[n] = s / static_cast<double>(y.size());
  }
  return out;
}

inline double evaluate_utility(const RussellSeoUtility& u, double y) {
  return u(y);
}

}  // namespace sparsessd
