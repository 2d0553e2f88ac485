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

// Shared fixtures and brute-force oracles for the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sparsessd/sparsessd.hpp"

namespace sparsessd::testing {

inline ReturnPanel random_panel(std::size_t T, std::size_t p, std::uint64_t seed,
                                double mean = 0.01, double sd = 0.05) {
  Rng rng(seed);
  std::vector<double> v(T * p);
  for (auto& x : v) x = mean + sd * rng.normal();
  return ReturnPanel::from_matrix(T, p, std::move(v));
}

inline ReturnPanel csv_panel(const std::string& text) {
  std::istringstream in(text);
  return parse_panel_csv(in);
}

// Expected utility of a weight vector, evaluated directly from the ramps.
inline double direct_value(const ReturnPanel& panel, const RussellSeoUtility& u,
                           const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t t = 0; t < panel.rows(); ++t) {
    double y = 0.0;
    for (std::size_t i = 0; i < panel.cols(); ++i) y += w[i] * panel(t, i);
    const auto& z = u.grid_points();
    const auto& v = u.weights();
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (y <= z[n]) s += v[n] * (y - z[n]);
    }
  }
  return s / static_cast<double>(panel.rows());
}

// Visits every point of the simplex over `support` whose coordinates are
// multiples of `step` and lie within `radius` of `center` (all points when
// center is empty).
template <typename Fn>
void simplex_lattice(std::size_t p, const std::vector<std::size_t>& support, double step,
                     const std::vector<double>& center, double radius, Fn&& fn) {
  const long m = std::lround(1.0 / step);
  const std::size_t k = support.size();
  std::vector<long> c(k, 0);
  std::vector<double> w(p, 0.0);
  auto lo_of = [&](std::size_t j) {
    if (center.empty()) return 0L;
    return std::max(0L, static_cast<long>(std::ceil((center[support[j]] - radius) * m - 1e-9)));
  };
  auto hi_of = [&](std::size_t j) {
    if (center.empty()) return m;
    return std::min(m, static_cast<long>(std::floor((center[support[j]] + radius) * m + 1e-9)));
  };
  auto rec = [&](auto&& self, std::size_t pos, long remaining) -> void {
    if (pos + 1 == k) {
      if (remaining < lo_of(pos) || remaining > hi_of(pos)) return;
      c[pos] = remaining;
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        w[support[j]] = static_cast<double>(c[j]) / static_cast<double>(m);
      }
      fn(w);
      return;
    }
    for (long a = lo_of(pos); a <= std::min(remaining, hi_of(pos)); ++a) {
      c[pos] = a;
      self(self, pos + 1, remaining - a);
    }
  };
  rec(rec, 0, m);
}

// Grid search with step 0.01, refined to 0.001 around the coarse optimum.
inline double brute_force_optimum(const ReturnPanel& panel, const RussellSeoUtility& u,
                                  const std::vector<std::size_t>& support) {
  double best = -INFINITY;
  std::vector<double> arg;
  simplex_lattice(panel.cols(), support, 0.01, {}, 0.0, [&](const std::vector<double>& w) {
    const double v = direct_value(panel, u, w);
    if (v > best) {
      best = v;
      arg = w;
    }
  });
  const std::vector<double> center = arg;
  simplex_lattice(panel.cols(), support, 0.001, center, 0.01, [&](const std::vector<double>& w) {
    best = std::max(best, direct_value(panel, u, w));
  });
  return best;
}

inline std::vector<std::size_t> all_assets(std::size_t p) {
  std::vector<std::size_t> s(p);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

}  // namespace sparsessd::testing
