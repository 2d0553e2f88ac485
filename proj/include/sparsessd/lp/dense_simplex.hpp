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

// General dense LP in inequality form with a two-phase tableau simplex using
// Bland's rule. Slow, but simple enough to serve as a reference solver.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "sparsessd/lp/ramp_simplex.hpp"

namespace sparsessd::lp {

enum class Sense { le, eq, ge };

// maximize c'x subject to rows; x_j >= 0 unless free[j].
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<bool> free;
  std::vector<std::string> var_names;
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
    std::string name;
  };
  std::vector<Row> rows;

  std::size_t add_var(std::string name, double cost, bool is_free = false) {
    objective.push_back(cost);
    free.push_back(is_free);
    var_names.push_back(std::move(name));
    return num_vars++;
  }
};

struct DenseSolution {
  LpStatus status = LpStatus::numerical_failure;
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
  std::string diagnostics;
};

struct DenseOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-8;
  std::size_t max_iterations = 200000;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), a_((m + 1) * (n + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  // Row m holds reduced costs (objective row, to be maximized).
  double& cost(std::size_t c) { return at(m_, c); }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t k = 0; k <= n_; ++k) at(r, k) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k <= n_; ++k) at(i, k) -= f * at(r, k);
      at(i, c) = 0.0;
    }
  }

  std::size_t m_, n_;
  std::vector<double> a_;
};

}  // namespace detail

// Solves the LP. Free variables are split into positive and negative parts.
inline DenseSolution solve_dense(const LinearProgram& lp, DenseOptions opt = {}) {
  DenseSolution out;
  const std::size_t m = lp.rows.size();
  // Column layout: split structural columns, then slacks, then artificials.
  std::vector<std::size_t> pos_col(lp.num_vars), neg_col(lp.num_vars, SIZE_MAX);
  std::size_t n = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    pos_col[j] = n++;
    if (lp.free[j]) neg_col[j] = n++;
  }
  std::vector<double> sign(m, 1.0);
  std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
  for (std::size_t r = 0; r < m; ++r) {
    if (lp.rows[r].rhs < 0.0) sign[r] = -1.0;
    Sense s = lp.rows[r].sense;
    if (sign[r] < 0 && s != Sense::eq) s = s == Sense::le ? Sense::ge : Sense::le;
    if (s != Sense::eq) slack_col[r] = n++;
  }
  const std::size_t n_slack_end = n;
  for (std::size_t r = 0; r < m; ++r) {
    Sense s = lp.rows[r].sense;
    if (sign[r] < 0 && s != Sense::eq) s = s == Sense::le ? Sense::ge : Sense::le;
    if (s != Sense::le) art_col[r] = n++;
  }

  detail::Tableau tab(m, n);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    for (const auto& [j, a] : row.terms) {
      tab.at(r, pos_col[j]) += sign[r] * a;
      if (neg_col[j] != SIZE_MAX) tab.at(r, neg_col[j]) -= sign[r] * a;
    }
    tab.rhs(r) = sign[r] * row.rhs;
    Sense s = row.sense;
    if (sign[r] < 0 && s != Sense::eq) s = s == Sense::le ? Sense::ge : Sense::le;
    if (s == Sense::le) {
      tab.at(r, slack_col[r]) = 1.0;
      basis[r] = slack_col[r];
    } else {
      if (s == Sense::ge) tab.at(r, slack_col[r]) = -1.0;
      tab.at(r, art_col[r]) = 1.0;
      basis[r] = art_col[r];
    }
  }

  // Bland: lowest-index improving column, lowest-index basic on ties.
  auto run = [&](std::size_t usable_cols) -> int {
    while (true) {
      if (++out.iterations > opt.max_iterations) return 2;
      std::size_t enter = SIZE_MAX;
      for (std::size_t c = 0; c < usable_cols; ++c) {
        if (tab.cost(c) > opt.pivot_tol) {
          enter = c;
          break;
        }
      }
      if (enter == SIZE_MAX) return 0;
      std::size_t leave = SIZE_MAX;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        const double a = tab.at(r, enter);
        if (a > opt.pivot_tol) {
          const double ratio = tab.rhs(r) / a;
          if (ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == SIZE_MAX) return 1;
      tab.pivot(leave, enter);
      basis[leave] = enter;
    }
  };

  // Phase 1: maximize -sum(artificials).
  bool has_art = n > n_slack_end;
  if (has_art) {
    for (std::size_t c = 0; c <= n; ++c) tab.at(m, c) = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (art_col[r] == SIZE_MAX) continue;
      for (std::size_t c = 0; c <= n; ++c) {
        if (c < n_slack_end || c == n) tab.at(m, c) += tab.at(r, c);
      }
    }
    const int rc = run(n_slack_end);
    if (rc == 2) {
      out.diagnostics = "iteration limit in phase 1";
      return out;
    }
    if (tab.at(m, n) > opt.feas_tol * (1.0 + m)) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < n_slack_end) continue;
      for (std::size_t c = 0; c < n_slack_end; ++c) {
        if (std::abs(tab.at(r, c)) > opt.pivot_tol) {
          tab.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  // Phase 2 objective row: c_j - c_B B^{-1} A_j, kept as "gain" per unit.
  for (std::size_t c = 0; c <= n; ++c) tab.at(m, c) = 0.0;
  std::vector<double> cfull(n, 0.0);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    cfull[pos_col[j]] = lp.objective[j];
    if (neg_col[j] != SIZE_MAX) cfull[neg_col[j]] = -lp.objective[j];
  }
  for (std::size_t c = 0; c < n; ++c) tab.at(m, c) = cfull[c];
  for (std::size_t r = 0; r < m; ++r) {
    const double cb = cfull[basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= n; ++c) tab.at(m, c) -= cb * tab.at(r, c);
  }
  // Artificial columns are excluded from entering.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= n_slack_end && std::abs(tab.rhs(r)) > opt.feas_tol) {
      out.diagnostics = "artificial variable left in basis";
      return out;
    }
  }
  const int rc = run(n_slack_end);
  if (rc == 2) {
    out.diagnostics = "iteration limit in phase 2";
    return out;
  }
  if (rc == 1) {
    out.diagnostics = "unbounded";
    return out;
  }
  std::vector<double> xs(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) xs[basis[r]] = tab.rhs(r);
  out.x.assign(lp.num_vars, 0.0);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    out.x[j] = xs[pos_col[j]] - (neg_col[j] != SIZE_MAX ? xs[neg_col[j]] : 0.0);
  }
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) v += lp.objective[j] * out.x[j];
  out.value = v;
  out.status = LpStatus::optimal;
  return out;
}

// Plain-text CPLEX LP format.
inline void write_lp_format(std::ostream& os, const LinearProgram& lp) {
  auto term = [&](double a, std::size_t j, bool first) {
    if (a < 0) {
      os << " - " << -a << ' ' << lp.var_names[j];
    } else {
      os << (first ? " " : " + ") << a << ' ' << lp.var_names[j];
    }
  };
  os.precision(17);
  os << "Maximize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.objective[j] == 0.0) continue;
    term(lp.objective[j], j, first);
    first = false;
  }
  if (first) os << " 0 " << lp.var_names.front();
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    os << ' ' << (row.name.empty() ? "c" + std::to_string(r + 1) : row.name) << ':';
    bool f = true;
    for (const auto& [j, a] : row.terms) {
      term(a, j, f);
      f = false;
    }
    os << (row.sense == Sense::le ? " <= " : row.sense == Sense::ge ? " >= " : " = ")
       << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.free[j]) os << ' ' << lp.var_names[j] << " free\n";
  }
  os << "End\n";
}

}  // namespace sparsessd::lp
