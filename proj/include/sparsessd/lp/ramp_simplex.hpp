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

// Primal simplex specialised to the expected-utility LP
//
//   max (1/T) sum_t y_t
//   s.t. y_t - c1_n X_t' lambda <= c0_n    (t = 1..T, n in active set)
//        sum_i lambda_i = 1, lambda >= 0, y free.
//
// Eliminating y, the problem is max_lambda (1/T) sum_t u(X_t' lambda) with u
// concave piecewise linear. Writing each y_t as a sum of bounded segment
// variables gives an LP whose basis always contains one segment variable per
// "free" row. The remaining "tight" rows sit exactly on a kink of u, and
// together with the budget row they form a small working matrix
//
//   W = [ 1'            ]   (restricted to the basic asset columns)
//       [ X_t', t tight ]
//
// of size (#tight + 1) = #basic assets. All linear algebra happens on W, so
// an iteration costs O(T * #columns) instead of a dense tableau pivot.
//
// The ratio test is a long-step one: a free row that reaches the end of its
// segment switches to the next segment as long as the objective still
// improves along the edge, so one iteration can cross many kinks.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sparsessd::lp {

enum class LpStatus { optimal, infeasible, numerical_failure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::numerical_failure:
      return "numerical-failure";
  }
  return "unknown";
}

// Basis snapshot used to warm-start a later solve on the same rows and
// utility, possibly with more columns allowed.
struct RampBasis {
  std::vector<std::size_t> basic;       // asset columns, global indices
  std::vector<std::size_t> tight_rows;  // rows pinned at a kink
  std::vector<int> tight_kink;          // kink index for each tight row

  bool empty() const { return basic.empty(); }
};

struct RampProblem {
  const double* x = nullptr;  // row-major T x p
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<const double> kinks;           // ascending
  std::span<const double> kink_weights;    // v at each kink
  std::span<const double> segment_slopes;  // kinks.size() + 1 entries
};

struct RampSolution {
  LpStatus status = LpStatus::numerical_failure;
  double value = 0.0;
  std::vector<double> weights;  // size cols, zero outside the allowed set
  RampBasis basis;
  std::size_t iterations = 0;
  std::string diagnostics;
};

struct RampOptions {
  double rate_tol = 1e-12;   // minimum improvement rate to pivot
  double pivot_tol = 1e-9;   // smallest usable direction entry
  double feas_tol = 1e-8;    // simplex feasibility of recomputed weights
  std::size_t degenerate_switch = 50;  // consecutive zero steps before Bland
};

class RampSimplex {
 public:
  RampSimplex(const RampProblem& problem, RampOptions options = {})
      : pb_(problem), opt_(options) {
    nk_ = static_cast<int>(pb_.kinks.size());
  }

  RampSolution solve(std::span<const std::size_t> allowed,
                     const RampBasis* warm = nullptr) {
    RampSolution out;
    if (allowed.empty() || pb_.rows == 0) {
      out.status = LpStatus::infeasible;
      out.diagnostics = "empty support or no observations";
      return out;
    }
    setup(allowed);
    bool started = false;
    if (warm != nullptr && !warm->empty()) started = load_basis(*warm);
    if (!started) cold_start();

    bool restarted = false;
    while (true) {
      const Step s = iterate(out.iterations);
      if (s == Step::optimal) break;
      if (s == Step::failed) {
        if (!restarted) {
          restarted = true;
          cold_start();
          continue;
        }
        out.status = LpStatus::numerical_failure;
        out.diagnostics = diag_;
        return out;
      }
      if (++out.iterations > iteration_cap()) {
        out.status = LpStatus::numerical_failure;
        out.diagnostics = "iteration limit reached";
        return out;
      }
    }
    finish(out);
    return out;
  }

  // (1/T) sum_t u(X_t' lambda) for a dense weight vector.
  double evaluate(std::span<const double> weights) const {
    double s = 0.0;
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      const double* row = pb_.x + t * pb_.cols;
      double y = 0.0;
      for (std::size_t i = 0; i < pb_.cols; ++i) {
        if (weights[i] != 0.0) y += row[i] * weights[i];
      }
      s += utility(y);
    }
    return s / static_cast<double>(pb_.rows);
  }

  double utility(double y) const {
    double s = 0.0;
    for (int k = 0; k < nk_; ++k) {
      const double d = y - pb_.kinks[k];
      if (d < 0.0) s += pb_.kink_weights[k] * d;
    }
    return s;
  }

 private:
  enum class Step { pivoted, optimal, failed };

  std::size_t iteration_cap() const {
    return 50 * (pb_.rows + allowed_.size()) + 1000;
  }

  double slope(int seg) const { return pb_.segment_slopes[seg]; }

  // Segment containing y; a value on a kink belongs to the segment above.
  int locate(double y) const {
    return static_cast<int>(
        std::upper_bound(pb_.kinks.begin(), pb_.kinks.end(), y) -
        pb_.kinks.begin());
  }

  double xt(std::size_t t, std::size_t j) const { return pb_.x[t * pb_.cols + j]; }

  void setup(std::span<const std::size_t> allowed) {
    allowed_.assign(allowed.begin(), allowed.end());
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
    is_basic_.assign(pb_.cols, 0);
    lam_.assign(pb_.cols, 0.0);
    seg_.assign(pb_.rows, 0);
    y_.assign(pb_.rows, 0.0);
    h_.assign(pb_.cols, 0.0);
    basic_.clear();
    tight_.clear();
    tight_kink_.clear();
    degenerate_run_ = 0;
  }

  void cold_start() {
    std::fill(is_basic_.begin(), is_basic_.end(), 0);
    std::fill(lam_.begin(), lam_.end(), 0.0);
    basic_.clear();
    tight_.clear();
    tight_kink_.clear();
    std::size_t best = allowed_.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t j : allowed_) {
      double s = 0.0;
      for (std::size_t t = 0; t < pb_.rows; ++t) s += utility(xt(t, j));
      if (s > best_value) {
        best_value = s;
        best = j;
      }
    }
    basic_.push_back(best);
    is_basic_[best] = 1;
    lam_[best] = 1.0;
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      y_[t] = xt(t, best);
      seg_[t] = locate(y_[t]);
    }
  }

  bool load_basis(const RampBasis& b) {
    if (b.tight_rows.size() + 1 != b.basic.size() ||
        b.tight_kink.size() != b.tight_rows.size()) {
      return false;
    }
    std::vector<char> allowed_flag(pb_.cols, 0);
    for (std::size_t j : allowed_) allowed_flag[j] = 1;
    for (std::size_t j : b.basic) {
      if (j >= pb_.cols || !allowed_flag[j] || is_basic_[j]) return false;
      is_basic_[j] = 1;
    }
    for (std::size_t k = 0; k < b.tight_rows.size(); ++k) {
      if (b.tight_rows[k] >= pb_.rows || b.tight_kink[k] < 0 ||
          b.tight_kink[k] >= nk_) {
        std::fill(is_basic_.begin(), is_basic_.end(), 0);
        return false;
      }
    }
    basic_ = b.basic;
    tight_ = b.tight_rows;
    tight_kink_ = b.tight_kink;
    for (std::size_t t : tight_) seg_[t] = -1;
    if (!refresh_primal(true)) {
      std::fill(is_basic_.begin(), is_basic_.end(), 0);
      std::fill(seg_.begin(), seg_.end(), 0);
      return false;
    }
    return true;
  }

  bool factor() {
    const std::size_t m = basic_.size();
    w_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) w_(0, static_cast<Eigen::Index>(c)) = 1.0;
    for (std::size_t r = 0; r < tight_.size(); ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        w_(static_cast<Eigen::Index>(r + 1), static_cast<Eigen::Index>(c)) =
            xt(tight_[r], basic_[c]);
      }
    }
    lu_.compute(w_);
    if (m > 1 && !(lu_.rcond() > 1e-13)) {
      diag_ = "working matrix is singular";
      return false;
    }
    return true;
  }

  // Recomputes basic weights from the working matrix and all row values.
  // With reassign, every non-tight row gets the segment containing it.
  bool refresh_primal(bool reassign) {
    if (!factor()) return false;
    const std::size_t m = basic_.size();
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    rhs(0) = 1.0;
    for (std::size_t r = 0; r < tight_.size(); ++r) {
      rhs(static_cast<Eigen::Index>(r + 1)) = pb_.kinks[tight_kink_[r]];
    }
    Eigen::VectorXd lb = lu_.solve(rhs);
    for (std::size_t c = 0; c < m; ++c) {
      double v = lb(static_cast<Eigen::Index>(c));
      if (!std::isfinite(v) || v < -opt_.feas_tol) {
        diag_ = "basic weight infeasible";
        return false;
      }
      lam_[basic_[c]] = std::max(v, 0.0);
    }
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      const double* row = pb_.x + t * pb_.cols;
      double y = 0.0;
      for (std::size_t j : basic_) y += row[j] * lam_[j];
      y_[t] = y;
    }
    for (std::size_t r = 0; r < tight_.size(); ++r) {
      y_[tight_[r]] = pb_.kinks[tight_kink_[r]];
    }
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      if (seg_[t] < 0) continue;
      if (reassign) {
        seg_[t] = locate(y_[t]);
        continue;
      }
      // Keep the basic segment unless the row drifted clearly outside it.
      const int s = seg_[t];
      const double tol = 1e-9 * (1.0 + std::abs(y_[t]));
      const bool below = s > 0 && y_[t] < pb_.kinks[s - 1] - tol;
      const bool above = s < nk_ && y_[t] > pb_.kinks[s] + tol;
      if (below || above) seg_[t] = locate(y_[t]);
    }
    return true;
  }

  Step iterate(std::size_t /*iteration*/) {
    if (!refresh_primal(false)) return Step::failed;
    const std::size_t m = basic_.size();
    const double inv_t = 1.0 / static_cast<double>(pb_.rows);

    // h_j = (1/T) sum_{free t} slope(seg_t) X_tj over allowed columns.
    for (std::size_t j : allowed_) h_[j] = 0.0;
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      if (seg_[t] < 0) continue;
      const double g = slope(seg_[t]);
      if (g == 0.0) continue;
      const double* row = pb_.x + t * pb_.cols;
      for (std::size_t j : allowed_) h_[j] += g * row[j];
    }
    for (std::size_t j : allowed_) h_[j] *= inv_t;

    Eigen::VectorXd hb(static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) hb(static_cast<Eigen::Index>(c)) = h_[basic_[c]];
    const Eigen::VectorXd pi = lu_.transpose().solve(hb);

    // Pricing. Candidates: nonbasic columns entering from zero, and tight
    // rows leaving their kink upwards (+1) or downwards (-1).
    const bool bland = degenerate_run_ >= opt_.degenerate_switch;
    double best_rate = opt_.rate_tol;
    std::size_t enter_col = pb_.cols;
    std::size_t enter_row_pos = tight_.size();
    int enter_sign = 0;
    bool found = false;
    for (std::size_t j : allowed_) {
      if (is_basic_[j]) continue;
      double rate = h_[j] - pi(0);
      for (std::size_t r = 0; r < tight_.size(); ++r) {
        rate -= pi(static_cast<Eigen::Index>(r + 1)) * xt(tight_[r], j);
      }
      if (rate > best_rate) {
        best_rate = rate;
        enter_col = j;
        found = true;
        if (bland) break;
      }
    }
    if (!(bland && found)) {
      for (std::size_t r = 0; r < tight_.size(); ++r) {
        const int k = tight_kink_[r];
        const double pr = pi(static_cast<Eigen::Index>(r + 1));
        const double up = pr + slope(k + 1) * inv_t;
        const double down = -pr - slope(k) * inv_t;
        if (up > best_rate) {
          best_rate = up;
          enter_col = pb_.cols;
          enter_row_pos = r;
          enter_sign = 1;
          found = true;
        }
        if (down > best_rate) {
          best_rate = down;
          enter_col = pb_.cols;
          enter_row_pos = r;
          enter_sign = -1;
          found = true;
        }
        if (bland && found) break;
      }
    }
    if (!found) return Step::optimal;

    // Edge direction in weight space.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    if (enter_col < pb_.cols) {
      rhs(0) = -1.0;
      for (std::size_t r = 0; r < tight_.size(); ++r) {
        rhs(static_cast<Eigen::Index>(r + 1)) = -xt(tight_[r], enter_col);
      }
    } else {
      rhs(static_cast<Eigen::Index>(enter_row_pos + 1)) = enter_sign;
    }
    const Eigen::VectorXd db = lu_.solve(rhs);

    std::vector<double>& a = dir_;
    a.assign(pb_.rows, 0.0);
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      const double* row = pb_.x + t * pb_.cols;
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += row[basic_[c]] * db(static_cast<Eigen::Index>(c));
      if (enter_col < pb_.cols) s += row[enter_col];
      a[t] = s;
    }
    std::size_t released_row = pb_.rows;
    int released_old_seg = 0;
    if (enter_col == pb_.cols) {
      released_row = tight_[enter_row_pos];
      const int k = tight_kink_[enter_row_pos];
      released_old_seg = -1;
      seg_[released_row] = enter_sign > 0 ? k + 1 : k;
      y_[released_row] = pb_.kinks[k];
      a[released_row] = enter_sign;
    }
    for (std::size_t r = 0; r < tight_.size(); ++r) {
      if (r != enter_row_pos || enter_col < pb_.cols) a[tight_[r]] = 0.0;
    }

    // Blocking basic weight.
    double tau_lam = std::numeric_limits<double>::infinity();
    std::size_t leave_pos = m;
    for (std::size_t c = 0; c < m; ++c) {
      const double d = db(static_cast<Eigen::Index>(c));
      if (d < -opt_.pivot_tol) {
        const double tau = lam_[basic_[c]] / (-d);
        if (tau < tau_lam ||
            (tau == tau_lam && leave_pos < m &&
             std::abs(d) > std::abs(db(static_cast<Eigen::Index>(leave_pos))))) {
          tau_lam = tau;
          leave_pos = c;
        }
      }
    }

    // Kink crossings of free rows, in order of step length.
    using Event = std::pair<double, std::size_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    auto schedule = [&](std::size_t t) {
      const double at = a[t];
      if (std::abs(at) <= 1e-14) return;
      const int s = seg_[t];
      double tau;
      if (at > 0.0) {
        if (s >= nk_) return;
        tau = (pb_.kinks[s] - y_[t]) / at;
      } else {
        if (s <= 0) return;
        tau = (pb_.kinks[s - 1] - y_[t]) / at;
      }
      events.emplace(std::max(tau, 0.0), t);
    };
    for (std::size_t t = 0; t < pb_.rows; ++t) {
      if (seg_[t] >= 0) schedule(t);
    }

    double rate = best_rate;
    double tau = tau_lam;
    std::size_t stop_row = pb_.rows;
    int stop_kink = -1;
    while (!events.empty()) {
      const auto [te, t] = events.top();
      if (te >= tau_lam) break;
      events.pop();
      const int s = seg_[t];
      const double at = a[t];
      const int next = at > 0.0 ? s + 1 : s - 1;
      const double delta = (slope(next) - slope(s)) * at * inv_t;
      if (rate + delta > opt_.rate_tol) {
        rate += delta;
        seg_[t] = next;
        schedule(t);
        continue;
      }
      tau = te;
      stop_row = t;
      stop_kink = at > 0.0 ? s : s - 1;
      break;
    }
    if (!std::isfinite(tau)) {
      diag_ = "unbounded edge";
      if (released_row < pb_.rows) seg_[released_row] = released_old_seg;
      return Step::failed;
    }

    degenerate_run_ = tau <= 0.0 ? degenerate_run_ + 1 : 0;
    for (std::size_t c = 0; c < m; ++c) {
      lam_[basic_[c]] += tau * db(static_cast<Eigen::Index>(c));
    }
    if (enter_col < pb_.cols) lam_[enter_col] = tau;

    if (released_row < pb_.rows) {
      tight_.erase(tight_.begin() + static_cast<std::ptrdiff_t>(enter_row_pos));
      tight_kink_.erase(tight_kink_.begin() +
                        static_cast<std::ptrdiff_t>(enter_row_pos));
    }
    if (stop_row < pb_.rows) {
      if (enter_col < pb_.cols) {
        basic_.push_back(enter_col);
        is_basic_[enter_col] = 1;
      }
      tight_.push_back(stop_row);
      tight_kink_.push_back(stop_kink);
      seg_[stop_row] = -1;
    } else {
      const std::size_t leaving = basic_[leave_pos];
      lam_[leaving] = 0.0;
      is_basic_[leaving] = 0;
      if (enter_col < pb_.cols) {
        basic_[leave_pos] = enter_col;
        is_basic_[enter_col] = 1;
      } else {
        basic_.erase(basic_.begin() + static_cast<std::ptrdiff_t>(leave_pos));
      }
    }
    return Step::pivoted;
  }

  void finish(RampSolution& out) {
    out.weights.assign(pb_.cols, 0.0);
    double total = 0.0;
    for (std::size_t j : basic_) total += lam_[j];
    for (std::size_t j : basic_) out.weights[j] = lam_[j] / total;
    out.value = evaluate(out.weights);
    out.basis.basic = basic_;
    out.basis.tight_rows = tight_;
    out.basis.tight_kink = tight_kink_;
    out.status = LpStatus::optimal;
  }

  RampProblem pb_;
  RampOptions opt_;
  int nk_ = 0;
  std::vector<std::size_t> allowed_;
  std::vector<char> is_basic_;
  std::vector<double> lam_;
  std::vector<int> seg_;
  std::vector<double> y_;
  std::vector<double> h_;
  std::vector<double> dir_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> tight_;
  std::vector<int> tight_kink_;
  Eigen::MatrixXd w_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::size_t degenerate_run_ = 0;
  std::string diag_;
};

}  // namespace sparsessd::lp
