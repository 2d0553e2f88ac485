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

// Monte Carlo designs with jointly normal returns, and the selection-recovery
// experiment run over them.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsessd/error.hpp"
#include "sparsessd/panel.hpp"
#include "sparsessd/parallel.hpp"
#include "sparsessd/random.hpp"
#include "sparsessd/spanning.hpp"

namespace sparsessd {

struct McDesign {
  int experiment = 2;
  std::size_t n_assets = 50;
  std::size_t t_obs = 1000;
  std::size_t q = 10;
  std::size_t replications = 50;
  std::uint64_t seed = 7;

  // First experiment: independent assets with these moments.
  double mean = 0.01;
  double sd = 0.05;
  std::vector<double> means;  // optional per-asset overrides
  std::vector<double> sds;

  // Second experiment: fixed blocks A, B and the rest.
  std::size_t size_a = 5;
  double mu_a = 0.3, sigma_a = 0.15;
  std::size_t size_b = 5;
  double mu_b = 0.15, sigma_b = 0.1;
  double mu_rest = 0.1, sigma_rest = 0.5;
  double rho = 0.001;

  SpanningConfig spanning;
  std::size_t threads = 1;

  static McDesign experiment_one(std::size_t n, std::size_t t, std::size_t q) {
    McDesign d;
    d.experiment = 1;
    d.n_assets = n;
    d.t_obs = t;
    d.q = q;
    return d;
  }

  static McDesign experiment_two(std::size_t t, std::size_t q) {
    McDesign d;
    d.experiment = 2;
    d.n_assets = 50;
    d.t_obs = t;
    d.q = q;
    return d;
  }

  void validate() const {
    if (experiment != 1 && experiment != 2) throw ParameterError("experiment must be 1 or 2");
    if (n_assets < 1 || t_obs < 2) throw ParameterError("design needs assets and T >= 2");
    if (q < 1) throw ParameterError("q must be at least 1");
    if (replications < 1) throw ParameterError("replications must be at least 1");
    if (experiment == 1) {
      if (!means.empty() && means.size() != n_assets) throw ParameterError("means length");
      if (!sds.empty() && sds.size() != n_assets) throw ParameterError("sds length");
    } else if (size_a + size_b > n_assets) {
      throw ParameterError("blocks A and B exceed the number of assets");
    }
  }

  std::vector<double> mean_vector() const {
    std::vector<double> m(n_assets);
    for (std::size_t i = 0; i < n_assets; ++i) {
      if (experiment == 1) {
        m[i] = means.empty() ? mean : means[i];
      } else {
        m[i] = i < size_a ? mu_a : i < size_a + size_b ? mu_b : mu_rest;
      }
    }
    return m;
  }

  Eigen::MatrixXd covariance() const {
    const auto n = static_cast<Eigen::Index>(n_assets);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> s(n_assets);
    for (std::size_t i = 0; i < n_assets; ++i) {
      if (experiment == 1) {
        s[i] = sds.empty() ? sd : sds[i];
      } else {
        s[i] = i < size_a ? sigma_a : i < size_a + size_b ? sigma_b : sigma_rest;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double r = i == j ? 1.0 : (experiment == 2 ? rho : 0.0);
        c(i, j) = r * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
      }
    }
    return c;
  }

  // Assets in blocks A and B (second experiment).
  bool in_dominant_block(std::size_t i) const { return i < size_a + size_b; }
};

// T i.i.d. draws of mean + L z with L L' the design covariance.
inline ReturnPanel generate(const McDesign& design, std::size_t replication) {
  design.validate();
  const Eigen::MatrixXd cov = design.covariance();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("design covariance is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const auto mu = design.mean_vector();
  const std::size_t n = design.n_assets;
  Rng rng(design.seed, replication);
  std::vector<double> values(design.t_obs * n);
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < design.t_obs; ++t) {
    for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = rng.normal();
    const Eigen::VectorXd x = L * z;
    for (std::size_t i = 0; i < n; ++i) {
      values[t * n + i] = mu[i] + x(static_cast<Eigen::Index>(i));
    }
  }
  return ReturnPanel::from_matrix(design.t_obs, n, std::move(values));
}

struct McReplication {
  std::size_t replication = 0;
  std::vector<std::size_t> support;
  std::size_t selected = 0;
  std::size_t held_assets = 0;  // assets with positive weight in some sparse optimizer
  double loss = 0.0;
  bool inside_dominant = false;
  StopReason stop = StopReason::q_max;
};

struct McReport {
  McDesign design;
  double mean_selected = 0.0;
  double sd_selected = 0.0;
  double mean_held = 0.0;
  double mean_loss = 0.0;
  double se_loss = 0.0;
  double share_inside_dominant = 0.0;
  std::vector<McReplication> replications;
};

inline McReplication run_replication(const McDesign& design, std::size_t rep) {
  const ReturnPanel panel = generate(design, rep);
  SpanningConfig cfg = design.spanning;
  cfg.q_max = design.q;
  cfg.threads = 1;
  SpanningEngine engine(panel, cfg.n1, cfg.n2, 1);
  const SpanningResult res = engine.select(cfg);
  McReplication out;
  out.replication = rep;
  out.support = res.sorted_support();
  out.selected = res.support.size();
  out.loss = res.loss;
  out.stop = res.stop;
  std::vector<char> held(panel.cols(), 0);
  for (const auto& w : res.sparse_optimizers) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 1e-9) held[i] = 1;
    }
  }
  for (char h : held) out.held_assets += h;
  out.inside_dominant = true;
  for (std::size_t i : out.support) {
    if (!design.in_dominant_block(i)) out.inside_dominant = false;
  }
  return out;
}

inline McReport run_experiment(const McDesign& design) {
  design.validate();
  McReport rep;
  rep.design = design;
  rep.replications.resize(design.replications);
  parallel_for(design.replications, design.threads,
               [&](std::size_t r) { rep.replications[r] = run_replication(design, r); });
  const double n = static_cast<double>(design.replications);
  double sc = 0.0, sc2 = 0.0, sl = 0.0, sl2 = 0.0, sh = 0.0, inside = 0.0;
  for (const auto& r : rep.replications) {
    const double c = static_cast<double>(r.selected);
    sc += c;
    sc2 += c * c;
    sl += r.loss;
    sl2 += r.loss * r.loss;
    sh += static_cast<double>(r.held_assets);
    inside += r.inside_dominant ? 1.0 : 0.0;
  }
  rep.mean_selected = sc / n;
  rep.mean_loss = sl / n;
  rep.mean_held = sh / n;
  rep.share_inside_dominant = inside / n;
  if (design.replications > 1) {
    rep.sd_selected = std::sqrt(std::max(0.0, (sc2 - n * rep.mean_selected * rep.mean_selected) /
                                                  (n - 1.0)));
    const double sdl =
        std::sqrt(std::max(0.0, (sl2 - n * rep.mean_loss * rep.mean_loss) / (n - 1.0)));
    rep.se_loss = sdl / std::sqrt(n);
  }
  return rep;
}

}  // namespace sparsessd
