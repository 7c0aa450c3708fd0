// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace ssearch {

struct Observation {
  std::vector<double> z;  // unit-cube encoding
  double q = 0.0;         // measured performance in [0,1]
};

struct GpConfig {
  double lengthscale = 0.2;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;
  double ucb_kappa = 2.0;
  int n_init = 8;           // initial uniform design before the GP drives
  int acq_candidates = 2048;
  int acq_refine_top = 8;   // candidates refined by coordinate descent
};

// sigma_f^2 * exp(-||z1 - z2||^2 / (2 l^2))
double rbf_kernel(std::span<const double> z1, std::span<const double> z2,
                  const GpConfig& cfg);

// mean + kappa * sqrt(variance)
double ucb(double mean, double variance, double kappa);

// Gaussian-process surrogate over the unit cube with a constant prior mean
// equal to the arithmetic mean of all observed values. The kernel matrix
// factorization is cached and refreshed on update, with jitter escalation
// from 1e-10 to 1e-6 when duplicate points make it singular.
class BoState {
 public:
  BoState(int dim, const GpConfig& cfg);

  void update(std::span<const double> z, double q);

  // Posterior (mean, variance) at a query point. Before any observation
  // this is the prior: mean 0.5 (accuracies live in [0,1]), variance
  // sigma_f^2. Variance is clamped at 0 from below.
  std::pair<double, double> posterior(std::span<const double> z) const;

  // Next point to evaluate: the initial design returns uniform points;
  // afterwards the UCB acquisition is maximized by random multistart plus
  // cyclic coordinate descent (golden-section line search per coordinate,
  // two sweeps). Pure function of (state, rng state).
  std::vector<double> propose_next(Rng& rng) const;

  double acquisition(std::span<const double> z) const;

  const std::vector<Observation>& observations() const { return obs_; }
  double prior_mean() const { return mean_; }
  int dim() const { return dim_; }
  const GpConfig& config() const { return cfg_; }

 private:
  void refactor();

  int dim_;
  GpConfig cfg_;
  std::vector<Observation> obs_;
  std::vector<double> chol_;      // lower-triangular factor of K + sigma_n^2 I
  std::vector<double> alpha_;     // (K + sigma_n^2 I)^{-1} (q - mean)
  double mean_ = 0.5;
};

}  // namespace ssearch
