// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "search.hpp"

namespace ssearch {

// Proposals uniform in the unit cube; observations are ignored.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(int dim) : dim_(dim) {}
  std::vector<double> propose(Rng& rng) override;
  void observe(std::span<const double>, double) override {}
  std::string_view name() const override { return "random"; }

 private:
  int dim_;
};

struct RlConfig {
  double learning_rate = 0.05;
  double stddev_init = 0.25;
  double stddev_anneal = 0.97;  // multiplicative, per step
  double stddev_floor = 0.02;
  double mean_init = 0.5;
};

// Score-function policy gradient over the unit cube: a diagonal Gaussian
// policy whose mean moves along (q - baseline) * (z - mean) / stddev^2,
// with the baseline the running mean of all observed rewards (including
// the current one, so constant rewards leave the policy unchanged).
class RlAgent : public Agent {
 public:
  RlAgent(int dim, const RlConfig& cfg);
  std::vector<double> propose(Rng& rng) override;
  void observe(std::span<const double> z, double q) override;
  std::string_view name() const override { return "rl"; }

  const std::vector<double>& policy_mean() const { return mean_; }
  const std::vector<double>& policy_stddev() const { return stddev_; }

 private:
  int dim_;
  RlConfig cfg_;
  std::vector<double> mean_;
  std::vector<double> stddev_;
  double reward_sum_ = 0.0;
  std::size_t reward_count_ = 0;
};

// The comparison loops of the ablation study: identical to run_ss except
// for the proposal strategy (and no forced reference candidate).
SearchRunResult random_search(const SearchConfig& cfg, const Dataset& train_set,
                              const Dataset& val_set, const ModelWeights& w_share,
                              const FeatureTable& table,
                              const std::function<void(const StepRecord&)>& on_step = {});

SearchRunResult rl_search(const SearchConfig& cfg, const RlConfig& rl,
                          const Dataset& train_set, const Dataset& val_set,
                          const ModelWeights& w_share, const FeatureTable& table,
                          const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace ssearch
