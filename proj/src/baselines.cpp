// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssearch {

std::vector<double> RandomAgent::propose(Rng& rng) {
  std::vector<double> z(dim_);
  for (double& zi : z) zi = rng.uniform();
  return z;
}

RlAgent::RlAgent(int dim, const RlConfig& cfg) : dim_(dim), cfg_(cfg) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(cfg.stddev_init > 0.0) || !(cfg.stddev_floor > 0.0) ||
      !(cfg.stddev_anneal > 0.0 && cfg.stddev_anneal <= 1.0) ||
      cfg.learning_rate < 0.0)
    throw std::invalid_argument("invalid RL configuration");
  mean_.assign(dim, std::clamp(cfg.mean_init, 0.0, 1.0));
  stddev_.assign(dim, cfg.stddev_init);
}

std::vector<double> RlAgent::propose(Rng& rng) {
  std::vector<double> z(dim_);
  for (int j = 0; j < dim_; ++j)
    z[j] = std::clamp(mean_[j] + stddev_[j] * rng.normal(), 0.0, 1.0);
  return z;
}

void RlAgent::observe(std::span<const double> z, double q) {
  if (static_cast<int>(z.size()) != dim_)
    throw std::invalid_argument("observation dimension mismatch");
  reward_sum_ += q;
  ++reward_count_;
  const double baseline = reward_sum_ / static_cast<double>(reward_count_);
  const double advantage = q - baseline;
  for (int j = 0; j < dim_; ++j) {
    const double score = (z[j] - mean_[j]) / (stddev_[j] * stddev_[j]);
    mean_[j] = std::clamp(mean_[j] + cfg_.learning_rate * advantage * score,
                          0.0, 1.0);
    stddev_[j] = std::max(cfg_.stddev_floor, stddev_[j] * cfg_.stddev_anneal);
  }
}

namespace {

SearchOptions baseline_options(const SearchConfig& cfg) {
  SearchOptions options;
  options.outer_steps = cfg.outer_steps;
  options.segments = cfg.segments;
  options.num_features = cfg.num_features;
  options.transform = cfg.transform;
  options.insert_reference = false;
  options.seed = cfg.seed;
  return options;
}

}  // namespace

SearchRunResult random_search(const SearchConfig& cfg, const Dataset& train_set,
                              const Dataset& val_set, const ModelWeights& w_share,
                              const FeatureTable& table,
                              const std::function<void(const StepRecord&)>& on_step) {
  TrainHyper finetune = cfg.finetune;
  finetune.epochs = cfg.finetune_epochs;
  TrainingEvaluator evaluator(train_set, val_set, w_share, table, finetune);
  RandomAgent agent(encoded_dim(cfg.segments, cfg.num_features));
  auto options = baseline_options(cfg);
  options.on_step = on_step;
  return run_search(agent, evaluator, options);
}

SearchRunResult rl_search(const SearchConfig& cfg, const RlConfig& rl,
                          const Dataset& train_set, const Dataset& val_set,
                          const ModelWeights& w_share, const FeatureTable& table,
                          const std::function<void(const StepRecord&)>& on_step) {
  TrainHyper finetune = cfg.finetune;
  finetune.epochs = cfg.finetune_epochs;
  TrainingEvaluator evaluator(train_set, val_set, w_share, table, finetune);
  RlAgent agent(encoded_dim(cfg.segments, cfg.num_features), rl);
  auto options = baseline_options(cfg);
  options.on_step = on_step;
  return run_search(agent, evaluator, options);
}

}  // namespace ssearch
