// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bayesopt.hpp"
#include "dataset.hpp"
#include "features.hpp"
#include "model.hpp"
#include "sampler.hpp"

namespace ssearch {

// One outer-loop evaluation: decode a point, build its probabilities and
// score them. Implementations: fine-tuning a shared checkpoint (the real
// inner loop) and synthetic objectives (agent testing without training).
struct EvalOutcome {
  double q = 0.0;
  bool degenerate = false;
};

class InnerEvaluator {
 public:
  virtual ~InnerEvaluator() = default;
  // step_seed makes each evaluation reproducible in isolation.
  virtual EvalOutcome evaluate(const SamplerParams& params,
                               std::span<const double> z,
                               std::uint64_t step_seed) = 0;
};

// Scores a sampler by fine-tuning a copy of w_share for a few epochs with
// tau-weighted minibatches and measuring validation accuracy. Degenerate
// samplers score 0 without training. w_share itself is never mutated.
class TrainingEvaluator : public InnerEvaluator {
 public:
  TrainingEvaluator(const Dataset& train_set, const Dataset& val_set,
                    const ModelWeights& w_share, const FeatureTable& table,
                    const TrainHyper& finetune_hyper);

  EvalOutcome evaluate(const SamplerParams& params, std::span<const double> z,
                       std::uint64_t step_seed) override;

  // Probabilities a sampler assigns on the training table (normalized);
  // throws DegenerateSamplerError for degenerate samplers.
  std::vector<double> probabilities(const SamplerParams& params) const;

 private:
  const Dataset& train_;
  const Dataset& val_;
  const ModelWeights& w_share_;
  const FeatureTable& table_;
  TrainHyper hyper_;
};

// Synthetic objective: any function of (params, z). Used to exercise the
// outer-loop agents without any model training.
class SyntheticEvaluator : public InnerEvaluator {
 public:
  using Fn = std::function<double(const SamplerParams&, std::span<const double>)>;
  explicit SyntheticEvaluator(Fn fn) : fn_(std::move(fn)) {}
  EvalOutcome evaluate(const SamplerParams& params, std::span<const double> z,
                       std::uint64_t) override {
    return {fn_(params, z), false};
  }

 private:
  Fn fn_;
};

// An outer-loop proposal strategy. All agents receive exactly one observe()
// per evaluation, so every strategy consumes an identical budget.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::vector<double> propose(Rng& rng) = 0;
  virtual void observe(std::span<const double> z, double q) = 0;
  virtual std::string_view name() const = 0;
};

// GP + UCB agent (the default outer loop).
class BoAgent : public Agent {
 public:
  BoAgent(int dim, const GpConfig& cfg) : state_(dim, cfg) {}
  std::vector<double> propose(Rng& rng) override { return state_.propose_next(rng); }
  void observe(std::span<const double> z, double q) override { state_.update(z, q); }
  std::string_view name() const override { return "ss"; }
  const BoState& state() const { return state_; }

 private:
  BoState state_;
};

struct StepRecord {
  int step = 0;  // 1-based
  std::vector<double> z;
  SamplerParams params;
  double q = 0.0;
  bool degenerate = false;
  bool reference = false;  // forced uniform-equivalent anchor
  double wall_time_s = 0.0;
};

struct SearchOptions {
  int outer_steps = 40;  // evaluation budget
  int segments = 4;
  int num_features = 2;
  TransformMode transform = TransformMode::cgf;
  // When set, step 1 evaluates the uniform-equivalent reference candidate
  // instead of the agent's proposal (the agent still observes it).
  bool insert_reference = false;
  std::uint64_t seed = 0;
  // Invoked after every completed evaluation; lets callers flush the
  // observation log incrementally so an aborted run keeps its history.
  std::function<void(const StepRecord&)> on_step;
};

struct SearchRunResult {
  std::string agent;
  TransformMode transform = TransformMode::cgf;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  int best_step = 0;  // step with max non-degenerate q (lowest step on ties)
  double best_q = 0.0;
  SamplerParams best_params;
  double wall_time_s = 0.0;
};

// The outer loop: propose -> evaluate -> observe, `outer_steps` times.
SearchRunResult run_search(Agent& agent, InnerEvaluator& evaluator,
                           const SearchOptions& options);

// Full search configuration (outer loop plus trainer settings).
struct SearchConfig {
  int outer_steps = 40;
  int finetune_epochs = 5;
  int segments = 4;
  int num_features = 2;
  TransformMode transform = TransformMode::cgf;
  Arch arch = Arch::softmax_regression;
  int hidden = 0;
  TrainHyper pretrain;
  TrainHyper finetune;  // epochs overridden by finetune_epochs
  TrainHyper retrain;
  GpConfig gp;
  int top_k = 3;
  std::uint64_t seed = 0;
};

struct PretrainResult {
  ModelWeights weights;
  double val_acc = 0.0;
  double wall_time_s = 0.0;
};

// Uniform-sampling training from scratch; the shared checkpoint and the
// baseline accuracy all comparisons are made against.
PretrainResult pretrain_shared(const Dataset& train_set, const Dataset& val_set,
                               const SearchConfig& cfg);

// The GP-driven sampler search from a shared checkpoint and its features.
SearchRunResult run_ss(const SearchConfig& cfg, const Dataset& train_set,
                       const Dataset& val_set, const ModelWeights& w_share,
                       const FeatureTable& table,
                       const std::function<void(const StepRecord&)>& on_step = {});

struct RetrainResult {
  ModelWeights weights;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double wall_time_s = 0.0;
};

// From-scratch retraining with a fixed sampler. test_set may be empty-sized
// only if null; pass nullptr to skip the test evaluation.
RetrainResult retrain_final(const Dataset& train_set, const Dataset& val_set,
                            const Dataset* test_set, const SamplerParams& best,
                            const FeatureTable& table, const SearchConfig& cfg,
                            std::uint64_t seed);

// Normalized tau probabilities of `params` on `table` (shared helper).
std::vector<double> sampler_probabilities(const SamplerParams& params,
                                          const FeatureTable& table);

}  // namespace ssearch
