// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "search.hpp"

#include <chrono>
#include <stdexcept>

#include "errors.hpp"

namespace ssearch {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<double> sampler_probabilities(const SamplerParams& params,
                                          const FeatureTable& table) {
  const auto g = g_values(params, table);
  const auto transform =
      build_transform(params.transform_mode, g, table.grad_norm);
  const auto tau = eval_tau(params, transform, table);
  return normalize(tau);
}

TrainingEvaluator::TrainingEvaluator(const Dataset& train_set,
                                     const Dataset& val_set,
                                     const ModelWeights& w_share,
                                     const FeatureTable& table,
                                     const TrainHyper& finetune_hyper)
    : train_(train_set),
      val_(val_set),
      w_share_(w_share),
      table_(table),
      hyper_(finetune_hyper) {
  if (table_.size() != train_.size())
    throw std::invalid_argument("feature table does not match training set");
}

std::vector<double> TrainingEvaluator::probabilities(
    const SamplerParams& params) const {
  return sampler_probabilities(params, table_);
}

EvalOutcome TrainingEvaluator::evaluate(const SamplerParams& params,
                                        std::span<const double>,
                                        std::uint64_t step_seed) {
  std::vector<double> probs;
  try {
    probs = probabilities(params);
  } catch (const DegenerateSamplerError&) {
    return {0.0, true};
  }
  TrainHyper hyper = hyper_;
  hyper.seed = step_seed;
  const ModelWeights tuned = train(w_share_, train_, probs, hyper);
  return {ssearch::evaluate(tuned, val_), false};
}

SearchRunResult run_search(Agent& agent, InnerEvaluator& evaluator,
                           const SearchOptions& options) {
  if (options.outer_steps < 1)
    throw std::invalid_argument("outer_steps must be >= 1");
  const auto run_start = std::chrono::steady_clock::now();

  SearchRunResult result;
  result.agent = std::string(agent.name());
  result.transform = options.transform;
  result.seed = options.seed;
  result.steps.reserve(options.outer_steps);

  Rng rng(mix_seed(options.seed, 0x70726f70));  // proposal stream

  for (int step = 1; step <= options.outer_steps; ++step) {
    const auto step_start = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.step = step;
    if (step == 1 && options.insert_reference) {
      rec.reference = true;
      rec.params = SamplerParams::uniform_reference(
          options.segments, options.num_features, options.transform);
      rec.z = encode(rec.params);
    } else {
      rec.z = agent.propose(rng);
      rec.params = decode(rec.z, options.segments, options.num_features,
                          options.transform);
    }
    const EvalOutcome outcome =
        evaluator.evaluate(rec.params, rec.z, mix_seed(options.seed, step));
    rec.q = outcome.q;
    rec.degenerate = outcome.degenerate;
    agent.observe(rec.z, rec.q);
    rec.wall_time_s = seconds_since(step_start);
    if (options.on_step) options.on_step(rec);
    result.steps.push_back(std::move(rec));
  }

  result.best_step = 0;
  result.best_q = -1.0;
  for (const auto& rec : result.steps) {
    if (rec.degenerate) continue;
    if (rec.q > result.best_q) {
      result.best_q = rec.q;
      result.best_step = rec.step;
      result.best_params = rec.params;
    }
  }
  if (result.best_step == 0)
    throw std::runtime_error("every candidate was degenerate");
  result.wall_time_s = seconds_since(run_start);
  return result;
}

PretrainResult pretrain_shared(const Dataset& train_set, const Dataset& val_set,
                               const SearchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainHyper hyper = cfg.pretrain;
  hyper.seed = mix_seed(cfg.seed, 0x70726574);  // pretrain stream
  const ModelWeights w0 = init_weights(cfg.arch, train_set.dim,
                                       train_set.num_classes, cfg.hidden,
                                       hyper.seed);
  PretrainResult out;
  out.weights = train(w0, train_set, {}, hyper);
  out.val_acc = evaluate(out.weights, val_set);
  out.wall_time_s = seconds_since(t0);
  return out;
}

SearchRunResult run_ss(const SearchConfig& cfg, const Dataset& train_set,
                       const Dataset& val_set, const ModelWeights& w_share,
                       const FeatureTable& table,
                       const std::function<void(const StepRecord&)>& on_step) {
  TrainHyper finetune = cfg.finetune;
  finetune.epochs = cfg.finetune_epochs;

  TrainingEvaluator evaluator(train_set, val_set, w_share, table, finetune);
  BoAgent agent(encoded_dim(cfg.segments, cfg.num_features), cfg.gp);

  SearchOptions options;
  options.outer_steps = cfg.outer_steps;
  options.segments = cfg.segments;
  options.num_features = cfg.num_features;
  options.transform = cfg.transform;
  options.insert_reference = true;
  options.seed = cfg.seed;
  options.on_step = on_step;
  return run_search(agent, evaluator, options);
}

RetrainResult retrain_final(const Dataset& train_set, const Dataset& val_set,
                            const Dataset* test_set, const SamplerParams& best,
                            const FeatureTable& table, const SearchConfig& cfg,
                            std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto probs = sampler_probabilities(best, table);  // throws if degenerate

  TrainHyper hyper = cfg.retrain;
  hyper.seed = mix_seed(seed, 0x72657472);  // retrain stream
  const ModelWeights w0 = init_weights(cfg.arch, train_set.dim,
                                       train_set.num_classes, cfg.hidden,
                                       hyper.seed);
  RetrainResult out;
  out.weights = train(w0, train_set, probs, hyper);
  out.val_acc = evaluate(out.weights, val_set);
  out.test_acc = test_set ? evaluate(out.weights, *test_set) : 0.0;
  out.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace ssearch
