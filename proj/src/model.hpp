// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace ssearch {

enum class Arch { softmax_regression, mlp1 };

std::string to_string(Arch arch);
Arch arch_from_string(const std::string& s);

// Parameters (and momentum buffers) of the tiny built-in classifiers:
// either plain softmax regression or a one-hidden-layer tanh MLP.
// Softmax regression uses only w1 (num_classes x dim) and b1.
struct ModelWeights {
  Arch arch = Arch::softmax_regression;
  int dim = 0;
  int num_classes = 0;
  int hidden = 0;  // 0 for softmax regression

  std::vector<double> w1, b1;  // softmax: K x d, K | mlp1: h x d, h
  std::vector<double> w2, b2;  // mlp1 only: K x h, K
  std::vector<double> m_w1, m_b1, m_w2, m_b2;  // momentum buffers

  void zero_momentum();
  std::size_t parameter_count() const;
  // Flattens/unflattens all parameters (no momentum) in a fixed order;
  // used by the finite-difference oracle and the checkpoint format.
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> flat);
};

struct TrainHyper {
  int batch_size = 32;
  double lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-3;
  int epochs = 30;
  std::vector<int> lr_decay_epochs;  // 1-based epochs at which lr is scaled
  double lr_decay_factor = 0.1;
  std::uint64_t seed = 0;
};

// Deterministic init: every parameter uniform in +-1/sqrt(fan_in),
// momentum buffers zero.
ModelWeights init_weights(Arch arch, int dim, int num_classes, int hidden,
                          std::uint64_t seed);

// Softmax class probabilities for one instance. prob_out must hold
// num_classes entries; they are positive and sum to 1.
void forward(const ModelWeights& w, std::span<const double> x,
             std::span<double> prob_out);

// Cross-entropy loss -log p_y, computed via log-sum-exp.
double per_example_loss(const ModelWeights& w, std::span<const double> x, int y);

// Euclidean norm of the full parameter gradient of the cross-entropy loss
// at (x, y). For softmax regression this equals
// ||prob - onehot(y)||_2 * sqrt(||x||_2^2 + 1).
double per_example_grad_norm(const ModelWeights& w, std::span<const double> x,
                             int y);

// Minibatch SGD with Nesterov momentum, L2 weight decay and a step-decay
// learning-rate schedule. Minibatches are drawn with replacement from
// `probs` (empty span = uniform). Runs epochs * ceil(n / batch_size) steps
// and is deterministic under hyper.seed. Momentum buffers start from zero.
// `on_epoch(epoch, weights)` is invoked after each epoch when provided.
ModelWeights train(const ModelWeights& w0, const Dataset& train_set,
                   std::span<const double> probs, const TrainHyper& hyper,
                   const std::function<void(int, const ModelWeights&)>& on_epoch = {});

// Top-1 accuracy; argmax ties break toward the lowest class index.
double evaluate(const ModelWeights& w, const Dataset& ds);

// Mean per-example loss over a dataset (used by diagnostics and tests).
double mean_loss(const ModelWeights& w, const Dataset& ds);

// Checkpoint serialization: architecture tag, shapes and flat parameter
// arrays as JSON. Momentum buffers are training state and are not stored.
void save_checkpoint(const ModelWeights& w, const std::string& path);
ModelWeights load_checkpoint(const std::string& path);

}  // namespace ssearch
