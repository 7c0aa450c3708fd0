// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "alias.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace ssearch {

std::string to_string(Arch arch) {
  return arch == Arch::softmax_regression ? "softmax_regression" : "mlp1";
}

Arch arch_from_string(const std::string& s) {
  if (s == "softmax_regression") return Arch::softmax_regression;
  if (s == "mlp1") return Arch::mlp1;
  throw std::invalid_argument("unknown architecture: " + s);
}

void ModelWeights::zero_momentum() {
  m_w1.assign(w1.size(), 0.0);
  m_b1.assign(b1.size(), 0.0);
  m_w2.assign(w2.size(), 0.0);
  m_b2.assign(b2.size(), 0.0);
}

std::size_t ModelWeights::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

std::vector<double> ModelWeights::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto* v : {&w1, &b1, &w2, &b2})
    flat.insert(flat.end(), v->begin(), v->end());
  return flat;
}

void ModelWeights::set_flat_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count())
    throw std::invalid_argument("flat parameter size mismatch");
  std::size_t pos = 0;
  for (auto* v : {&w1, &b1, &w2, &b2}) {
    std::copy(flat.begin() + pos, flat.begin() + pos + v->size(), v->begin());
    pos += v->size();
  }
}

ModelWeights init_weights(Arch arch, int dim, int num_classes, int hidden,
                          std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (arch == Arch::mlp1 && hidden < 1)
    throw std::invalid_argument("mlp1 needs hidden >= 1");

  ModelWeights w;
  w.arch = arch;
  w.dim = dim;
  w.num_classes = num_classes;
  w.hidden = arch == Arch::mlp1 ? hidden : 0;

  Rng rng(mix_seed(seed, 0x696e6974));  // "init" stream
  auto fill_uniform = [&rng](std::vector<double>& v, std::size_t n, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    v.resize(n);
    for (double& e : v) e = rng.uniform(-bound, bound);
  };

  if (arch == Arch::softmax_regression) {
    fill_uniform(w.w1, static_cast<std::size_t>(num_classes) * dim, dim);
    fill_uniform(w.b1, static_cast<std::size_t>(num_classes), dim);
  } else {
    fill_uniform(w.w1, static_cast<std::size_t>(hidden) * dim, dim);
    fill_uniform(w.b1, static_cast<std::size_t>(hidden), dim);
    fill_uniform(w.w2, static_cast<std::size_t>(num_classes) * hidden, hidden);
    fill_uniform(w.b2, static_cast<std::size_t>(num_classes), hidden);
  }
  w.zero_momentum();
  return w;
}

namespace {

// Scratch space reused across per-example computations.
struct Workspace {
  std::vector<double> hidden;   // tanh activations (mlp1)
  std::vector<double> logits;   // K
  std::vector<double> prob;     // K
  std::vector<double> dlogits;  // K
  std::vector<double> dhidden;  // h
  // gradient accumulators, same shapes as the parameters
  std::vector<double> gw1, gb1, gw2, gb2;

  explicit Workspace(const ModelWeights& w)
      : hidden(w.hidden, 0.0),
        logits(w.num_classes, 0.0),
        prob(w.num_classes, 0.0),
        dlogits(w.num_classes, 0.0),
        dhidden(w.hidden, 0.0),
        gw1(w.w1.size(), 0.0),
        gb1(w.b1.size(), 0.0),
        gw2(w.w2.size(), 0.0),
        gb2(w.b2.size(), 0.0) {}

  void zero_grad() {
    std::fill(gw1.begin(), gw1.end(), 0.0);
    std::fill(gb1.begin(), gb1.end(), 0.0);
    std::fill(gw2.begin(), gw2.end(), 0.0);
    std::fill(gb2.begin(), gb2.end(), 0.0);
  }
};

void check_input(const ModelWeights& w, std::span<const double> x) {
  if (static_cast<int>(x.size()) != w.dim)
    throw std::invalid_argument("input dimension mismatch");
}

// Fills ws.logits and ws.prob (and ws.hidden for mlp1).
void forward_into(const ModelWeights& w, std::span<const double> x,
                  Workspace& ws) {
  const int k = w.num_classes;
  if (w.arch == Arch::softmax_regression) {
    for (int c = 0; c < k; ++c) {
      const double* row = w.w1.data() + static_cast<std::size_t>(c) * w.dim;
      double z = w.b1[c];
      for (int j = 0; j < w.dim; ++j) z += row[j] * x[j];
      ws.logits[c] = z;
    }
  } else {
    for (int h = 0; h < w.hidden; ++h) {
      const double* row = w.w1.data() + static_cast<std::size_t>(h) * w.dim;
      double z = w.b1[h];
      for (int j = 0; j < w.dim; ++j) z += row[j] * x[j];
      ws.hidden[h] = std::tanh(z);
    }
    for (int c = 0; c < k; ++c) {
      const double* row = w.w2.data() + static_cast<std::size_t>(c) * w.hidden;
      double z = w.b2[c];
      for (int h = 0; h < w.hidden; ++h) z += row[h] * ws.hidden[h];
      ws.logits[c] = z;
    }
  }
  const double zmax = *std::max_element(ws.logits.begin(), ws.logits.end());
  double sum = 0.0;
  for (int c = 0; c < k; ++c) {
    ws.prob[c] = std::exp(ws.logits[c] - zmax);
    sum += ws.prob[c];
  }
  for (int c = 0; c < k; ++c) ws.prob[c] /= sum;
}

double loss_from_logits(const Workspace& ws, int y) {
  const double zmax = *std::max_element(ws.logits.begin(), ws.logits.end());
  double sum = 0.0;
  for (double z : ws.logits) sum += std::exp(z - zmax);
  return zmax + std::log(sum) - ws.logits[y];
}

// Adds scale * dL/dtheta at (x, y) into the workspace accumulators.
// Assumes forward_into was just called for the same x.
void accumulate_gradient(const ModelWeights& w, std::span<const double> x,
                         int y, double scale, Workspace& ws) {
  const int k = w.num_classes;
  for (int c = 0; c < k; ++c)
    ws.dlogits[c] = ws.prob[c] - (c == y ? 1.0 : 0.0);

  if (w.arch == Arch::softmax_regression) {
    for (int c = 0; c < k; ++c) {
      const double g = scale * ws.dlogits[c];
      double* grow = ws.gw1.data() + static_cast<std::size_t>(c) * w.dim;
      for (int j = 0; j < w.dim; ++j) grow[j] += g * x[j];
      ws.gb1[c] += g;
    }
  } else {
    for (int c = 0; c < k; ++c) {
      const double g = scale * ws.dlogits[c];
      double* grow = ws.gw2.data() + static_cast<std::size_t>(c) * w.hidden;
      for (int h = 0; h < w.hidden; ++h) grow[h] += g * ws.hidden[h];
      ws.gb2[c] += g;
    }
    for (int h = 0; h < w.hidden; ++h) {
      double da = 0.0;
      for (int c = 0; c < k; ++c)
        da += ws.dlogits[c] * w.w2[static_cast<std::size_t>(c) * w.hidden + h];
      ws.dhidden[h] = da * (1.0 - ws.hidden[h] * ws.hidden[h]);
    }
    for (int h = 0; h < w.hidden; ++h) {
      const double g = scale * ws.dhidden[h];
      double* grow = ws.gw1.data() + static_cast<std::size_t>(h) * w.dim;
      for (int j = 0; j < w.dim; ++j) grow[j] += g * x[j];
      ws.gb1[h] += g;
    }
  }
}

}  // namespace

void forward(const ModelWeights& w, std::span<const double> x,
             std::span<double> prob_out) {
  check_input(w, x);
  if (static_cast<int>(prob_out.size()) != w.num_classes)
    throw std::invalid_argument("prob_out size mismatch");
  Workspace ws(w);
  forward_into(w, x, ws);
  std::copy(ws.prob.begin(), ws.prob.end(), prob_out.begin());
}

double per_example_loss(const ModelWeights& w, std::span<const double> x, int y) {
  check_input(w, x);
  if (y < 0 || y >= w.num_classes) throw std::invalid_argument("label out of range");
  Workspace ws(w);
  forward_into(w, x, ws);
  return loss_from_logits(ws, y);
}

double per_example_grad_norm(const ModelWeights& w, std::span<const double> x,
                             int y) {
  check_input(w, x);
  if (y < 0 || y >= w.num_classes) throw std::invalid_argument("label out of range");
  Workspace ws(w);
  forward_into(w, x, ws);
  accumulate_gradient(w, x, y, 1.0, ws);
  double sq = 0.0;
  for (const auto* g : {&ws.gw1, &ws.gb1, &ws.gw2, &ws.gb2})
    for (double v : *g) sq += v * v;
  return std::sqrt(sq);
}

ModelWeights train(const ModelWeights& w0, const Dataset& train_set,
                   std::span<const double> probs, const TrainHyper& hyper,
                   const std::function<void(int, const ModelWeights&)>& on_epoch) {
  train_set.validate();
  const std::size_t n = train_set.size();
  if (n == 0) throw std::invalid_argument("empty training set");
  if (w0.dim != train_set.dim || w0.num_classes != train_set.num_classes)
    throw std::invalid_argument("weights/dataset shape mismatch");
  if (hyper.batch_size < 1 || static_cast<std::size_t>(hyper.batch_size) > n)
    throw std::invalid_argument("batch_size must be in [1, n]");
  if (hyper.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(hyper.momentum >= 0.0 && hyper.momentum < 1.0))
    throw std::invalid_argument("momentum must be in [0,1)");
  if (hyper.weight_decay < 0.0 || hyper.lr < 0.0)
    throw std::invalid_argument("lr and weight_decay must be >= 0");

  std::vector<double> uniform;
  if (probs.empty()) {
    uniform.assign(n, 1.0 / static_cast<double>(n));
    probs = uniform;
  } else {
    if (probs.size() != n) throw std::invalid_argument("probs length mismatch");
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0) throw std::invalid_argument("probs must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("probs must sum to 1");
  }
  const AliasTable alias = build_alias(probs);

  ModelWeights w = w0;
  w.zero_momentum();
  Workspace ws(w);
  Rng rng(mix_seed(hyper.seed, 0x74726169));  // "trai" stream

  const std::size_t batch = static_cast<std::size_t>(hyper.batch_size);
  const std::size_t steps_per_epoch = (n + batch - 1) / batch;
  const double inv_batch = 1.0 / static_cast<double>(batch);
  double lr = hyper.lr;

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    if (std::find(hyper.lr_decay_epochs.begin(), hyper.lr_decay_epochs.end(),
                  epoch) != hyper.lr_decay_epochs.end())
      lr *= hyper.lr_decay_factor;

    for (std::size_t step = 0; step < steps_per_epoch; ++step) {
      ws.zero_grad();
      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t idx = alias.sample(rng);
        forward_into(w, train_set.instance(idx), ws);
        accumulate_gradient(w, train_set.instance(idx), train_set.labels[idx],
                            inv_batch, ws);
      }
      // Nesterov update with L2 decay folded into the gradient.
      auto update = [&](std::vector<double>& param, std::vector<double>& buf,
                        const std::vector<double>& grad) {
        for (std::size_t i = 0; i < param.size(); ++i) {
          const double g = grad[i] + hyper.weight_decay * param[i];
          buf[i] = hyper.momentum * buf[i] + g;
          param[i] -= lr * (g + hyper.momentum * buf[i]);
        }
      };
      update(w.w1, w.m_w1, ws.gw1);
      update(w.b1, w.m_b1, ws.gb1);
      if (w.arch == Arch::mlp1) {
        update(w.w2, w.m_w2, ws.gw2);
        update(w.b2, w.m_b2, ws.gb2);
      }
    }
    if (on_epoch) on_epoch(epoch, w);
  }
  return w;
}

double evaluate(const ModelWeights& w, const Dataset& ds) {
  if (ds.size() == 0) throw std::invalid_argument("cannot evaluate on empty dataset");
  if (w.dim != ds.dim || w.num_classes != ds.num_classes)
    throw std::invalid_argument("weights/dataset shape mismatch");
  Workspace ws(w);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    forward_into(w, ds.instance(i), ws);
    int best = 0;
    for (int c = 1; c < w.num_classes; ++c)
      if (ws.prob[c] > ws.prob[best]) best = c;  // ties keep the lowest index
    if (best == ds.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double mean_loss(const ModelWeights& w, const Dataset& ds) {
  if (ds.size() == 0) throw std::invalid_argument("empty dataset");
  Workspace ws(w);
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    forward_into(w, ds.instance(i), ws);
    total += loss_from_logits(ws, ds.labels[i]);
  }
  return total / static_cast<double>(ds.size());
}

void save_checkpoint(const ModelWeights& w, const std::string& path) {
  nlohmann::json j;
  j["arch"] = to_string(w.arch);
  j["dim"] = w.dim;
  j["num_classes"] = w.num_classes;
  j["hidden"] = w.hidden;
  j["w1"] = w.w1;
  j["b1"] = w.b1;
  j["w2"] = w.w2;
  j["b2"] = w.b2;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

ModelWeights load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  ModelWeights w;
  w.arch = arch_from_string(j.at("arch").get<std::string>());
  w.dim = j.at("dim").get<int>();
  w.num_classes = j.at("num_classes").get<int>();
  w.hidden = j.at("hidden").get<int>();
  w.w1 = j.at("w1").get<std::vector<double>>();
  w.b1 = j.at("b1").get<std::vector<double>>();
  w.w2 = j.at("w2").get<std::vector<double>>();
  w.b2 = j.at("b2").get<std::vector<double>>();
  const std::size_t d = static_cast<std::size_t>(w.dim);
  const std::size_t k = static_cast<std::size_t>(w.num_classes);
  const std::size_t h = static_cast<std::size_t>(w.hidden);
  const bool shapes_ok =
      w.arch == Arch::softmax_regression
          ? (w.w1.size() == k * d && w.b1.size() == k && w.w2.empty() && w.b2.empty())
          : (w.w1.size() == h * d && w.b1.size() == h && w.w2.size() == k * h &&
             w.b2.size() == k);
  if (!shapes_ok) throw IoError("checkpoint shape mismatch: " + path);
  w.zero_momentum();
  return w;
}

}  // namespace ssearch
