// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "runconfig.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "errors.hpp"

namespace ssearch {

namespace {

// Rejects keys that are not in the allowed set.
void check_keys(const nlohmann::json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw std::invalid_argument("config section '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw std::invalid_argument("unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_train_hyper(const nlohmann::json& obj, const std::string& where,
                      TrainHyper& h) {
  check_keys(obj, where,
             {"batch_size", "lr", "momentum", "weight_decay", "epochs",
              "lr_decay_epochs", "lr_decay_factor"});
  read(obj, "batch_size", h.batch_size);
  read(obj, "lr", h.lr);
  read(obj, "momentum", h.momentum);
  read(obj, "weight_decay", h.weight_decay);
  read(obj, "epochs", h.epochs);
  read(obj, "lr_decay_epochs", h.lr_decay_epochs);
  read(obj, "lr_decay_factor", h.lr_decay_factor);
}

double final_lr(const TrainHyper& h) {
  return h.lr * std::pow(h.lr_decay_factor,
                         static_cast<double>(h.lr_decay_epochs.size()));
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
  check_keys(doc, "config",
             {"seed", "out_dir", "data", "model", "pretrain", "finetune",
              "retrain", "search", "gp", "rl", "paths"});
  RunConfig cfg;
  cfg.original = doc;
  read(doc, "seed", cfg.seed);
  read(doc, "out_dir", cfg.out_dir);

  if (doc.contains("data")) {
    const auto& d = doc.at("data");
    check_keys(d, "data",
               {"num_classes", "dim", "per_class", "separation", "spread",
                "noise_rate", "split"});
    read(d, "num_classes", cfg.data.num_classes);
    read(d, "dim", cfg.data.dim);
    read(d, "per_class", cfg.data.per_class);
    read(d, "separation", cfg.data.separation);
    read(d, "spread", cfg.data.spread);
    read(d, "noise_rate", cfg.data.noise_rate);
    if (d.contains("split")) {
      const auto& s = d.at("split");
      if (!s.is_array() || s.size() != 3)
        throw std::invalid_argument("data.split must be [train, val, test]");
      cfg.data.split.train = s[0].get<double>();
      cfg.data.split.val = s[1].get<double>();
      cfg.data.split.test = s[2].get<double>();
    }
  }

  if (doc.contains("model")) {
    const auto& m = doc.at("model");
    check_keys(m, "model", {"arch", "hidden"});
    std::string arch = to_string(cfg.arch);
    read(m, "arch", arch);
    cfg.arch = arch_from_string(arch);
    read(m, "hidden", cfg.hidden);
  }

  // Pretrain defaults, then overrides; retrain mirrors pretrain unless set.
  cfg.pretrain.batch_size = 32;
  cfg.pretrain.lr = 0.1;
  cfg.pretrain.momentum = 0.9;
  cfg.pretrain.weight_decay = 1e-3;
  cfg.pretrain.epochs = 30;
  cfg.pretrain.lr_decay_epochs = {15, 25};
  cfg.pretrain.lr_decay_factor = 0.1;
  if (doc.contains("pretrain"))
    read_train_hyper(doc.at("pretrain"), "pretrain", cfg.pretrain);

  cfg.retrain = cfg.pretrain;
  if (doc.contains("retrain"))
    read_train_hyper(doc.at("retrain"), "retrain", cfg.retrain);

  // Fine-tune: constant lr defaulting to the pretrain schedule's final lr.
  cfg.finetune = cfg.pretrain;
  cfg.finetune.lr = final_lr(cfg.pretrain);
  cfg.finetune.lr_decay_epochs.clear();
  cfg.finetune.epochs = 5;
  if (doc.contains("finetune"))
    read_train_hyper(doc.at("finetune"), "finetune", cfg.finetune);

  if (doc.contains("search")) {
    const auto& s = doc.at("search");
    check_keys(s, "search",
               {"outer_steps", "finetune_epochs", "segments", "num_features",
                "transform", "top_k", "sr_tr_last"});
    read(s, "outer_steps", cfg.search.outer_steps);
    read(s, "finetune_epochs", cfg.search.finetune_epochs);
    read(s, "segments", cfg.search.segments);
    read(s, "num_features", cfg.search.num_features);
    if (s.contains("transform"))
      cfg.search.transform =
          transform_mode_from_string(s.at("transform").get<std::string>());
    read(s, "top_k", cfg.search.top_k);
    read(s, "sr_tr_last", cfg.search.sr_tr_last);
  }

  if (doc.contains("gp")) {
    const auto& g = doc.at("gp");
    check_keys(g, "gp",
               {"lengthscale", "signal_variance", "noise_variance", "ucb_kappa",
                "n_init", "acq_candidates", "acq_refine_top"});
    read(g, "lengthscale", cfg.gp.lengthscale);
    read(g, "signal_variance", cfg.gp.signal_variance);
    read(g, "noise_variance", cfg.gp.noise_variance);
    read(g, "ucb_kappa", cfg.gp.ucb_kappa);
    read(g, "n_init", cfg.gp.n_init);
    read(g, "acq_candidates", cfg.gp.acq_candidates);
    read(g, "acq_refine_top", cfg.gp.acq_refine_top);
  }

  if (doc.contains("rl")) {
    const auto& r = doc.at("rl");
    check_keys(r, "rl",
               {"learning_rate", "stddev_init", "stddev_anneal", "stddev_floor",
                "mean_init"});
    read(r, "learning_rate", cfg.rl.learning_rate);
    read(r, "stddev_init", cfg.rl.stddev_init);
    read(r, "stddev_anneal", cfg.rl.stddev_anneal);
    read(r, "stddev_floor", cfg.rl.stddev_floor);
    read(r, "mean_init", cfg.rl.mean_init);
  }

  if (doc.contains("paths")) {
    const auto& p = doc.at("paths");
    check_keys(p, "paths",
               {"train", "val", "test", "checkpoint", "pretrain_result",
                "features"});
    read(p, "train", cfg.paths.train);
    read(p, "val", cfg.paths.val);
    read(p, "test", cfg.paths.test);
    read(p, "checkpoint", cfg.paths.checkpoint);
    read(p, "pretrain_result", cfg.paths.pretrain_result);
    read(p, "features", cfg.paths.features);
  }

  if (cfg.search.top_k > cfg.search.outer_steps)
    throw std::invalid_argument("search.top_k must be <= search.outer_steps");
  if (cfg.search.outer_steps < 1 || cfg.search.finetune_epochs < 1)
    throw std::invalid_argument("search.outer_steps and finetune_epochs must be >= 1");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse_run_config(nlohmann::json::parse(in));
}

namespace {
std::string resolve(const std::string& configured, const std::string& out_dir,
                    const char* fallback) {
  return configured.empty() ? out_dir + "/" + fallback : configured;
}
}  // namespace

std::string RunConfig::train_path() const {
  return resolve(paths.train, out_dir, "train.csv");
}
std::string RunConfig::val_path() const {
  return resolve(paths.val, out_dir, "val.csv");
}
std::string RunConfig::test_path() const {
  return resolve(paths.test, out_dir, "test.csv");
}
std::string RunConfig::checkpoint_path() const {
  return resolve(paths.checkpoint, out_dir, "checkpoint.json");
}
std::string RunConfig::pretrain_result_path() const {
  return resolve(paths.pretrain_result, out_dir, "pretrain.json");
}
std::string RunConfig::features_path() const {
  return resolve(paths.features, out_dir, "features.csv");
}
std::string RunConfig::search_result_path(const std::string& agent,
                                          TransformMode mode) const {
  return out_dir + "/search_" + agent + "_" + to_string(mode) + ".json";
}
std::string RunConfig::obs_log_path(const std::string& agent,
                                    TransformMode mode) const {
  return out_dir + "/obslog_" + agent + "_" + to_string(mode) + ".jsonl";
}
std::string RunConfig::best_sampler_path(const std::string& agent,
                                         TransformMode mode) const {
  return out_dir + "/sampler_" + agent + "_" + to_string(mode) + ".json";
}

SearchConfig RunConfig::to_search_config(TransformMode mode) const {
  SearchConfig sc;
  sc.outer_steps = search.outer_steps;
  sc.finetune_epochs = search.finetune_epochs;
  sc.segments = search.segments;
  sc.num_features = search.num_features;
  sc.transform = mode;
  sc.arch = arch;
  sc.hidden = hidden;
  sc.pretrain = pretrain;
  sc.finetune = finetune;
  sc.retrain = retrain;
  sc.gp = gp;
  sc.top_k = search.top_k;
  sc.seed = seed;
  return sc;
}

}  // namespace ssearch
