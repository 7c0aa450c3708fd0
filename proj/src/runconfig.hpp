// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "baselines.hpp"
#include "dataset.hpp"
#include "search.hpp"

namespace ssearch {

// The single structured configuration document every command consumes.
// Parsing is strict: unknown keys anywhere in the document are rejected, so
// a typo cannot silently fall back to a default.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "runs/out";

  struct Data {
    int num_classes = 10;
    int dim = 16;
    int per_class = 600;
    double separation = 3.0;
    double spread = 1.0;
    double noise_rate = 0.4;  // applied to the train split only
    SplitFractions split;
  } data;

  Arch arch = Arch::mlp1;
  int hidden = 48;

  TrainHyper pretrain;
  TrainHyper finetune;   // lr defaults to the pretrain schedule's final lr
  TrainHyper retrain;    // defaults to the pretrain settings

  struct Search {
    int outer_steps = 40;
    int finetune_epochs = 5;
    int segments = 4;
    int num_features = 2;
    TransformMode transform = TransformMode::cgf;
    int top_k = 3;
    int sr_tr_last = 10;
  } search;

  GpConfig gp;
  RlConfig rl;

  // Artifact locations; empty entries resolve to defaults under out_dir.
  struct Paths {
    std::string train, val, test;    // dataset CSVs
    std::string checkpoint;          // pretrained weights JSON
    std::string pretrain_result;
    std::string features;            // feature table CSV
  } paths;

  nlohmann::json original;  // the exact parsed document, for provenance

  // Resolved artifact paths (defaults under out_dir when not configured).
  std::string train_path() const;
  std::string val_path() const;
  std::string test_path() const;
  std::string checkpoint_path() const;
  std::string pretrain_result_path() const;
  std::string features_path() const;
  std::string search_result_path(const std::string& agent,
                                 TransformMode mode) const;
  std::string obs_log_path(const std::string& agent, TransformMode mode) const;
  std::string best_sampler_path(const std::string& agent,
                                TransformMode mode) const;

  // SearchConfig view used by the search/retrain/sr-tr commands.
  SearchConfig to_search_config(TransformMode mode) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

}  // namespace ssearch
