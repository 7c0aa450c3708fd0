// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "search.hpp"

namespace ssearch {

// Average ranks (1-based, ascending; ties share their average rank).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rank correlation: Pearson correlation of the average-tied
// ranks. Throws std::invalid_argument when either input is constant.
double spearman(std::span<const double> a, std::span<const double> b);

// SR plus TR: the ground-truth competition rank (1 + number of strictly
// better entries) of the entry the approximation ranks first.
std::pair<double, int> rank_metrics(std::span<const double> approx,
                                    std::span<const double> truth);

struct RankReport {
  std::vector<int> steps;            // candidate ids (search step numbers)
  std::vector<double> approx_q;      // fine-tune scores from the search run
  std::vector<double> truth_acc;     // from-scratch retrain accuracies
  std::vector<double> approx_rank;   // 1 = best
  std::vector<double> truth_rank;    // 1 = best
  double sr = 0.0;
  int tr = 0;  // ground-truth competition rank of the approximation's top-1
};

// Retrains the last `last_m` non-degenerate candidates of a search run from
// scratch and correlates the fine-tune ranking with the from-scratch
// ranking. Each candidate's ground truth is averaged over `truth_repeats`
// retrain seeds; the seeds are shared across candidates so ranks reflect
// samplers, not initialization noise.
RankReport sr_tr_study(const SearchRunResult& run, int last_m,
                       const Dataset& train_set, const Dataset& val_set,
                       const FeatureTable& table, const SearchConfig& cfg,
                       int truth_repeats = 1);

// Mean normalized sampling probability over clean and over flipped
// instances; returns {clean_mean, flipped_mean}.
std::pair<double, double> clean_flipped_mean_prob(
    std::span<const double> probs, std::span<const std::uint8_t> flags);

// Running maximum of the per-step scores of a run.
std::vector<double> best_so_far(const SearchRunResult& run);

}  // namespace ssearch
