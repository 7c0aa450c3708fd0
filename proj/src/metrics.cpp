// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ssearch {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  if (a.size() < 2) throw std::invalid_argument("need at least two points");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0)
    throw std::invalid_argument("spearman undefined for constant input");
  return cov / std::sqrt(var_a * var_b);
}

std::pair<double, int> rank_metrics(std::span<const double> approx,
                                    std::span<const double> truth) {
  if (approx.size() != truth.size() || approx.size() < 2)
    throw std::invalid_argument("rank_metrics needs two equal-length vectors");
  const double sr = spearman(approx, truth);
  // Approximation's top-1: highest score, earliest index on ties.
  std::size_t top = 0;
  for (std::size_t i = 1; i < approx.size(); ++i)
    if (approx[i] > approx[top]) top = i;
  int better = 0;
  for (double t : truth)
    if (t > truth[top]) ++better;
  return {sr, 1 + better};
}

RankReport sr_tr_study(const SearchRunResult& run, int last_m,
                       const Dataset& train_set, const Dataset& val_set,
                       const FeatureTable& table, const SearchConfig& cfg,
                       int truth_repeats) {
  if (last_m < 2) throw std::invalid_argument("last_m must be >= 2");
  if (truth_repeats < 1) throw std::invalid_argument("truth_repeats must be >= 1");
  std::vector<const StepRecord*> candidates;
  for (const auto& rec : run.steps)
    if (!rec.degenerate) candidates.push_back(&rec);
  if (candidates.size() < static_cast<std::size_t>(last_m))
    throw std::invalid_argument("run has fewer than last_m non-degenerate candidates");
  candidates.erase(candidates.begin(),
                   candidates.end() - static_cast<std::ptrdiff_t>(last_m));

  RankReport report;
  for (const auto* rec : candidates) {
    report.steps.push_back(rec->step);
    report.approx_q.push_back(rec->q);
    double acc_sum = 0.0;
    for (int r = 0; r < truth_repeats; ++r) {
      const std::uint64_t gt_seed = mix_seed(run.seed, 0x67747275 + r);
      acc_sum += retrain_final(train_set, val_set, nullptr, rec->params, table,
                               cfg, gt_seed)
                     .val_acc;
    }
    report.truth_acc.push_back(acc_sum / truth_repeats);
  }

  // rank 1 = best value
  const auto asc_a = average_ranks(report.approx_q);
  const auto asc_t = average_ranks(report.truth_acc);
  const double m = static_cast<double>(last_m);
  for (std::size_t i = 0; i < asc_a.size(); ++i) {
    report.approx_rank.push_back(m + 1.0 - asc_a[i]);
    report.truth_rank.push_back(m + 1.0 - asc_t[i]);
  }
  const auto [sr, tr] = rank_metrics(report.approx_q, report.truth_acc);
  report.sr = sr;
  report.tr = tr;
  return report;
}

std::pair<double, double> clean_flipped_mean_prob(
    std::span<const double> probs, std::span<const std::uint8_t> flags) {
  if (probs.size() != flags.size()) throw std::invalid_argument("length mismatch");
  double clean_sum = 0.0, flipped_sum = 0.0;
  std::size_t clean_n = 0, flipped_n = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (flags[i]) {
      flipped_sum += probs[i];
      ++flipped_n;
    } else {
      clean_sum += probs[i];
      ++clean_n;
    }
  }
  if (clean_n == 0 || flipped_n == 0)
    throw std::invalid_argument("need both clean and flipped instances");
  return {clean_sum / static_cast<double>(clean_n),
          flipped_sum / static_cast<double>(flipped_n)};
}

std::vector<double> best_so_far(const SearchRunResult& run) {
  std::vector<double> curve;
  curve.reserve(run.steps.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& rec : run.steps) {
    best = std::max(best, rec.q);
    curve.push_back(best);
  }
  return curve;
}

}  // namespace ssearch
