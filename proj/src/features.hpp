// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace ssearch {

// Piecewise-linear empirical cdf: interpolates between the distinct sorted
// sample values, each mapped to its average-rank / n. Queries below the
// observed range return 1/n, queries above return 1.
struct CdfTable {
  std::vector<double> xs;  // distinct sorted raw values
  std::vector<double> ys;  // average-rank cdf at each distinct value
  double floor_y = 1.0;    // 1/n

  double operator()(double x) const;
};

// Rank transform of `values`: mapped[i] = average_rank(values[i]) / n,
// tied values sharing the average of their ranks. When `table` is non-null
// it receives the interpolation table for evaluating unseen values.
std::vector<double> empirical_cdf(std::span<const double> values,
                                  CdfTable* table = nullptr);

// Shannon entropy (natural log) of the predicted distribution after the
// true-class probability is removed and the rest renormalized to 1.
// Returns 0 when the remaining mass is 0 within 1e-15.
double renormed_entropy(std::span<const double> prob, int y);

// Static per-instance features. Column j of `feature_cols` holds feature j
// for all instances; values live in [0,1]. For tables produced by
// extract_features the two columns are the cdf-normalized loss and the
// cdf-normalized renormed entropy, and the raw columns plus interpolation
// tables are retained for inspection.
struct FeatureTable {
  std::vector<std::vector<double>> feature_cols;
  std::vector<double> grad_norm;

  // populated by extract_features only
  std::vector<double> raw_loss, raw_er;
  CdfTable loss_table, er_table;

  std::size_t size() const { return grad_norm.size(); }
  int num_features() const { return static_cast<int>(feature_cols.size()); }
  // feature vector of instance i, gathered across columns
  void feature_vector(std::size_t i, std::span<double> out) const;

  static FeatureTable from_columns(std::vector<std::vector<double>> cols,
                                   std::vector<double> grad_norms);
};

// Computes raw loss, raw renormed entropy and gradient norm for every
// training instance under the pretrained weights, then cdf-normalizes the
// two feature columns. A pure function of (w_pre, train_set).
FeatureTable extract_features(const ModelWeights& w_pre, const Dataset& train_set);

// CSV round trip: index,raw_loss,raw_er,loss_cdf,er_cdf,grad_norm.
// The interpolation tables are reconstructed from the raw columns on load.
void save_features_csv(const FeatureTable& table, const std::string& path);
FeatureTable load_features_csv(const std::string& path);

}  // namespace ssearch
