// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace ssearch {

double CdfTable::operator()(double x) const {
  if (xs.empty()) throw std::logic_error("empty cdf table");
  if (x < xs.front()) return floor_y;
  if (x >= xs.back()) return 1.0;
  // xs has at least two entries here; find the segment containing x.
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

std::vector<double> empirical_cdf(std::span<const double> values,
                                  CdfTable* table) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("empirical_cdf needs at least one value");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> mapped(n, 0.0);
  std::vector<double> xs, ys;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // ranks i+1 .. j+1 share the average rank
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    const double y = avg_rank / static_cast<double>(n);
    for (std::size_t k = i; k <= j; ++k) mapped[order[k]] = y;
    xs.push_back(values[order[i]]);
    ys.push_back(y);
    i = j + 1;
  }
  if (table) {
    table->xs = std::move(xs);
    table->ys = std::move(ys);
    table->floor_y = 1.0 / static_cast<double>(n);
  }
  return mapped;
}

double renormed_entropy(std::span<const double> prob, int y) {
  const int k = static_cast<int>(prob.size());
  if (k < 2) throw std::invalid_argument("renormed_entropy needs K >= 2");
  if (y < 0 || y >= k) throw std::invalid_argument("label out of range");
  double rest = 0.0;
  for (int c = 0; c < k; ++c)
    if (c != y) rest += prob[c];
  if (rest <= 1e-15) return 0.0;
  double entropy = 0.0;
  for (int c = 0; c < k; ++c) {
    if (c == y) continue;
    const double q = prob[c] / rest;
    if (q > 0.0) entropy -= q * std::log(q);
  }
  return entropy;
}

void FeatureTable::feature_vector(std::size_t i, std::span<double> out) const {
  if (out.size() != feature_cols.size())
    throw std::invalid_argument("feature vector size mismatch");
  for (std::size_t j = 0; j < feature_cols.size(); ++j) out[j] = feature_cols[j][i];
}

FeatureTable FeatureTable::from_columns(std::vector<std::vector<double>> cols,
                                        std::vector<double> grad_norms) {
  if (cols.empty()) throw std::invalid_argument("need at least one feature column");
  for (const auto& col : cols)
    if (col.size() != grad_norms.size())
      throw std::invalid_argument("feature column length mismatch");
  FeatureTable t;
  t.feature_cols = std::move(cols);
  t.grad_norm = std::move(grad_norms);
  return t;
}

FeatureTable extract_features(const ModelWeights& w_pre, const Dataset& train_set) {
  train_set.validate();
  if (w_pre.dim != train_set.dim || w_pre.num_classes != train_set.num_classes)
    throw std::invalid_argument("weights/dataset shape mismatch");

  const std::size_t n = train_set.size();
  FeatureTable t;
  t.raw_loss.resize(n);
  t.raw_er.resize(n);
  t.grad_norm.resize(n);

  std::vector<double> prob(w_pre.num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = train_set.instance(i);
    const int y = train_set.labels[i];
    forward(w_pre, x, prob);
    t.raw_loss[i] = per_example_loss(w_pre, x, y);
    t.raw_er[i] = renormed_entropy(prob, y);
    t.grad_norm[i] = per_example_grad_norm(w_pre, x, y);
  }
  t.feature_cols.resize(2);
  t.feature_cols[0] = empirical_cdf(t.raw_loss, &t.loss_table);
  t.feature_cols[1] = empirical_cdf(t.raw_er, &t.er_table);
  return t;
}

static std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_features_csv(const FeatureTable& table, const std::string& path) {
  if (table.num_features() != 2 || table.raw_loss.size() != table.size())
    throw std::invalid_argument("only extracted feature tables can be saved");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << "index,raw_loss,raw_er,loss_cdf,er_cdf,grad_norm\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << i << "," << fmt(table.raw_loss[i]) << "," << fmt(table.raw_er[i]) << ","
        << fmt(table.feature_cols[0][i]) << "," << fmt(table.feature_cols[1][i])
        << "," << fmt(table.grad_norm[i]) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

FeatureTable load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  if (line != "index,raw_loss,raw_er,loss_cdf,er_cdf,grad_norm")
    throw IoError("bad feature csv header: " + path);

  FeatureTable t;
  t.feature_cols.resize(2);
  auto parse = [&path](const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw IoError("malformed number '" + s + "' in " + path);
    return v;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw IoError("bad feature csv row: " + path);
    t.raw_loss.push_back(parse(f[1]));
    t.raw_er.push_back(parse(f[2]));
    t.feature_cols[0].push_back(parse(f[3]));
    t.feature_cols[1].push_back(parse(f[4]));
    t.grad_norm.push_back(parse(f[5]));
  }
  if (t.grad_norm.empty()) throw IoError("no rows in feature csv: " + path);
  empirical_cdf(t.raw_loss, &t.loss_table);
  empirical_cdf(t.raw_er, &t.er_table);
  return t;
}

}  // namespace ssearch
