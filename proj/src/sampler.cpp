// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "errors.hpp"

namespace ssearch {

std::string to_string(TransformMode mode) {
  return mode == TransformMode::cgf ? "cgf" : "cdf";
}

TransformMode transform_mode_from_string(const std::string& s) {
  if (s == "cgf") return TransformMode::cgf;
  if (s == "cdf") return TransformMode::cdf;
  throw std::invalid_argument("unknown transform mode: " + s);
}

void SamplerParams::validate() const {
  if (segments < 1) throw std::invalid_argument("segments must be >= 1");
  if (num_features < 1) throw std::invalid_argument("num_features must be >= 1");
  if (endpoints.size() != static_cast<std::size_t>(segments) + 1)
    throw std::invalid_argument("endpoints must hold S+1 entries");
  if (values.size() != static_cast<std::size_t>(segments) + 1)
    throw std::invalid_argument("values must hold S+1 entries");
  if (coeffs.size() != static_cast<std::size_t>(num_features))
    throw std::invalid_argument("coeffs must hold N entries");
  if (endpoints.front() != 0.0 || endpoints.back() != 1.0)
    throw std::invalid_argument("endpoints must start at 0 and end at 1");
  if (!std::is_sorted(endpoints.begin(), endpoints.end()))
    throw std::invalid_argument("endpoints must be nondecreasing");
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("values must lie in [0,1]");
  for (double c : coeffs)
    if (!(c >= -1.0 && c <= 1.0))
      throw std::invalid_argument("coefficients must lie in [-1,1]");
}

SamplerParams SamplerParams::uniform_reference(int segments, int num_features,
                                               TransformMode mode) {
  SamplerParams p;
  p.segments = segments;
  p.num_features = num_features;
  p.transform_mode = mode;
  p.endpoints.resize(segments + 1);
  for (int s = 0; s <= segments; ++s)
    p.endpoints[s] = static_cast<double>(s) / segments;
  p.values.assign(segments + 1, 0.5);
  p.coeffs.assign(num_features, 0.0);
  return p;
}

int encoded_dim(int segments, int num_features) {
  return (segments - 1) + (segments + 1) + num_features;
}

std::vector<double> encode(const SamplerParams& params) {
  params.validate();
  std::vector<double> z;
  z.reserve(encoded_dim(params.segments, params.num_features));
  for (int s = 1; s < params.segments; ++s) z.push_back(params.endpoints[s]);
  for (double v : params.values) z.push_back(v);
  for (double c : params.coeffs) z.push_back(0.5 * (c + 1.0));
  return z;
}

SamplerParams decode(std::span<const double> unit_vector, int segments,
                     int num_features, TransformMode mode) {
  const int dim = encoded_dim(segments, num_features);
  if (static_cast<int>(unit_vector.size()) != dim)
    throw std::invalid_argument("encoded vector has wrong dimension");
  for (double u : unit_vector)
    if (!(u >= 0.0 && u <= 1.0))
      throw std::invalid_argument("encoded vector entries must lie in [0,1]");

  SamplerParams p;
  p.segments = segments;
  p.num_features = num_features;
  p.transform_mode = mode;
  p.endpoints.resize(segments + 1);
  p.endpoints.front() = 0.0;
  p.endpoints.back() = 1.0;
  std::vector<double> interior(unit_vector.begin(),
                               unit_vector.begin() + (segments - 1));
  std::sort(interior.begin(), interior.end());
  std::copy(interior.begin(), interior.end(), p.endpoints.begin() + 1);
  p.values.assign(unit_vector.begin() + (segments - 1),
                  unit_vector.begin() + (segments - 1) + (segments + 1));
  p.coeffs.resize(num_features);
  for (int i = 0; i < num_features; ++i)
    p.coeffs[i] = 2.0 * unit_vector[2 * segments + i] - 1.0;
  return p;
}

double eval_H(const SamplerParams& params, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("H is defined on [0,1]");
  const auto& e = params.endpoints;
  const auto& v = params.values;
  // Largest segment whose left endpoint is <= u; exists since e_0 = 0.
  int s = params.segments;
  while (s > 1 && e[s - 1] > u) --s;
  if (e[s] == e[s - 1]) return v[s];  // zero-width: rightmost value
  const double t = (u - e[s - 1]) / (e[s] - e[s - 1]);
  return v[s - 1] + t * (v[s] - v[s - 1]);
}

double eval_G(const SamplerParams& params, std::span<const double> f) {
  if (f.size() != params.coeffs.size())
    throw std::invalid_argument("feature vector dimension mismatch");
  double g = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) g += params.coeffs[i] * f[i];
  return g;
}

std::vector<double> g_values(const SamplerParams& params, const FeatureTable& table) {
  if (params.num_features != table.num_features())
    throw std::invalid_argument("params/table feature count mismatch");
  const std::size_t n = table.size();
  std::vector<double> g(n, 0.0);
  for (int j = 0; j < table.num_features(); ++j) {
    const double c = params.coeffs[j];
    const auto& col = table.feature_cols[j];
    for (std::size_t i = 0; i < n; ++i) g[i] += c * col[i];
  }
  return g;
}

double TransformTable::operator()(double u) const {
  if (xs.empty()) throw std::logic_error("empty transform table");
  if (u <= xs.front()) return ys.front();
  if (u >= xs.back()) return 1.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), u);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (u - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

double TransformTable::max_slope() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    m = std::max(m, (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]));
  return m;
}

TransformTable build_transform(TransformMode mode, std::span<const double> g_vals,
                               std::span<const double> grad_norms) {
  const std::size_t n = g_vals.size();
  if (n == 0) throw std::invalid_argument("transform needs at least one instance");
  if (grad_norms.size() != n)
    throw std::invalid_argument("grad_norms length mismatch");

  double total = 0.0;
  for (double g : grad_norms) {
    if (g < 0.0) throw std::invalid_argument("gradient norms must be >= 0");
    if (mode == TransformMode::cgf) total += g;
  }
  if (mode == TransformMode::cdf) total = static_cast<double>(n);
  if (mode == TransformMode::cgf && total <= 0.0)
    throw std::invalid_argument(
        "all-zero gradient norms: the pretrained model has collapsed; "
        "use the cdf transform instead");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return g_vals[a] < g_vals[b]; });

  TransformTable t;
  t.mode = mode;
  double cum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double mass = 0.0;
    while (j < n && g_vals[order[j]] == g_vals[order[i]]) {
      mass += mode == TransformMode::cgf ? grad_norms[order[j]] : 1.0;
      ++j;
    }
    cum += mass;
    t.xs.push_back(g_vals[order[i]]);
    // cum sums in sorted order while total summed in input order, so the
    // ratio can overshoot 1 by an ulp; H's domain is exactly [0,1].
    t.ys.push_back(std::min(cum / total, 1.0));
    i = j;
  }
  t.ys.back() = 1.0;
  return t;
}

std::vector<double> eval_tau(const SamplerParams& params,
                             const TransformTable& transform,
                             const FeatureTable& table) {
  params.validate();
  const auto g = g_values(params, table);
  std::vector<double> tau(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) tau[i] = eval_H(params, transform(g[i]));
  return tau;
}

std::vector<double> normalize(std::span<const double> tau) {
  double sum = 0.0;
  for (double t : tau) {
    if (t < 0.0) throw std::invalid_argument("tau entries must be >= 0");
    sum += t;
  }
  if (sum < 1e-12)
    throw DegenerateSamplerError("sampler assigns zero total weight");
  std::vector<double> probs(tau.begin(), tau.end());
  for (double& p : probs) p /= sum;
  return probs;
}

double lipschitz_bound(const SamplerParams& params, const TransformTable& transform) {
  params.validate();
  double l_h = 0.0;
  for (int s = 1; s <= params.segments; ++s) {
    const double width = params.endpoints[s] - params.endpoints[s - 1];
    const double rise = std::abs(params.values[s] - params.values[s - 1]);
    if (width == 0.0) {
      if (rise > 0.0) return std::numeric_limits<double>::infinity();
      continue;  // zero-width, equal values: no jump
    }
    l_h = std::max(l_h, rise / width);
  }
  double c_norm_sq = 0.0;
  for (double c : params.coeffs) c_norm_sq += c * c;
  return l_h * transform.max_slope() * std::sqrt(c_norm_sq);
}

AliasTable::AliasTable(std::span<const double> probs) {
  const std::size_t n = probs.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one entry");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probabilities must sum to 1");

  accept_.assign(n, 1.0);
  alias_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);

  // Vose's algorithm over scaled weights n * p_i.
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    large.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = static_cast<std::uint32_t>(l);
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::size_t i : large) accept_[i] = 1.0;
  for (std::size_t i : small) accept_[i] = 1.0;
}

AliasTable build_alias(std::span<const double> probs) { return AliasTable(probs); }

std::vector<std::uint32_t> sample_batch(const AliasTable& table,
                                        std::size_t batch_size, Rng& rng) {
  std::vector<std::uint32_t> indices(batch_size);
  for (auto& idx : indices)
    idx = static_cast<std::uint32_t>(table.sample(rng));
  return indices;
}

nlohmann::json sampler_to_json(const SamplerParams& params) {
  params.validate();
  nlohmann::json j;
  j["segments"] = params.segments;
  j["num_features"] = params.num_features;
  j["endpoints"] = params.endpoints;
  j["values"] = params.values;
  j["coefficients"] = params.coeffs;
  j["transform"] = to_string(params.transform_mode);
  return j;
}

SamplerParams sampler_from_json(const nlohmann::json& j) {
  SamplerParams p;
  p.segments = j.at("segments").get<int>();
  p.num_features = j.at("num_features").get<int>();
  p.endpoints = j.at("endpoints").get<std::vector<double>>();
  p.values = j.at("values").get<std::vector<double>>();
  p.coeffs = j.at("coefficients").get<std::vector<double>>();
  p.transform_mode = transform_mode_from_string(j.at("transform").get<std::string>());
  p.validate();
  return p;
}

void save_sampler(const SamplerParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << sampler_to_json(params).dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

SamplerParams load_sampler(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return sampler_from_json(nlohmann::json::parse(in));
}

}  // namespace ssearch
