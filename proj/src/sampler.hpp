// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "alias.hpp"
#include "features.hpp"

namespace ssearch {

enum class TransformMode { cgf, cdf };

std::string to_string(TransformMode mode);
TransformMode transform_mode_from_string(const std::string& s);

// A point of the sampler search space. The sampler maps an instance x with
// feature vector f to a sampling weight
//
//   tau(x) = H(T(G(x))),   G(x) = sum_i c_i * f_i(x),
//
// where H is the piecewise-linear profile through (e_s, v_s) on [0,1] and
// T rescales G values into [0,1] (see build_transform). With S segments and
// N features the free parameters are (S-1) interior endpoints, S+1 values
// and N coefficients: 10 for the default S=4, N=2.
struct SamplerParams {
  int segments = 4;      // S
  int num_features = 2;  // N
  std::vector<double> endpoints;  // e_0..e_S with e_0 = 0, e_S = 1, nondecreasing
  std::vector<double> values;     // v_0..v_S in [0,1]
  std::vector<double> coeffs;     // c_1..c_N in [-1,1]
  TransformMode transform_mode = TransformMode::cgf;

  void validate() const;

  // All v_s equal: tau is constant, so the normalized probabilities are
  // uniform. Used as the reference candidate anchoring every search run.
  static SamplerParams uniform_reference(int segments, int num_features,
                                         TransformMode mode);
};

// Dimension of the unit-cube encoding: (S-1) + (S+1) + N.
int encoded_dim(int segments, int num_features);

// Unit-cube encoding of a search-space point. Interior endpoints map
// identically (they are already sorted), values map identically, and the
// coefficients map affinely from [-1,1] to [0,1]. decode sorts the raw
// endpoint coordinates, so decode(encode(p)) reproduces p exactly.
std::vector<double> encode(const SamplerParams& params);
SamplerParams decode(std::span<const double> unit_vector, int segments,
                     int num_features, TransformMode mode);

// Piecewise-linear profile evaluation for u in [0,1]. On a zero-width
// segment the rightmost value wins.
double eval_H(const SamplerParams& params, double u);

// Linear feature aggregation; f must hold num_features entries in [0,1].
double eval_G(const SamplerParams& params, std::span<const double> f);

// G(x_i) for every instance of the table.
std::vector<double> g_values(const SamplerParams& params, const FeatureTable& table);

// Monotone map from G values onto [0,1], realized as the piecewise-linear
// interpolant through the cumulative weight at each distinct sorted G
// value. In cgf mode the weights are the per-instance gradient norms, so
// equal-length intervals of the output carry equal total gradient norm;
// in cdf mode all weights are 1. Queries below the first sample value
// clamp to its cumulative weight, queries above the last return 1.
struct TransformTable {
  TransformMode mode = TransformMode::cgf;
  std::vector<double> xs;  // distinct sorted G values
  std::vector<double> ys;  // cumulative shares, ys.back() == 1

  double operator()(double u) const;
  // Largest segment slope; 0 for a single-point table.
  double max_slope() const;
};

TransformTable build_transform(TransformMode mode, std::span<const double> g_vals,
                               std::span<const double> grad_norms);

// tau_i = H(T(G(x_i))) for every instance; entries in [0,1].
std::vector<double> eval_tau(const SamplerParams& params,
                             const TransformTable& transform,
                             const FeatureTable& table);

// probs = tau / sum(tau). Throws DegenerateSamplerError when the total
// weight is below 1e-12 (the sampler discards everything).
std::vector<double> normalize(std::span<const double> tau);

// Lipschitz constant C with |tau(x_i) - tau(x_j)| <= C * ||f_i - f_j||_2:
// C = L_H * L_T * ||c||_2 with L_H the largest segment slope of H and L_T
// the largest slope of the transform table. A zero-width H segment whose
// values differ is a jump: C is reported as +infinity.
double lipschitz_bound(const SamplerParams& params, const TransformTable& transform);

// JSON record of a search-space point; the artifact of a search run.
nlohmann::json sampler_to_json(const SamplerParams& params);
SamplerParams sampler_from_json(const nlohmann::json& j);
void save_sampler(const SamplerParams& params, const std::string& path);
SamplerParams load_sampler(const std::string& path);

}  // namespace ssearch
