// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations for the test suites. Each oracle takes the slow,
// direct route (central differences, explicit matrix inverse) so it stays
// independent of the implementation paths it is used to check.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "bayesopt.hpp"
#include "model.hpp"

namespace oracles {

// Central-difference gradient norm of the per-example loss, differentiating
// through the flat parameter vector.
inline double fd_grad_norm(const ssearch::ModelWeights& w,
                           std::span<const double> x, int y,
                           double step = 1e-5) {
  auto flat = w.flat_parameters();
  ssearch::ModelWeights probe = w;
  double sq = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double saved = flat[i];
    flat[i] = saved + step;
    probe.set_flat_parameters(flat);
    const double up = ssearch::per_example_loss(probe, x, y);
    flat[i] = saved - step;
    probe.set_flat_parameters(flat);
    const double down = ssearch::per_example_loss(probe, x, y);
    flat[i] = saved;
    const double g = (up - down) / (2.0 * step);
    sq += g * g;
  }
  return std::sqrt(sq);
}

// Gauss-Jordan inverse with partial pivoting; O(n^3), dense.
inline std::vector<double> invert_dense(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) throw std::runtime_error("singular matrix");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[pivot * n + c], a[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

// GP posterior via the explicit inverse of (K + sigma_n^2 I), with the same
// constant-mean convention as the production path.
inline std::pair<double, double> dense_gp_posterior(
    const std::vector<ssearch::Observation>& obs, std::span<const double> query,
    const ssearch::GpConfig& cfg) {
  const std::size_t t = obs.size();
  if (t == 0) return {0.5, cfg.signal_variance};
  double mean = 0.0;
  for (const auto& o : obs) mean += o.q;
  mean /= static_cast<double>(t);

  std::vector<double> k(t * t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j)
      k[i * t + j] = ssearch::rbf_kernel(obs[i].z, obs[j].z, cfg) +
                     (i == j ? cfg.noise_variance : 0.0);
  const auto kinv = invert_dense(std::move(k), t);

  std::vector<double> kstar(t);
  for (std::size_t i = 0; i < t; ++i)
    kstar[i] = ssearch::rbf_kernel(obs[i].z, query, cfg);

  double post_mean = mean;
  double reduction = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < t; ++j) row += kinv[i * t + j] * kstar[j];
    post_mean += row * (obs[i].q - mean);
    reduction += kstar[i] * row;
  }
  const double variance = std::max(0.0, cfg.signal_variance - reduction);
  return {post_mean, variance};
}

}  // namespace oracles
