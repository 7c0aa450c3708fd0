// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssearch {

double rbf_kernel(std::span<const double> z1, std::span<const double> z2,
                  const GpConfig& cfg) {
  if (z1.size() != z2.size())
    throw std::invalid_argument("kernel input dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i) {
    const double d = z1[i] - z2[i];
    sq += d * d;
  }
  return cfg.signal_variance *
         std::exp(-sq / (2.0 * cfg.lengthscale * cfg.lengthscale));
}

double ucb(double mean, double variance, double kappa) {
  if (variance < 0.0) throw std::invalid_argument("variance must be >= 0");
  return mean + kappa * std::sqrt(variance);
}

BoState::BoState(int dim, const GpConfig& cfg) : dim_(dim), cfg_(cfg) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(cfg.lengthscale > 0.0) || !(cfg.signal_variance > 0.0) ||
      cfg.noise_variance < 0.0 || cfg.ucb_kappa < 0.0 || cfg.n_init < 0 ||
      cfg.acq_candidates < 1 || cfg.acq_refine_top < 1)
    throw std::invalid_argument("invalid GP configuration");
}

namespace {

// In-place Cholesky of the (row-major, t x t) matrix; returns false when a
// pivot is not positive.
bool cholesky(std::vector<double>& a, std::size_t t) {
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * t + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * t + k] * a[j * t + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        a[i * t + i] = std::sqrt(sum);
      } else {
        a[i * t + j] = sum / a[j * t + j];
      }
    }
    for (std::size_t j = i + 1; j < t; ++j) a[i * t + j] = 0.0;
  }
  return true;
}

void solve_lower(const std::vector<double>& l, std::size_t t,
                 std::vector<double>& x) {
  for (std::size_t i = 0; i < t; ++i) {
    double sum = x[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * t + k] * x[k];
    x[i] = sum / l[i * t + i];
  }
}

void solve_upper_from_lower(const std::vector<double>& l, std::size_t t,
                            std::vector<double>& x) {
  for (std::size_t ii = t; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t k = ii + 1; k < t; ++k) sum -= l[k * t + ii] * x[k];
    x[ii] = sum / l[ii * t + ii];
  }
}

// Golden-section maximization of f on [0,1]; deterministic iteration count.
template <typename F>
double golden_section_max(const F& f, int iterations = 28) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  // Return whichever probe is best, including the midpoint.
  double best_x = c, best_f = fc;
  if (fd > best_f) { best_x = d; best_f = fd; }
  const double fm = f(mid);
  if (fm > best_f) best_x = mid;
  return best_x;
}

}  // namespace

void BoState::refactor() {
  const std::size_t t = obs_.size();
  mean_ = 0.0;
  for (const auto& o : obs_) mean_ += o.q;
  mean_ = t == 0 ? 0.5 : mean_ / static_cast<double>(t);
  if (t == 0) {
    chol_.clear();
    alpha_.clear();
    return;
  }

  std::vector<double> base(t * t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double k = rbf_kernel(obs_[i].z, obs_[j].z, cfg_);
      base[i * t + j] = k;
      base[j * t + i] = k;
    }
  for (std::size_t i = 0; i < t; ++i) base[i * t + i] += cfg_.noise_variance;

  double jitter = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    chol_ = base;
    if (attempt > 0) {
      jitter = attempt == 1 ? 1e-10 : jitter * 1e2;
      for (std::size_t i = 0; i < t; ++i) chol_[i * t + i] += jitter;
    }
    if (cholesky(chol_, t)) {
      alpha_.resize(t);
      for (std::size_t i = 0; i < t; ++i) alpha_[i] = obs_[i].q - mean_;
      solve_lower(chol_, t, alpha_);
      solve_upper_from_lower(chol_, t, alpha_);
      return;
    }
  }
  throw std::runtime_error("kernel matrix not positive definite after jitter");
}

void BoState::update(std::span<const double> z, double q) {
  if (static_cast<int>(z.size()) != dim_)
    throw std::invalid_argument("observation dimension mismatch");
  for (double zi : z)
    if (!(zi >= 0.0 && zi <= 1.0))
      throw std::invalid_argument("observation outside the unit cube");
  obs_.push_back({std::vector<double>(z.begin(), z.end()), q});
  refactor();
}

std::pair<double, double> BoState::posterior(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != dim_)
    throw std::invalid_argument("query dimension mismatch");
  const std::size_t t = obs_.size();
  if (t == 0) return {mean_, cfg_.signal_variance};

  std::vector<double> kstar(t);
  for (std::size_t i = 0; i < t; ++i) kstar[i] = rbf_kernel(obs_[i].z, z, cfg_);

  double mean = mean_;
  for (std::size_t i = 0; i < t; ++i) mean += kstar[i] * alpha_[i];

  std::vector<double> v = kstar;
  solve_lower(chol_, t, v);
  double reduction = 0.0;
  for (double vi : v) reduction += vi * vi;
  const double variance = std::max(0.0, cfg_.signal_variance - reduction);
  return {mean, variance};
}

double BoState::acquisition(std::span<const double> z) const {
  const auto [mean, variance] = posterior(z);
  return ucb(mean, variance, cfg_.ucb_kappa);
}

std::vector<double> BoState::propose_next(Rng& rng) const {
  std::vector<double> z(dim_);
  if (obs_.size() < static_cast<std::size_t>(cfg_.n_init)) {
    for (double& zi : z) zi = rng.uniform();
    return z;
  }

  // Random multistart.
  struct Candidate {
    std::vector<double> z;
    double value;
  };
  std::vector<Candidate> top;
  top.reserve(cfg_.acq_refine_top);
  for (int i = 0; i < cfg_.acq_candidates; ++i) {
    for (double& zi : z) zi = rng.uniform();
    const double value = acquisition(z);
    if (static_cast<int>(top.size()) < cfg_.acq_refine_top) {
      top.push_back({z, value});
      std::push_heap(top.begin(), top.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.value > b.value;  // min-heap on value
                     });
    } else if (value > top.front().value) {
      std::pop_heap(top.begin(), top.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.value > b.value;
                    });
      top.back() = {z, value};
      std::push_heap(top.begin(), top.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.value > b.value;
                     });
    }
  }

  // Cyclic coordinate descent on each retained start.
  std::vector<double> best_z;
  double best_value = -std::numeric_limits<double>::infinity();
  std::stable_sort(top.begin(), top.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.value > b.value;
                   });
  for (auto& cand : top) {
    std::vector<double> x = cand.z;
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int j = 0; j < dim_; ++j) {
        x[j] = golden_section_max([&](double value) {
          x[j] = value;
          return acquisition(x);
        });
      }
    }
    const double value = acquisition(x);
    if (value > best_value) {
      best_value = value;
      best_z = x;
    }
  }
  return best_z;
}

}  // namespace ssearch
