// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Walker/Vose alias table for O(1) weighted sampling with replacement.
// Logically part of the sampler family machinery; split out so the trainer
// can draw minibatches without pulling in the whole sampler.

#include <cstdint>
#include <span>
#include <vector>

#include "rng.hpp"

namespace ssearch {

class AliasTable {
 public:
  // probs must be a probability vector (nonnegative, sum 1 within 1e-9).
  explicit AliasTable(std::span<const double> probs);

  std::size_t size() const { return accept_.size(); }

  std::size_t sample(Rng& rng) const {
    const std::size_t k = rng.uniform_index(accept_.size());
    return rng.uniform() < accept_[k] ? k : alias_[k];
  }

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

AliasTable build_alias(std::span<const double> probs);

std::vector<std::uint32_t> sample_batch(const AliasTable& table,
                                        std::size_t batch_size, Rng& rng);

}  // namespace ssearch
