// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssearch {

enum class SplitTag { train, val, test };

std::string to_string(SplitTag tag);
SplitTag split_tag_from_string(const std::string& s);

// A labeled classification dataset. Feature vectors are stored flat,
// row-major. Immutable by convention once constructed: every operation
// below returns a new Dataset.
struct Dataset {
  int num_classes = 0;
  int dim = 0;
  std::vector<double> xdata;   // size() * dim
  std::vector<int> labels;     // values in [0, num_classes)
  // Present only after label-noise injection; flags[i] is true when the
  // label of instance i was flipped away from its original class.
  std::optional<std::vector<std::uint8_t>> noise_flags;
  SplitTag split_tag = SplitTag::train;
  std::uint64_t seed = 0;      // seed recorded for provenance

  std::size_t size() const { return labels.size(); }
  std::span<const double> instance(std::size_t i) const {
    return {xdata.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }

  // Checks the structural invariants; throws std::invalid_argument.
  void validate() const;
};

// Generates `num_classes * per_class` instances. Class c is drawn from an
// isotropic Gaussian with standard deviation `spread` around a mean placed
// deterministically on an axis-aligned lattice scaled by `separation`.
Dataset generate_blobs(int num_classes, int dim, int per_class,
                       double separation, double spread, std::uint64_t seed);

// Within each class, exactly floor(rate * class_size) instances are chosen
// at random and relabeled to a uniformly random *different* class.
// Feature vectors are untouched; noise_flags records the flips.
Dataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

// Stratified three-way split: disjoint, union equals the input,
// deterministic under `seed`. All three fractions must be positive and sum
// to 1; per-class counts use largest-remainder rounding.
std::array<Dataset, 3> split(const Dataset& ds, const SplitFractions& fractions,
                             std::uint64_t seed);

// CSV (header f_0..f_{d-1},label,noise_flag) plus a "<path>.json" sidecar
// carrying num_classes, split_tag, seed and whether noise flags are present.
void save(const Dataset& ds, const std::string& csv_path);
Dataset load(const std::string& csv_path);

}  // namespace ssearch
