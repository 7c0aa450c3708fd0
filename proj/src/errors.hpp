// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ssearch {

// Raised when a sampler assigns (numerically) zero probability to every
// training instance. The search layer scores such candidates 0 instead of
// training with them.
class DegenerateSamplerError : public std::runtime_error {
 public:
  explicit DegenerateSamplerError(const std::string& what)
      : std::runtime_error(what) {}
};

// File/IO and format problems while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ssearch
