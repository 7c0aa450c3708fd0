// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace ssearch {

std::string to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::train: return "train";
    case SplitTag::val: return "val";
    case SplitTag::test: return "test";
  }
  return "train";
}

SplitTag split_tag_from_string(const std::string& s) {
  if (s == "train") return SplitTag::train;
  if (s == "val") return SplitTag::val;
  if (s == "test") return SplitTag::test;
  throw std::invalid_argument("unknown split_tag: " + s);
}

void Dataset::validate() const {
  if (dim < 1) throw std::invalid_argument("dataset dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (xdata.size() != size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("feature storage size mismatch");
  for (int y : labels)
    if (y < 0 || y >= num_classes)
      throw std::invalid_argument("label out of range");
  if (noise_flags && noise_flags->size() != size())
    throw std::invalid_argument("noise_flags length mismatch");
}

// Lattice position of a class mean: class c sits on axis (c mod dim) at
// multiple 1 + floor(c/dim) of `separation`. Distinct classes are at least
// `separation` apart.
static void class_mean(int c, int dim, double separation, double* out) {
  std::fill(out, out + dim, 0.0);
  const int axis = c % dim;
  const int level = 1 + c / dim;
  out[axis] = separation * static_cast<double>(level);
}

Dataset generate_blobs(int num_classes, int dim, int per_class,
                       double separation, double spread, std::uint64_t seed) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (per_class < 1) throw std::invalid_argument("per_class must be >= 1");
  if (!(spread > 0.0)) throw std::invalid_argument("spread must be > 0");

  Dataset ds;
  ds.num_classes = num_classes;
  ds.dim = dim;
  ds.seed = seed;
  const std::size_t n = static_cast<std::size_t>(num_classes) * per_class;
  ds.xdata.resize(n * static_cast<std::size_t>(dim));
  ds.labels.resize(n);

  Rng rng(mix_seed(seed, 0x626c6f62));  // "blob" stream
  std::vector<double> mean(dim);
  std::size_t row = 0;
  for (int c = 0; c < num_classes; ++c) {
    class_mean(c, dim, separation, mean.data());
    for (int i = 0; i < per_class; ++i, ++row) {
      double* x = ds.xdata.data() + row * static_cast<std::size_t>(dim);
      for (int j = 0; j < dim; ++j) x[j] = mean[j] + spread * rng.normal();
      ds.labels[row] = c;
    }
  }
  return ds;
}

Dataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw std::invalid_argument("noise rate must be in [0,1]");
  if (ds.noise_flags)
    throw std::invalid_argument("dataset already carries noise flags");

  Dataset out = ds;
  out.noise_flags = std::vector<std::uint8_t>(ds.size(), 0);
  out.seed = seed;

  Rng rng(mix_seed(seed, 0x6e6f6973));  // "nois" stream
  std::vector<std::size_t> members;
  for (int c = 0; c < ds.num_classes; ++c) {
    members.clear();
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.labels[i] == c) members.push_back(i);
    const std::size_t flips =
        static_cast<std::size_t>(std::floor(rate * static_cast<double>(members.size())));
    // Partial Fisher-Yates: the first `flips` entries are a uniform subset.
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t j = k + rng.uniform_index(members.size() - k);
      std::swap(members[k], members[j]);
    }
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t idx = members[k];
      const std::size_t r = rng.uniform_index(static_cast<std::size_t>(ds.num_classes - 1));
      const int new_label = (static_cast<int>(r) >= c) ? static_cast<int>(r) + 1
                                                       : static_cast<int>(r);
      out.labels[idx] = new_label;
      (*out.noise_flags)[idx] = 1;
    }
  }
  return out;
}

// Largest-remainder allocation of n items to the three fractions.
static std::array<std::size_t, 3> allocate_counts(std::size_t n,
                                                  const SplitFractions& f) {
  const double fracs[3] = {f.train, f.val, f.test};
  std::array<std::size_t, 3> counts{};
  double remainders[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = fracs[k] * static_cast<double>(n);
    counts[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders[k] = exact - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  while (assigned < n) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (remainders[k] > remainders[best]) best = k;
    ++counts[best];
    remainders[best] = -1.0;
    ++assigned;
  }
  return counts;
}

std::array<Dataset, 3> split(const Dataset& ds, const SplitFractions& fractions,
                             std::uint64_t seed) {
  const double sum = fractions.train + fractions.val + fractions.test;
  if (!(fractions.train > 0.0 && fractions.val > 0.0 && fractions.test > 0.0))
    throw std::invalid_argument("all split fractions must be positive");
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split fractions must sum to 1");

  Rng rng(mix_seed(seed, 0x73706c69));  // "spli" stream
  std::array<std::vector<std::size_t>, 3> picks;
  std::vector<std::size_t> members;
  for (int c = 0; c < ds.num_classes; ++c) {
    members.clear();
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.labels[i] == c) members.push_back(i);
    // Fisher-Yates shuffle, then carve the three contiguous blocks.
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      const std::size_t j = k + rng.uniform_index(members.size() - k);
      std::swap(members[k], members[j]);
    }
    const auto counts = allocate_counts(members.size(), fractions);
    std::size_t pos = 0;
    for (int part = 0; part < 3; ++part)
      for (std::size_t k = 0; k < counts[part]; ++k)
        picks[part].push_back(members[pos++]);
  }

  std::array<Dataset, 3> out;
  const SplitTag tags[3] = {SplitTag::train, SplitTag::val, SplitTag::test};
  for (int part = 0; part < 3; ++part) {
    auto& indices = picks[part];
    std::sort(indices.begin(), indices.end());
    Dataset& d = out[part];
    d.num_classes = ds.num_classes;
    d.dim = ds.dim;
    d.split_tag = tags[part];
    d.seed = seed;
    d.labels.reserve(indices.size());
    d.xdata.reserve(indices.size() * static_cast<std::size_t>(ds.dim));
    if (ds.noise_flags) d.noise_flags = std::vector<std::uint8_t>();
    for (std::size_t idx : indices) {
      auto x = ds.instance(idx);
      d.xdata.insert(d.xdata.end(), x.begin(), x.end());
      d.labels.push_back(ds.labels[idx]);
      if (ds.noise_flags) d.noise_flags->push_back((*ds.noise_flags)[idx]);
    }
    if (d.labels.empty())
      throw std::invalid_argument("split produced an empty " + to_string(tags[part]) +
                                  " set; use larger fractions or more data");
  }
  return out;
}

static std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save(const Dataset& ds, const std::string& csv_path) {
  ds.validate();
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot open for write: " + csv_path);
  for (int j = 0; j < ds.dim; ++j) out << "f_" << j << ",";
  out << "label,noise_flag\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto x = ds.instance(i);
    for (double v : x) out << format_double(v) << ",";
    const int flag = ds.noise_flags ? static_cast<int>((*ds.noise_flags)[i]) : 0;
    out << ds.labels[i] << "," << flag << "\n";
  }
  if (!out) throw IoError("write failed: " + csv_path);

  nlohmann::json meta;
  meta["num_classes"] = ds.num_classes;
  meta["dim"] = ds.dim;
  meta["count"] = ds.size();
  meta["split_tag"] = to_string(ds.split_tag);
  meta["seed"] = ds.seed;
  meta["has_noise_flags"] = ds.noise_flags.has_value();
  std::ofstream side(csv_path + ".json");
  if (!side) throw IoError("cannot open for write: " + csv_path + ".json");
  side << meta.dump(2) << "\n";
}

static std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

static double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw IoError("malformed number '" + s + "' in " + context);
  return v;
}

Dataset load(const std::string& csv_path) {
  std::ifstream side(csv_path + ".json");
  if (!side) throw IoError("missing sidecar: " + csv_path + ".json");
  nlohmann::json meta = nlohmann::json::parse(side);

  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open: " + csv_path);
  std::string header;
  if (!std::getline(in, header)) throw IoError("empty file: " + csv_path);
  auto cols = split_csv_line(header);
  if (cols.size() < 3 || cols[cols.size() - 2] != "label" ||
      cols.back() != "noise_flag")
    throw IoError("bad header (need f_0..f_{d-1},label,noise_flag): " + csv_path);
  const int dim = static_cast<int>(cols.size()) - 2;
  for (int j = 0; j < dim; ++j)
    if (cols[j] != "f_" + std::to_string(j))
      throw IoError("bad feature column name '" + cols[j] + "' in " + csv_path);

  Dataset ds;
  ds.dim = dim;
  ds.num_classes = meta.at("num_classes").get<int>();
  ds.split_tag = split_tag_from_string(meta.at("split_tag").get<std::string>());
  ds.seed = meta.at("seed").get<std::uint64_t>();
  const bool has_flags = meta.at("has_noise_flags").get<bool>();
  if (has_flags) ds.noise_flags = std::vector<std::uint8_t>();

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != static_cast<std::size_t>(dim) + 2)
      throw IoError("row " + std::to_string(lineno) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(dim + 2) + ": " + csv_path);
    for (int j = 0; j < dim; ++j)
      ds.xdata.push_back(parse_double(fields[j], csv_path));
    ds.labels.push_back(static_cast<int>(
        parse_double(fields[dim], csv_path + " label column")));
    if (has_flags)
      ds.noise_flags->push_back(
          parse_double(fields[dim + 1], csv_path) != 0.0 ? 1 : 0);
  }
  if (meta.contains("count") &&
      meta.at("count").get<std::size_t>() != ds.size())
    throw IoError("row count disagrees with sidecar: " + csv_path);
  ds.validate();
  return ds;
}

}  // namespace ssearch
