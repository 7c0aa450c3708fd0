// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>

#include "dataset.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "test_util.hpp"

using namespace ssearch;

namespace {

std::vector<std::size_t> class_counts(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.num_classes, 0);
  for (int y : ds.labels) ++counts[y];
  return counts;
}

// Multiset of (features..., label) rows, sorted for comparison.
std::vector<std::vector<double>> sorted_rows(const Dataset& ds) {
  std::vector<std::vector<double>> rows;
  rows.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto x = ds.instance(i);
    std::vector<double> row(x.begin(), x.end());
    row.push_back(ds.labels[i]);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_CASE("generate_blobs shapes and balance") {
  const auto ds = generate_blobs(10, 16, 500, 3.0, 1.0, 7);
  CHECK(ds.size() == 5000);
  CHECK(ds.dim == 16);
  for (std::size_t c : class_counts(ds)) CHECK(c == 500);
}

TEST_CASE("generate_blobs is deterministic under seed") {
  const auto a = generate_blobs(4, 3, 20, 5.0, 0.5, 42);
  const auto b = generate_blobs(4, 3, 20, 5.0, 0.5, 42);
  CHECK(a.xdata == b.xdata);
  CHECK(a.labels == b.labels);
  const auto c = generate_blobs(4, 3, 20, 5.0, 0.5, 43);
  CHECK(a.xdata != c.xdata);
}

TEST_CASE("generate_blobs rejects invalid parameters") {
  CHECK_THROWS_AS(generate_blobs(1, 2, 10, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_blobs(2, 0, 10, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_blobs(2, 2, 0, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_blobs(2, 2, 10, 1.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("well-separated blobs are learnable to 99% train accuracy") {
  const auto ds = generate_blobs(2, 2, 100, 10.0, 0.5, 11);
  TrainHyper hyper;
  hyper.epochs = 30;
  hyper.lr = 0.5;
  hyper.weight_decay = 0.0;
  hyper.seed = 1;
  const auto w0 = init_weights(Arch::softmax_regression, 2, 2, 0, 1);
  const auto w = train(w0, ds, {}, hyper);
  CHECK(evaluate(w, ds) >= 0.99);
}

TEST_CASE("inject_label_noise with rate 0 changes nothing") {
  const auto ds = generate_blobs(3, 2, 10, 4.0, 1.0, 5);
  const auto noisy = inject_label_noise(ds, 0.0, 9);
  CHECK(noisy.labels == ds.labels);
  CHECK(noisy.xdata == ds.xdata);
  REQUIRE(noisy.noise_flags.has_value());
  for (auto f : *noisy.noise_flags) CHECK(f == 0);
}

TEST_CASE("inject_label_noise flips exactly floor(rate * class size) per class") {
  const auto ds = generate_blobs(10, 4, 500, 3.0, 1.0, 13);
  const auto noisy = inject_label_noise(ds, 0.4, 17);
  REQUIRE(noisy.noise_flags.has_value());
  CHECK(noisy.xdata == ds.xdata);

  std::vector<std::size_t> flips_per_class(10, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool flagged = (*noisy.noise_flags)[i] != 0;
    CHECK(flagged == (noisy.labels[i] != ds.labels[i]));
    if (flagged) {
      ++flips_per_class[ds.labels[i]];
      CHECK(noisy.labels[i] != ds.labels[i]);  // never flips onto itself
    }
  }
  for (std::size_t f : flips_per_class) CHECK(f == 200);
}

TEST_CASE("inject_label_noise supports the whole experiment rate grid") {
  const auto ds = generate_blobs(10, 4, 50, 3.0, 1.0, 23);
  for (double rate : {0.0, 0.1, 0.2, 0.3, 0.4}) {
    const auto noisy = inject_label_noise(ds, rate, 3);
    std::size_t flips = 0;
    for (auto f : *noisy.noise_flags) flips += f;
    CHECK(flips == static_cast<std::size_t>(rate * 50 + 0.5) * 10);
  }
}

TEST_CASE("inject_label_noise error paths") {
  const auto ds = generate_blobs(3, 2, 10, 4.0, 1.0, 5);
  CHECK_THROWS_AS(inject_label_noise(ds, -0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(inject_label_noise(ds, 1.1, 0), std::invalid_argument);
  const auto noisy = inject_label_noise(ds, 0.2, 0);
  CHECK_THROWS_AS(inject_label_noise(noisy, 0.2, 0), std::invalid_argument);
}

TEST_CASE("split is stratified, disjoint and exhaustive") {
  const auto ds = generate_blobs(10, 4, 500, 3.0, 1.0, 29);
  const auto parts = split(ds, {0.8, 0.1, 0.1}, 31);
  CHECK(parts[0].size() == 4000);
  CHECK(parts[1].size() == 500);
  CHECK(parts[2].size() == 500);
  CHECK(parts[0].split_tag == SplitTag::train);
  CHECK(parts[1].split_tag == SplitTag::val);
  CHECK(parts[2].split_tag == SplitTag::test);
  for (const auto& p : parts)
    for (std::size_t c : class_counts(p)) CHECK(c == p.size() / 10);

  // Union of the parts equals the input as a multiset of rows.
  Dataset merged = parts[0];
  for (int part : {1, 2}) {
    merged.xdata.insert(merged.xdata.end(), parts[part].xdata.begin(),
                        parts[part].xdata.end());
    merged.labels.insert(merged.labels.end(), parts[part].labels.begin(),
                         parts[part].labels.end());
  }
  CHECK(sorted_rows(merged) == sorted_rows(ds));
}

TEST_CASE("split determinism and error paths") {
  const auto ds = generate_blobs(5, 3, 40, 3.0, 1.0, 37);
  const auto a = split(ds, {0.6, 0.2, 0.2}, 41);
  const auto b = split(ds, {0.6, 0.2, 0.2}, 41);
  for (int part = 0; part < 3; ++part) {
    CHECK(a[part].xdata == b[part].xdata);
    CHECK(a[part].labels == b[part].labels);
  }
  CHECK_THROWS_AS(split(ds, {1.0, 0.0, 0.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, {0.5, 0.3, 0.3}, 1), std::invalid_argument);
}

TEST_CASE("save/load round trip") {
  testutil::TempDir tmp;
  auto ds = generate_blobs(10, 16, 20, 3.0, 1.0, 43);
  ds = inject_label_noise(ds, 0.3, 47);
  ds.split_tag = SplitTag::val;
  const auto path = tmp.file("ds.csv");
  save(ds, path);
  const auto loaded = load(path);
  CHECK(loaded.xdata == ds.xdata);
  CHECK(loaded.labels == ds.labels);
  CHECK(loaded.noise_flags == ds.noise_flags);
  CHECK(loaded.num_classes == ds.num_classes);
  CHECK(loaded.split_tag == ds.split_tag);
  CHECK(loaded.seed == ds.seed);
}

TEST_CASE("a 5000 x 16 dataset survives the CSV round trip") {
  testutil::TempDir tmp;
  const auto ds = generate_blobs(10, 16, 500, 3.0, 1.0, 53);
  const auto path = tmp.file("big.csv");
  save(ds, path);
  const auto loaded = load(path);
  CHECK(loaded.size() == 5000);
  CHECK(loaded.dim == 16);
  CHECK(loaded.xdata == ds.xdata);
}

TEST_CASE("load rejects malformed files") {
  testutil::TempDir tmp;
  const auto path = tmp.file("bad.csv");
  {
    std::ofstream out(path);
    out << "f_0,f_1,noise_flag\n0.0,1.0,0\n";  // label column missing
    std::ofstream side(path + ".json");
    side << R"({"num_classes":2,"dim":2,"count":1,"split_tag":"train","seed":0,)"
         << R"("has_noise_flags":false})";
  }
  CHECK_THROWS_AS(load(path), IoError);
  CHECK_THROWS_AS(load(tmp.file("missing.csv")), IoError);

  const auto ragged = tmp.file("ragged.csv");
  {
    std::ofstream out(ragged);
    out << "f_0,f_1,label,noise_flag\n0.0,1.0,0,0\n0.5,1,2\n";
    std::ofstream side(ragged + ".json");
    side << R"({"num_classes":2,"dim":2,"count":2,"split_tag":"train","seed":0,)"
         << R"("has_noise_flags":false})";
  }
  CHECK_THROWS_AS(load(ragged), IoError);
}
