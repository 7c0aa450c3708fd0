// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dataset.hpp"
#include "features.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace ssearch;

TEST_CASE("empirical_cdf maps ranks over n") {
  const auto mapped = empirical_cdf(std::vector<double>{3.0, 1.0, 2.0});
  CHECK(mapped[0] == doctest::Approx(1.0));
  CHECK(mapped[1] == doctest::Approx(1.0 / 3.0));
  CHECK(mapped[2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("empirical_cdf averages tied ranks") {
  const auto mapped = empirical_cdf(std::vector<double>{5.0, 5.0, 5.0, 5.0});
  for (double m : mapped) CHECK(m == doctest::Approx(0.625));
}

TEST_CASE("empirical_cdf degenerate and error cases") {
  const auto mapped = empirical_cdf(std::vector<double>{42.0});
  CHECK(mapped == std::vector<double>{1.0});
  CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("empirical_cdf interpolation table") {
  CdfTable table;
  empirical_cdf(std::vector<double>{0.0, 1.0, 2.0, 3.0}, &table);
  // At sample points: rank/n.
  CHECK(table(0.0) == doctest::Approx(0.25));
  CHECK(table(3.0) == doctest::Approx(1.0));
  // Piecewise linear between samples.
  CHECK(table(0.5) == doctest::Approx(0.375));
  CHECK(table(2.5) == doctest::Approx(0.875));
  // Clamped to [1/n, 1] outside the observed range.
  CHECK(table(-10.0) == doctest::Approx(0.25));
  CHECK(table(10.0) == doctest::Approx(1.0));
}

TEST_CASE("empirical_cdf is a monotone map") {
  Rng rng(3);
  std::vector<double> values(200);
  for (double& v : values) v = rng.uniform(-5.0, 5.0);
  const auto mapped = empirical_cdf(values);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[i] < values[j]) CHECK(mapped[i] < mapped[j]);
      if (values[i] == values[j]) CHECK(mapped[i] == mapped[j]);
    }
  for (double m : mapped) {
    CHECK(m >= 1.0 / 200.0);
    CHECK(m <= 1.0);
  }
}

TEST_CASE("renormed_entropy closed forms") {
  // rest of (0.2, 0.4, 0.4) after deleting y=0 renorms to (0.5, 0.5)
  CHECK(renormed_entropy(std::vector<double>{0.2, 0.4, 0.4}, 0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // one-hot rest
  CHECK(renormed_entropy(std::vector<double>{0.3, 0.7, 0.0}, 0) ==
        doctest::Approx(0.0));
  // rest (0.25, 0.5, 0.25): entropy = 1.5 ln 2
  CHECK(renormed_entropy(std::vector<double>{0.1, 0.6, 0.2, 0.1}, 1) ==
        doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
  // prob[y] = 1 exactly: remaining mass 0 -> 0 by convention
  CHECK(renormed_entropy(std::vector<double>{0.0, 1.0, 0.0}, 1) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(renormed_entropy(std::vector<double>{1.0}, 0),
                  std::invalid_argument);
}

TEST_CASE("renormed_entropy range and maximum") {
  Rng rng(5);
  const int k = 6;
  const double max_entropy = std::log(static_cast<double>(k - 1));
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> prob(k);
    double sum = 0.0;
    for (double& p : prob) {
      p = rng.uniform();
      sum += p;
    }
    for (double& p : prob) p /= sum;
    const int y = static_cast<int>(rng.uniform_index(k));
    const double er = renormed_entropy(prob, y);
    CHECK(er >= 0.0);
    CHECK(er <= max_entropy + 1e-12);
  }
  // maximum attained exactly when the rest is uniform
  std::vector<double> uniform_rest{0.4, 0.2, 0.2, 0.2};
  CHECK(renormed_entropy(uniform_rest, 0) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

namespace {

// A converged-ish pretrained model on noisy blobs, for extraction tests.
struct Extracted {
  Dataset train;
  ModelWeights weights;
  FeatureTable table;
};

Extracted make_extracted() {
  auto ds = generate_blobs(5, 4, 80, 4.0, 1.0, 11);
  ds = inject_label_noise(ds, 0.4, 13);
  TrainHyper hyper;
  hyper.epochs = 20;
  hyper.lr = 0.2;
  hyper.seed = 3;
  const auto w0 = init_weights(Arch::softmax_regression, 4, 5, 0, 17);
  auto w = train(w0, ds, {}, hyper);
  auto table = extract_features(w, ds);
  return {std::move(ds), std::move(w), std::move(table)};
}

}  // namespace

TEST_CASE("extract_features: cdf order matches raw order") {
  const auto ex = make_extracted();
  const auto& t = ex.table;
  REQUIRE(t.size() == ex.train.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t.raw_loss[i] < t.raw_loss[j])
        CHECK(t.feature_cols[0][i] < t.feature_cols[0][j]);
}

TEST_CASE("extract_features: zero weights tie every loss") {
  auto ds = generate_blobs(10, 3, 30, 3.0, 1.0, 19);
  auto w = init_weights(Arch::softmax_regression, 3, 10, 0, 1);
  for (double& v : w.w1) v = 0.0;
  for (double& v : w.b1) v = 0.0;
  const auto t = extract_features(w, ds);
  const double n = static_cast<double>(ds.size());
  const double tied_value = 0.5 * (n + 1.0) / n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.raw_loss[i] == doctest::Approx(std::log(10.0)));
    CHECK(t.feature_cols[0][i] == doctest::Approx(tied_value));
  }
}

TEST_CASE("extract_features: flipped instances carry higher loss") {
  const auto ex = make_extracted();
  REQUIRE(ex.train.noise_flags.has_value());
  double flipped_sum = 0.0, clean_sum = 0.0;
  std::size_t flipped_n = 0, clean_n = 0;
  for (std::size_t i = 0; i < ex.table.size(); ++i) {
    if ((*ex.train.noise_flags)[i]) {
      flipped_sum += ex.table.raw_loss[i];
      ++flipped_n;
    } else {
      clean_sum += ex.table.raw_loss[i];
      ++clean_n;
    }
  }
  REQUIRE(flipped_n > 0);
  REQUIRE(clean_n > 0);
  CHECK(flipped_sum / flipped_n > clean_sum / clean_n);
}

TEST_CASE("extract_features is a pure function of weights and data") {
  const auto a = make_extracted();
  const auto b = make_extracted();
  CHECK(a.table.raw_loss == b.table.raw_loss);
  CHECK(a.table.raw_er == b.table.raw_er);
  CHECK(a.table.grad_norm == b.table.grad_norm);
  CHECK(a.table.feature_cols == b.table.feature_cols);
}

TEST_CASE("extract_features rejects mismatched shapes") {
  const auto ds = generate_blobs(3, 4, 10, 3.0, 1.0, 23);
  const auto w = init_weights(Arch::softmax_regression, 5, 3, 0, 1);
  CHECK_THROWS_AS(extract_features(w, ds), std::invalid_argument);
}

TEST_CASE("feature table CSV round trip") {
  testutil::TempDir tmp;
  const auto ex = make_extracted();
  const auto path = tmp.file("features.csv");
  save_features_csv(ex.table, path);
  const auto loaded = load_features_csv(path);
  CHECK(loaded.raw_loss == ex.table.raw_loss);
  CHECK(loaded.raw_er == ex.table.raw_er);
  CHECK(loaded.grad_norm == ex.table.grad_norm);
  CHECK(loaded.feature_cols == ex.table.feature_cols);
}
