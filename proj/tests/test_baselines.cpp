// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "baselines.hpp"
#include "search.hpp"

using namespace ssearch;

namespace {

double quadratic_reward(std::span<const double> z, std::span<const double> target) {
  double d2 = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double d = z[j] - target[j];
    d2 += d * d;
  }
  return std::exp(-d2);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

}  // namespace

TEST_CASE("random agent: first proposal is the raw uniform draw") {
  SyntheticEvaluator evaluator(
      [](const SamplerParams&, std::span<const double>) { return 0.5; });
  RandomAgent agent(10);
  SearchOptions options;
  options.outer_steps = 1;
  options.seed = 99;
  const auto run = run_search(agent, evaluator, options);

  Rng rng(mix_seed(99, 0x70726f70));
  std::vector<double> expected(10);
  for (double& v : expected) v = rng.uniform();
  CHECK(run.steps[0].z == expected);
}

TEST_CASE("random agent proposals do not depend on observed scores") {
  SearchOptions options;
  options.outer_steps = 12;
  options.seed = 3;

  SyntheticEvaluator flat(
      [](const SamplerParams&, std::span<const double>) { return 0.25; });
  SyntheticEvaluator varying([](const SamplerParams&, std::span<const double> z) {
    return 0.5 + 0.4 * std::sin(z[0] * 9.0);
  });
  RandomAgent agent_a(10), agent_b(10);
  const auto run_a = run_search(agent_a, flat, options);
  const auto run_b = run_search(agent_b, varying, options);
  REQUIRE(run_a.steps.size() == run_b.steps.size());
  for (std::size_t i = 0; i < run_a.steps.size(); ++i)
    CHECK(run_a.steps[i].z == run_b.steps[i].z);
}

TEST_CASE("rl agent: constant rewards leave the policy mean unchanged") {
  RlConfig cfg;
  RlAgent agent(10, cfg);
  const auto mean_before = agent.policy_mean();
  Rng rng(7);
  for (int step = 0; step < 20; ++step) {
    const auto z = agent.propose(rng);
    agent.observe(z, 0.42);
  }
  for (int j = 0; j < 10; ++j)
    CHECK(agent.policy_mean()[j] == doctest::Approx(mean_before[j]));
  // stddev anneals regardless
  CHECK(agent.policy_stddev()[0] ==
        doctest::Approx(0.25 * std::pow(0.97, 20.0)).epsilon(1e-12));
}

TEST_CASE("rl agent climbs a synthetic quadratic reward") {
  // Single-sample score-function updates are noisy, so the approach to the
  // peak is asserted on the trajectory averaged over 10 seeded runs: the
  // mean distance must shrink on a solid majority of steps and every run
  // must end closer than it started. Thresholds measured on this harness.
  const int steps = 40;
  const std::vector<double> target(10, 0.8);
  std::vector<double> mean_dist(steps + 1, 0.0);
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RlAgent agent(10, RlConfig{});
    Rng rng(seed);
    const double d0 = distance(agent.policy_mean(), target);
    mean_dist[0] += d0;
    for (int step = 1; step <= steps; ++step) {
      const auto z = agent.propose(rng);
      agent.observe(z, quadratic_reward(z, target));
      mean_dist[step] += distance(agent.policy_mean(), target);
    }
    if (distance(agent.policy_mean(), target) < d0) ++improved;
  }
  CHECK(improved == 10);
  int closer = 0;
  for (int s = 1; s <= steps; ++s)
    if (mean_dist[s] < mean_dist[s - 1]) ++closer;
  CHECK(closer >= 22);  // measured 26/40; hovering sets in after convergence
  CHECK(mean_dist[steps] <= 0.8 * mean_dist[0]);
}

TEST_CASE("rl agent respects the stddev floor and the cube") {
  RlConfig cfg;
  cfg.stddev_init = 0.03;
  cfg.stddev_floor = 0.02;
  cfg.learning_rate = 5.0;  // exaggerate updates to hit the clamps
  RlAgent agent(4, cfg);
  Rng rng(13);
  for (int step = 0; step < 60; ++step) {
    const auto z = agent.propose(rng);
    for (double v : z) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    agent.observe(z, step % 2 == 0 ? 1.0 : 0.0);
    for (double m : agent.policy_mean()) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
  for (double s : agent.policy_stddev()) CHECK(s == doctest::Approx(0.02));
}

TEST_CASE("rl search is deterministic under seed") {
  SyntheticEvaluator evaluator([](const SamplerParams&, std::span<const double> z) {
    return quadratic_reward(z, std::vector<double>(10, 0.3));
  });
  SearchOptions options;
  options.outer_steps = 15;
  options.seed = 17;
  RlAgent agent_a(10, RlConfig{}), agent_b(10, RlConfig{});
  const auto run_a = run_search(agent_a, evaluator, options);
  const auto run_b = run_search(agent_b, evaluator, options);
  for (std::size_t i = 0; i < run_a.steps.size(); ++i) {
    CHECK(run_a.steps[i].z == run_b.steps[i].z);
    CHECK(run_a.steps[i].q == run_b.steps[i].q);
  }
}

TEST_CASE("all agents consume exactly the same evaluation budget") {
  int evaluations = 0;
  SyntheticEvaluator counting([&](const SamplerParams&, std::span<const double> z) {
    ++evaluations;
    return 0.5 * (1.0 + std::cos(z[0]));
  });
  SearchOptions options;
  options.outer_steps = 9;
  options.seed = 23;

  BoAgent bo(10, GpConfig{});
  options.insert_reference = true;
  const auto run_bo = run_search(bo, counting, options);
  CHECK(evaluations == 9);
  CHECK(run_bo.steps.size() == 9);

  evaluations = 0;
  options.insert_reference = false;
  RandomAgent random(10);
  const auto run_rand = run_search(random, counting, options);
  CHECK(evaluations == 9);
  CHECK(run_rand.steps.size() == 9);

  evaluations = 0;
  RlAgent rl(10, RlConfig{});
  const auto run_rl = run_search(rl, counting, options);
  CHECK(evaluations == 9);
  CHECK(run_rl.steps.size() == 9);
}
