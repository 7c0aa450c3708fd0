// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "errors.hpp"
#include "test_util.hpp"

using namespace ssearch;

namespace {

// Tiny but complete configuration; runs the whole pipeline in ~a second.
nlohmann::json tiny_config(const std::string& out_dir, std::uint64_t seed = 5) {
  nlohmann::json j;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["data"] = {{"num_classes", 4},   {"dim", 6},        {"per_class", 90},
               {"separation", 4.0},  {"spread", 1.0},   {"noise_rate", 0.3},
               {"split", {0.7, 0.15, 0.15}}};
  j["model"] = {{"arch", "softmax_regression"}, {"hidden", 0}};
  j["pretrain"] = {{"epochs", 10}, {"lr", 0.2}, {"batch_size", 32},
                   {"lr_decay_epochs", {8}}};
  j["search"] = {{"outer_steps", 5}, {"finetune_epochs", 2}, {"sr_tr_last", 3}};
  j["gp"] = {{"n_init", 3}, {"acq_candidates", 64}, {"acq_refine_top", 2}};
  return j;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
  auto doc = tiny_config("x");
  CHECK_NOTHROW(parse_run_config(doc));
  doc["serach"] = nlohmann::json::object();  // typo
  CHECK_THROWS_AS(parse_run_config(doc), std::invalid_argument);
  doc.erase("serach");
  doc["gp"]["kappa"] = 2.0;  // wrong key name
  CHECK_THROWS_AS(parse_run_config(doc), std::invalid_argument);
  doc["gp"].erase("kappa");
  doc["search"]["top_k"] = 100;  // > outer_steps
  CHECK_THROWS_AS(parse_run_config(doc), std::invalid_argument);
}

TEST_CASE("finetune lr defaults to the pretrain schedule's final lr") {
  const auto cfg = parse_run_config(tiny_config("x"));
  CHECK(cfg.finetune.lr == doctest::Approx(0.2 * 0.1));
  CHECK(cfg.finetune.lr_decay_epochs.empty());
}

TEST_CASE("full pipeline produces every artifact") {
  testutil::TempDir tmp;
  const auto cfg = parse_run_config(tiny_config(tmp.file("run")));

  const auto gen = cmd_gen_data(cfg);
  CHECK(gen["train"]["count"].get<int>() == 252);
  CHECK(std::filesystem::exists(cfg.train_path()));
  CHECK(std::filesystem::exists(cfg.train_path() + ".json"));

  const auto pre = cmd_pretrain(cfg);
  CHECK(pre["val_acc"].get<double>() > 0.5);
  CHECK(std::filesystem::exists(cfg.checkpoint_path()));

  const auto feat = cmd_features(cfg);
  CHECK(feat["count"].get<int>() == 252);
  CHECK(std::filesystem::exists(cfg.features_path()));

  const auto search = cmd_search(cfg, "ss", "cgf");
  CHECK(search["steps"].size() == 5);
  CHECK(search["config"] == cfg.original);  // provenance
  CHECK(search.contains("baseline_acc"));
  CHECK(search.contains("final_retrain"));
  CHECK(std::filesystem::exists(cfg.search_result_path("ss", TransformMode::cgf)));
  CHECK(std::filesystem::exists(cfg.obs_log_path("ss", TransformMode::cgf)));
  CHECK(std::filesystem::exists(cfg.best_sampler_path("ss", TransformMode::cgf)));

  // observation log: one line per step
  std::ifstream log(cfg.obs_log_path("ss", TransformMode::cgf));
  std::string line;
  int lines = 0;
  while (std::getline(log, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 5);

  const auto retrain =
      cmd_retrain(cfg, cfg.best_sampler_path("ss", TransformMode::cgf));
  CHECK(retrain["val_acc"].get<double>() > 0.3);

  const auto srtr =
      cmd_sr_tr(cfg, cfg.search_result_path("ss", TransformMode::cgf));
  CHECK(srtr["truth_acc"].size() == 3);
  CHECK(srtr["tr"].get<int>() >= 1);

  const std::vector<std::string> results{
      cfg.search_result_path("ss", TransformMode::cgf)};
  const auto report = cmd_report(results, tmp.file("run/report"));
  CHECK(std::filesystem::exists(tmp.file("run/report/best_so_far.csv")));
  CHECK(std::filesystem::exists(tmp.file("run/report/accuracy_summary.csv")));
  CHECK(std::filesystem::exists(tmp.file("run/report/probability_summary.csv")));

  std::ifstream curves(tmp.file("run/report/best_so_far.csv"));
  lines = 0;
  while (std::getline(curves, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 6);  // header + one row per step
}

TEST_CASE("pipeline reruns are semantically byte-identical") {
  testutil::TempDir tmp;
  const auto cfg = parse_run_config(tiny_config(tmp.file("run")));

  cmd_gen_data(cfg);
  cmd_pretrain(cfg);
  cmd_features(cfg);
  const auto first = cmd_search(cfg, "ss", "cgf");
  const auto first_train = [&] {
    std::ifstream in(cfg.train_path());
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();

  // identical config: overwrite everything and compare
  cmd_gen_data(cfg);
  cmd_pretrain(cfg);
  cmd_features(cfg);
  const auto second = cmd_search(cfg, "ss", "cgf");
  const auto second_train = [&] {
    std::ifstream in(cfg.train_path());
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();

  CHECK(first_train == second_train);  // dataset stage is exactly reproducible
  CHECK(semantic_dump(first) == semantic_dump(second));
  CHECK(semantic_dump(first) != semantic_dump(nlohmann::json::object()));
}

TEST_CASE("search rejects unknown agents and random/rl agents run") {
  testutil::TempDir tmp;
  const auto cfg = parse_run_config(tiny_config(tmp.file("run")));
  cmd_gen_data(cfg);
  cmd_pretrain(cfg);
  cmd_features(cfg);
  CHECK_THROWS_AS(cmd_search(cfg, "annealing", "cgf"), std::invalid_argument);
  CHECK_THROWS_AS(cmd_search(cfg, "ss", "sigmoid"), std::invalid_argument);

  const auto random_run = cmd_search(cfg, "random", "cgf");
  CHECK(random_run["agent"] == "random");
  const auto rl_run = cmd_search(cfg, "rl", "cdf");
  CHECK(rl_run["agent"] == "rl");
  CHECK(rl_run["transform"] == "cdf");

  // an empty transform defers to the config's search.transform
  auto doc = tiny_config(tmp.file("run2"));
  doc["search"]["transform"] = "cdf";
  const auto cdf_cfg = parse_run_config(doc);
  cmd_gen_data(cdf_cfg);
  const auto deferred = cmd_search(cdf_cfg, "random", "");
  CHECK(deferred["transform"] == "cdf");
}

TEST_CASE("search builds all missing artifacts on a fresh directory") {
  testutil::TempDir tmp;
  const auto cfg = parse_run_config(tiny_config(tmp.file("fresh")));
  const auto run = cmd_search(cfg, "ss", "cgf");
  CHECK(run["steps"].size() == 5);
  CHECK(std::filesystem::exists(cfg.train_path()));
  CHECK(std::filesystem::exists(cfg.checkpoint_path()));
  CHECK(std::filesystem::exists(cfg.features_path()));

  // equals the explicit staged pipeline on a second directory
  auto doc = tiny_config(tmp.file("staged"));
  const auto staged_cfg = parse_run_config(doc);
  cmd_gen_data(staged_cfg);
  cmd_pretrain(staged_cfg);
  cmd_features(staged_cfg);
  const auto staged = cmd_search(staged_cfg, "ss", "cgf");
  CHECK(staged["best"]["q"] == run["best"]["q"]);
  CHECK(staged["baseline_acc"] == run["baseline_acc"]);

  // partially present data is refused rather than regenerated
  std::filesystem::remove(staged_cfg.val_path());
  CHECK_THROWS_AS(cmd_search(staged_cfg, "ss", "cgf"), IoError);
}

TEST_CASE("search run JSON round trip") {
  testutil::TempDir tmp;
  const auto cfg = parse_run_config(tiny_config(tmp.file("run")));
  cmd_gen_data(cfg);
  cmd_pretrain(cfg);
  cmd_features(cfg);
  const auto doc = cmd_search(cfg, "ss", "cgf");
  const auto run = search_run_from_json(doc);
  CHECK(run.agent == "ss");
  CHECK(run.steps.size() == 5);
  CHECK(run.best_q == doc["best"]["q"].get<double>());
  const auto round = search_run_to_json(run);
  CHECK(round["best"]["params"] == doc["best"]["params"]);
}

#ifdef SAMPLER_SEARCH_BIN
TEST_CASE("CLI binary: gen-data succeeds and bad config fails with error JSON") {
  testutil::TempDir tmp;
  const auto config_path = tmp.file("config.json");
  {
    std::ofstream out(config_path);
    out << tiny_config(tmp.file("run")).dump(2);
  }
  const std::string bin = SAMPLER_SEARCH_BIN;
  const std::string quiet = " > " + tmp.file("stdout.txt") + " 2> " + tmp.file("stderr.txt");
  CHECK(std::system((bin + " gen-data --config " + config_path + quiet).c_str()) == 0);
  CHECK(std::filesystem::exists(tmp.file("run/train.csv")));

  // config with an unknown key: nonzero exit, machine-readable error JSON
  const auto bad_path = tmp.file("bad.json");
  {
    auto bad = tiny_config(tmp.file("run2"));
    bad["nonsense"] = 1;
    std::ofstream out(bad_path);
    out << bad.dump(2);
  }
  CHECK(std::system((bin + " gen-data --config " + bad_path + quiet).c_str()) != 0);
  std::ifstream err(tmp.file("stderr.txt"));
  const std::string err_text(std::istreambuf_iterator<char>(err), {});
  const auto parsed = nlohmann::json::parse(err_text);
  CHECK(parsed["error"]["status"] == "invalid_argument");
}
#endif
