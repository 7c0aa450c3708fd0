// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "errors.hpp"
#include "metrics.hpp"

namespace ssearch {

namespace {

namespace fs = std::filesystem;

void ensure_parent_dir(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Loads the three splits named by the config.
struct Splits {
  Dataset train, val, test;
};

Splits load_splits(const RunConfig& cfg) {
  return {load(cfg.train_path()), load(cfg.val_path()), load(cfg.test_path())};
}

// Generates, corrupts and saves the three splits from the data section.
// Label noise goes into the train split only; val/test stay clean so the
// measured accuracies reflect the true task.
Splits generate_and_save_splits(const RunConfig& cfg) {
  const auto full = generate_blobs(cfg.data.num_classes, cfg.data.dim,
                                   cfg.data.per_class, cfg.data.separation,
                                   cfg.data.spread, cfg.seed);
  auto parts = split(full, cfg.data.split, mix_seed(cfg.seed, 1));
  parts[0] = inject_label_noise(parts[0], cfg.data.noise_rate, mix_seed(cfg.seed, 2));
  ensure_parent_dir(cfg.train_path());
  save(parts[0], cfg.train_path());
  save(parts[1], cfg.val_path());
  save(parts[2], cfg.test_path());
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

// load when present, generate when wholly absent; partial data is an error
// (a misconfigured path should not be silently papered over).
Splits obtain_splits(const RunConfig& cfg) {
  const bool have_train = fs::exists(cfg.train_path());
  const bool have_val = fs::exists(cfg.val_path());
  const bool have_test = fs::exists(cfg.test_path());
  if (have_train && have_val && have_test) return load_splits(cfg);
  if (!have_train && !have_val && !have_test) return generate_and_save_splits(cfg);
  throw IoError("dataset splits are partially present under " + cfg.out_dir +
                "; run gen-data or fix the configured paths");
}

// Checkpoint and feature table: load if present, otherwise build and save.
ModelWeights obtain_checkpoint(const RunConfig& cfg, const Dataset& train_set,
                               const Dataset& val_set) {
  if (fs::exists(cfg.checkpoint_path()))
    return load_checkpoint(cfg.checkpoint_path());
  const auto pre = pretrain_shared(train_set, val_set,
                                   cfg.to_search_config(cfg.search.transform));
  ensure_parent_dir(cfg.checkpoint_path());
  save_checkpoint(pre.weights, cfg.checkpoint_path());
  return pre.weights;
}

FeatureTable obtain_features(const RunConfig& cfg, const ModelWeights& w_share,
                             const Dataset& train_set) {
  if (fs::exists(cfg.features_path()))
    return load_features_csv(cfg.features_path());
  auto table = extract_features(w_share, train_set);
  ensure_parent_dir(cfg.features_path());
  save_features_csv(table, cfg.features_path());
  return table;
}

// Streams one observation per line; flushed per step so an aborted run
// keeps the history of every candidate it evaluated.
class ObsLogWriter {
 public:
  explicit ObsLogWriter(const std::string& path) {
    ensure_parent_dir(path);
    out_.open(path);
    if (!out_) throw IoError("cannot open for write: " + path);
  }

  void operator()(const StepRecord& rec) {
    nlohmann::json line;
    line["step"] = rec.step;
    line["z"] = rec.z;
    line["q"] = rec.q;
    line["wall_time_s"] = rec.wall_time_s;
    out_ << line.dump() << std::endl;  // endl: flush each observation
  }

 private:
  std::ofstream out_;
};

}  // namespace

void strip_wall_times(nlohmann::json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      if (it.key().rfind("wall_time", 0) == 0) {
        it = j.erase(it);
      } else {
        strip_wall_times(it.value());
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& item : j) strip_wall_times(item);
  }
}

std::string semantic_dump(const nlohmann::json& j) {
  nlohmann::json copy = j;
  strip_wall_times(copy);
  return copy.dump();
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return nlohmann::json::parse(in);
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json search_run_to_json(const SearchRunResult& run) {
  nlohmann::json j;
  j["agent"] = run.agent;
  j["transform"] = to_string(run.transform);
  j["seed"] = run.seed;
  j["best"] = {{"step", run.best_step},
               {"q", run.best_q},
               {"params", sampler_to_json(run.best_params)}};
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& rec : run.steps) {
    nlohmann::json s;
    s["step"] = rec.step;
    s["z"] = rec.z;
    s["params"] = sampler_to_json(rec.params);
    s["q"] = rec.q;
    s["degenerate"] = rec.degenerate;
    s["reference"] = rec.reference;
    s["wall_time_s"] = rec.wall_time_s;
    steps.push_back(std::move(s));
  }
  j["wall_time_s"] = run.wall_time_s;
  return j;
}

SearchRunResult search_run_from_json(const nlohmann::json& j) {
  SearchRunResult run;
  run.agent = j.at("agent").get<std::string>();
  run.transform = transform_mode_from_string(j.at("transform").get<std::string>());
  run.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& s : j.at("steps")) {
    StepRecord rec;
    rec.step = s.at("step").get<int>();
    rec.z = s.at("z").get<std::vector<double>>();
    rec.params = sampler_from_json(s.at("params"));
    rec.q = s.at("q").get<double>();
    rec.degenerate = s.at("degenerate").get<bool>();
    rec.reference = s.at("reference").get<bool>();
    run.steps.push_back(std::move(rec));
  }
  run.best_step = j.at("best").at("step").get<int>();
  run.best_q = j.at("best").at("q").get<double>();
  run.best_params = sampler_from_json(j.at("best").at("params"));
  return run;
}

nlohmann::json cmd_gen_data(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(cfg.out_dir);
  const auto parts = generate_and_save_splits(cfg);

  nlohmann::json j;
  j["command"] = "gen-data";
  j["config"] = cfg.original;
  j["seed"] = cfg.seed;
  j["train"] = {{"path", cfg.train_path()}, {"count", parts.train.size()}};
  j["val"] = {{"path", cfg.val_path()}, {"count", parts.val.size()}};
  j["test"] = {{"path", cfg.test_path()}, {"count", parts.test.size()}};
  j["wall_time_s"] = seconds_since(t0);
  write_json_file(j, cfg.out_dir + "/gen_data.json");
  return j;
}

nlohmann::json cmd_pretrain(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto train_set = load(cfg.train_path());
  const auto val_set = load(cfg.val_path());
  const auto pre = pretrain_shared(train_set, val_set,
                                   cfg.to_search_config(cfg.search.transform));
  ensure_parent_dir(cfg.checkpoint_path());
  save_checkpoint(pre.weights, cfg.checkpoint_path());

  nlohmann::json j;
  j["command"] = "pretrain";
  j["config"] = cfg.original;
  j["seed"] = cfg.seed;
  j["checkpoint"] = cfg.checkpoint_path();
  j["val_acc"] = pre.val_acc;
  j["wall_time_s"] = pre.wall_time_s;
  write_json_file(j, cfg.pretrain_result_path());
  return j;
}

nlohmann::json cmd_features(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(cfg.out_dir);
  const auto train_set = load(cfg.train_path());
  const auto w_pre = load_checkpoint(cfg.checkpoint_path());
  const auto table = extract_features(w_pre, train_set);
  ensure_parent_dir(cfg.features_path());
  save_features_csv(table, cfg.features_path());

  nlohmann::json j;
  j["command"] = "features";
  j["config"] = cfg.original;
  j["seed"] = cfg.seed;
  j["features"] = cfg.features_path();
  j["count"] = table.size();
  j["wall_time_s"] = seconds_since(t0);
  write_json_file(j, cfg.out_dir + "/features_meta.json");
  return j;
}

nlohmann::json cmd_search(const RunConfig& cfg, const std::string& agent,
                          const std::string& transform) {
  if (agent != "ss" && agent != "random" && agent != "rl")
    throw std::invalid_argument("agent must be one of ss|random|rl");
  // An empty transform defers to the config's search.transform.
  const TransformMode mode = transform.empty()
                                 ? cfg.search.transform
                                 : transform_mode_from_string(transform);
  ensure_dir(cfg.out_dir);

  const auto splits = obtain_splits(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const ModelWeights w_share = obtain_checkpoint(cfg, splits.train, splits.val);
  const double baseline_acc = evaluate(w_share, splits.val);
  const FeatureTable table = obtain_features(cfg, w_share, splits.train);
  const double prep_s = seconds_since(t0);

  const SearchConfig sc = cfg.to_search_config(mode);
  ObsLogWriter obs_log(cfg.obs_log_path(agent, mode));
  const auto on_step = [&obs_log](const StepRecord& rec) { obs_log(rec); };
  SearchRunResult run;
  if (agent == "ss") {
    run = run_ss(sc, splits.train, splits.val, w_share, table, on_step);
  } else if (agent == "random") {
    run = random_search(sc, splits.train, splits.val, w_share, table, on_step);
  } else {
    run = rl_search(sc, cfg.rl, splits.train, splits.val, w_share, table, on_step);
  }

  const auto final_run =
      retrain_final(splits.train, splits.val, &splits.test, run.best_params,
                    table, sc, cfg.seed);

  // Top candidates by fine-tune score (ties keep the earlier step).
  std::vector<const StepRecord*> ranked;
  for (const auto& rec : run.steps)
    if (!rec.degenerate) ranked.push_back(&rec);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const StepRecord* a, const StepRecord* b) {
                     return a->q > b->q;
                   });
  if (ranked.size() > static_cast<std::size_t>(sc.top_k))
    ranked.resize(static_cast<std::size_t>(sc.top_k));

  nlohmann::json j = search_run_to_json(run);
  j["command"] = "search";
  j["config"] = cfg.original;
  auto& top = j["top_candidates"] = nlohmann::json::array();
  for (const auto* rec : ranked)
    top.push_back({{"step", rec->step},
                   {"q", rec->q},
                   {"params", sampler_to_json(rec->params)}});
  j["baseline_acc"] = baseline_acc;
  j["final_retrain"] = {{"val_acc", final_run.val_acc},
                        {"test_acc", final_run.test_acc},
                        {"wall_time_s", final_run.wall_time_s}};
  j["wall_time_prep_s"] = prep_s;
  write_json_file(j, cfg.search_result_path(agent, mode));
  save_sampler(run.best_params, cfg.best_sampler_path(agent, mode));
  return j;
}

nlohmann::json cmd_retrain(const RunConfig& cfg, const std::string& sampler_path) {
  ensure_dir(cfg.out_dir);
  const auto splits = load_splits(cfg);
  const auto params = load_sampler(sampler_path);
  const auto w_share = load_checkpoint(cfg.checkpoint_path());
  const auto table = obtain_features(cfg, w_share, splits.train);
  const auto sc = cfg.to_search_config(params.transform_mode);
  const auto result = retrain_final(splits.train, splits.val, &splits.test,
                                    params, table, sc, cfg.seed);

  nlohmann::json j;
  j["command"] = "retrain";
  j["config"] = cfg.original;
  j["seed"] = cfg.seed;
  j["sampler"] = sampler_to_json(params);
  j["val_acc"] = result.val_acc;
  j["test_acc"] = result.test_acc;
  j["wall_time_s"] = result.wall_time_s;
  write_json_file(j, cfg.out_dir + "/retrain.json");
  return j;
}

nlohmann::json cmd_sr_tr(const RunConfig& cfg, const std::string& result_path) {
  ensure_dir(cfg.out_dir);
  const auto result_doc = read_json_file(result_path);
  const auto run = search_run_from_json(result_doc);
  const auto splits = load_splits(cfg);
  const auto w_share = load_checkpoint(cfg.checkpoint_path());
  const auto table = obtain_features(cfg, w_share, splits.train);
  const auto sc = cfg.to_search_config(run.transform);
  const auto t0 = std::chrono::steady_clock::now();
  const auto report =
      sr_tr_study(run, cfg.search.sr_tr_last, splits.train, splits.val, table, sc);

  nlohmann::json j;
  j["command"] = "sr-tr";
  j["config"] = cfg.original;
  j["seed"] = cfg.seed;
  j["source"] = result_path;
  j["steps"] = report.steps;
  j["approx_q"] = report.approx_q;
  j["truth_acc"] = report.truth_acc;
  j["approx_rank"] = report.approx_rank;
  j["truth_rank"] = report.truth_rank;
  j["sr"] = report.sr;
  j["tr"] = report.tr;
  j["wall_time_s"] = seconds_since(t0);
  write_json_file(j, cfg.out_dir + "/rank_report.json");
  return j;
}

namespace {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json cmd_report(std::span<const std::string> result_paths,
                          const std::string& out_dir) {
  if (result_paths.empty())
    throw std::invalid_argument("report needs at least one result file");
  ensure_dir(out_dir);

  std::ofstream curves(out_dir + "/best_so_far.csv");
  if (!curves) throw IoError("cannot open for write: " + out_dir + "/best_so_far.csv");
  curves << "agent,transform,seed,step,q,best_q\n";

  std::ofstream acc(out_dir + "/accuracy_summary.csv");
  if (!acc) throw IoError("cannot open for write: " + out_dir + "/accuracy_summary.csv");
  acc << "agent,transform,seed,baseline_acc,best_q,final_val_acc,final_test_acc,"
         "delta_val\n";

  std::ofstream probs(out_dir + "/probability_summary.csv");
  if (!probs)
    throw IoError("cannot open for write: " + out_dir + "/probability_summary.csv");
  probs << "agent,transform,seed,mean_prob_clean,mean_prob_flipped,ratio\n";

  nlohmann::json summary;
  summary["command"] = "report";
  summary["runs"] = nlohmann::json::array();

  for (const auto& path : result_paths) {
    const auto doc = read_json_file(path);
    const auto run = search_run_from_json(doc);
    const auto curve = best_so_far(run);
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      curves << run.agent << "," << to_string(run.transform) << "," << run.seed
             << "," << run.steps[i].step << "," << csv_num(run.steps[i].q) << ","
             << csv_num(curve[i]) << "\n";
    }

    const double baseline = doc.value("baseline_acc", 0.0);
    const double final_val =
        doc.contains("final_retrain") ? doc["final_retrain"].value("val_acc", 0.0) : 0.0;
    const double final_test =
        doc.contains("final_retrain") ? doc["final_retrain"].value("test_acc", 0.0) : 0.0;
    acc << run.agent << "," << to_string(run.transform) << "," << run.seed << ","
        << csv_num(baseline) << "," << csv_num(run.best_q) << ","
        << csv_num(final_val) << "," << csv_num(final_test) << ","
        << csv_num(final_val - baseline) << "\n";

    // The sampled-probability contrast needs the run's own dataset and
    // features, resolved from its embedded config.
    if (doc.contains("config")) {
      const RunConfig run_cfg = parse_run_config(doc.at("config"));
      const auto train_set = load(run_cfg.train_path());
      if (train_set.noise_flags) {
        const auto table = load_features_csv(run_cfg.features_path());
        const auto p = sampler_probabilities(run.best_params, table);
        const auto [clean_mean, flipped_mean] =
            clean_flipped_mean_prob(p, *train_set.noise_flags);
        probs << run.agent << "," << to_string(run.transform) << "," << run.seed
              << "," << csv_num(clean_mean) << "," << csv_num(flipped_mean) << ","
              << csv_num(clean_mean > 0 ? flipped_mean / clean_mean : 0.0) << "\n";
      }
    }

    nlohmann::json row;
    row["path"] = path;
    row["agent"] = run.agent;
    row["transform"] = to_string(run.transform);
    row["seed"] = run.seed;
    row["best_q"] = run.best_q;
    summary["runs"].push_back(std::move(row));
  }
  summary["out_dir"] = out_dir;
  write_json_file(summary, out_dir + "/report.json");
  return summary;
}

}  // namespace ssearch
