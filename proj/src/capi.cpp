// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#include "sampler_search.h"

#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "errors.hpp"
#include "search.hpp"

using namespace ssearch;

// Opaque handle definitions: thin owners around the core types.
struct ss_dataset {
  Dataset value;
};
struct ss_weights {
  ModelWeights value;
};
struct ss_features {
  FeatureTable value;
};
struct ss_sampler {
  SamplerParams value;
};

namespace {

thread_local std::string g_last_error;

const char* status_names[] = {"ok", "invalid_argument", "io", "parse",
                              "degenerate_sampler", "internal"};

ss_status fail(ss_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
ss_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SS_OK;
  } catch (const DegenerateSamplerError& e) {
    return fail(SS_ERR_DEGENERATE_SAMPLER, e.what());
  } catch (const IoError& e) {
    return fail(SS_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SS_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SS_ERR_INTERNAL, "unknown error");
  }
}

ss_status require(bool ok, const char* what) {
  return ok ? SS_OK : fail(SS_ERR_INVALID_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit_result(const nlohmann::json& j, char** out) {
  if (out) *out = dup_string(j.dump(2));
}

}  // namespace

extern "C" {

const char* ss_status_name(ss_status status) {
  const int i = static_cast<int>(status);
  if (i < 0 || i > SS_ERR_INTERNAL) return "unknown";
  return status_names[i];
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

const char* ss_version(void) { return "0.1.0"; }

/* ---- datasets ---------------------------------------------------- */

ss_status ss_dataset_generate_blobs(int num_classes, int dim, int per_class,
                                    double separation, double spread,
                                    uint64_t seed, ss_dataset** out) {
  if (ss_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = new ss_dataset{
        generate_blobs(num_classes, dim, per_class, separation, spread, seed)};
  });
}

ss_status ss_dataset_inject_noise(const ss_dataset* in, double rate,
                                  uint64_t seed, ss_dataset** out) {
  if (ss_status s = require(in && out, "in/out must not be NULL")) return s;
  return guarded([&] {
    *out = new ss_dataset{inject_label_noise(in->value, rate, seed)};
  });
}

ss_status ss_dataset_split(const ss_dataset* in, double train_frac,
                           double val_frac, double test_frac, uint64_t seed,
                           ss_dataset** train_out, ss_dataset** val_out,
                           ss_dataset** test_out) {
  if (ss_status s = require(in && train_out && val_out && test_out,
                            "in/out handles must not be NULL"))
    return s;
  return guarded([&] {
    auto parts = split(in->value, {train_frac, val_frac, test_frac}, seed);
    *train_out = new ss_dataset{std::move(parts[0])};
    *val_out = new ss_dataset{std::move(parts[1])};
    *test_out = new ss_dataset{std::move(parts[2])};
  });
}

ss_status ss_dataset_save(const ss_dataset* ds, const char* csv_path) {
  if (ss_status s = require(ds && csv_path, "ds/path must not be NULL")) return s;
  return guarded([&] { save(ds->value, csv_path); });
}

ss_status ss_dataset_load(const char* csv_path, ss_dataset** out) {
  if (ss_status s = require(csv_path && out, "path/out must not be NULL")) return s;
  return guarded([&] { *out = new ss_dataset{load(csv_path)}; });
}

size_t ss_dataset_size(const ss_dataset* ds) { return ds ? ds->value.size() : 0; }
int ss_dataset_dim(const ss_dataset* ds) { return ds ? ds->value.dim : 0; }
int ss_dataset_num_classes(const ss_dataset* ds) {
  return ds ? ds->value.num_classes : 0;
}
void ss_dataset_free(ss_dataset* ds) { delete ds; }

/* ---- model checkpoints ------------------------------------------- */

ss_status ss_weights_load(const char* path, ss_weights** out) {
  if (ss_status s = require(path && out, "path/out must not be NULL")) return s;
  return guarded([&] { *out = new ss_weights{load_checkpoint(path)}; });
}

ss_status ss_weights_save(const ss_weights* w, const char* path) {
  if (ss_status s = require(w && path, "weights/path must not be NULL")) return s;
  return guarded([&] { save_checkpoint(w->value, path); });
}

ss_status ss_weights_evaluate(const ss_weights* w, const ss_dataset* ds,
                              double* accuracy_out) {
  if (ss_status s = require(w && ds && accuracy_out,
                            "weights/dataset/out must not be NULL"))
    return s;
  return guarded([&] { *accuracy_out = evaluate(w->value, ds->value); });
}

void ss_weights_free(ss_weights* w) { delete w; }

/* ---- feature tables ----------------------------------------------- */

ss_status ss_features_extract(const ss_weights* pretrained,
                              const ss_dataset* train_set, ss_features** out) {
  if (ss_status s = require(pretrained && train_set && out,
                            "weights/dataset/out must not be NULL"))
    return s;
  return guarded([&] {
    *out = new ss_features{extract_features(pretrained->value, train_set->value)};
  });
}

ss_status ss_features_save_csv(const ss_features* table, const char* path) {
  if (ss_status s = require(table && path, "table/path must not be NULL")) return s;
  return guarded([&] { save_features_csv(table->value, path); });
}

ss_status ss_features_load_csv(const char* path, ss_features** out) {
  if (ss_status s = require(path && out, "path/out must not be NULL")) return s;
  return guarded([&] { *out = new ss_features{load_features_csv(path)}; });
}

size_t ss_features_size(const ss_features* table) {
  return table ? table->value.size() : 0;
}

void ss_features_free(ss_features* table) { delete table; }

/* ---- samplers ------------------------------------------------------ */

ss_status ss_sampler_load(const char* json_path, ss_sampler** out) {
  if (ss_status s = require(json_path && out, "path/out must not be NULL")) return s;
  return guarded([&] { *out = new ss_sampler{load_sampler(json_path)}; });
}

ss_status ss_sampler_save(const ss_sampler* s, const char* json_path) {
  if (ss_status st = require(s && json_path, "sampler/path must not be NULL"))
    return st;
  return guarded([&] { save_sampler(s->value, json_path); });
}

ss_status ss_sampler_probabilities(const ss_sampler* s, const ss_features* table,
                                   double* probs_out) {
  if (ss_status st = require(s && table && probs_out,
                             "sampler/table/out must not be NULL"))
    return st;
  return guarded([&] {
    const auto probs = sampler_probabilities(s->value, table->value);
    std::memcpy(probs_out, probs.data(), probs.size() * sizeof(double));
  });
}

void ss_sampler_free(ss_sampler* s) { delete s; }

/* ---- config-driven pipeline commands ------------------------------ */

namespace {

RunConfig config_from_text(const char* config_json) {
  return parse_run_config(nlohmann::json::parse(config_json));
}

}  // namespace

ss_status ss_cmd_gen_data(const char* config_json, char** result_json_out) {
  if (ss_status s = require(config_json, "config must not be NULL")) return s;
  return guarded([&] { emit_result(cmd_gen_data(config_from_text(config_json)),
                                   result_json_out); });
}

ss_status ss_cmd_pretrain(const char* config_json, char** result_json_out) {
  if (ss_status s = require(config_json, "config must not be NULL")) return s;
  return guarded([&] { emit_result(cmd_pretrain(config_from_text(config_json)),
                                   result_json_out); });
}

ss_status ss_cmd_features(const char* config_json, char** result_json_out) {
  if (ss_status s = require(config_json, "config must not be NULL")) return s;
  return guarded([&] { emit_result(cmd_features(config_from_text(config_json)),
                                   result_json_out); });
}

ss_status ss_cmd_search(const char* config_json, const char* agent,
                        const char* transform, char** result_json_out) {
  if (ss_status s = require(config_json && agent && transform,
                            "config/agent/transform must not be NULL"))
    return s;
  return guarded([&] {
    emit_result(cmd_search(config_from_text(config_json), agent, transform),
                result_json_out);
  });
}

ss_status ss_cmd_retrain(const char* config_json, const char* sampler_json_path,
                         char** result_json_out) {
  if (ss_status s = require(config_json && sampler_json_path,
                            "config/sampler path must not be NULL"))
    return s;
  return guarded([&] {
    emit_result(cmd_retrain(config_from_text(config_json), sampler_json_path),
                result_json_out);
  });
}

ss_status ss_cmd_sr_tr(const char* config_json, const char* result_json_path,
                       char** result_json_out) {
  if (ss_status s = require(config_json && result_json_path,
                            "config/result path must not be NULL"))
    return s;
  return guarded([&] {
    emit_result(cmd_sr_tr(config_from_text(config_json), result_json_path),
                result_json_out);
  });
}

ss_status ss_cmd_report(const char* const* result_paths, size_t n_paths,
                        const char* out_dir, char** result_json_out) {
  if (ss_status s = require(result_paths && n_paths > 0 && out_dir,
                            "paths/out_dir must not be NULL or empty"))
    return s;
  return guarded([&] {
    std::vector<std::string> paths(result_paths, result_paths + n_paths);
    emit_result(cmd_report(paths, out_dir), result_json_out);
  });
}

void ss_string_free(char* s) { delete[] s; }

}  // extern "C"
