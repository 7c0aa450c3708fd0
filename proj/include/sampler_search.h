/* Copyright (c) 2026 the samplersearch authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the samplersearch engine. The library learns a low-dimensional
 * sampling-probability function over training instances (Gaussian-process
 * search in the outer loop, short fine-tunes from a shared checkpoint in
 * the inner loop) and retrains a small classifier with the found sampler.
 *
 * Conventions: every fallible function returns an ss_status; on failure
 * ss_last_error() holds a human-readable message for the calling thread.
 * Objects are opaque handles created by the library and released with the
 * matching *_free function (free functions accept NULL).
 */
#ifndef SAMPLERSEARCH_SAMPLER_SEARCH_H
#define SAMPLERSEARCH_SAMPLER_SEARCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_IO = 2,
  SS_ERR_PARSE = 3,
  SS_ERR_DEGENERATE_SAMPLER = 4,
  SS_ERR_INTERNAL = 5
} ss_status;

const char* ss_status_name(ss_status status);
const char* ss_last_error(void);
const char* ss_version(void);

/* ---- datasets ---------------------------------------------------- */

typedef struct ss_dataset ss_dataset;

ss_status ss_dataset_generate_blobs(int num_classes, int dim, int per_class,
                                    double separation, double spread,
                                    uint64_t seed, ss_dataset** out);
ss_status ss_dataset_inject_noise(const ss_dataset* in, double rate,
                                  uint64_t seed, ss_dataset** out);
/* fractions must be positive and sum to 1. */
ss_status ss_dataset_split(const ss_dataset* in, double train_frac,
                           double val_frac, double test_frac, uint64_t seed,
                           ss_dataset** train_out, ss_dataset** val_out,
                           ss_dataset** test_out);
/* CSV plus "<path>.json" sidecar. */
ss_status ss_dataset_save(const ss_dataset* ds, const char* csv_path);
ss_status ss_dataset_load(const char* csv_path, ss_dataset** out);
size_t ss_dataset_size(const ss_dataset* ds);
int ss_dataset_dim(const ss_dataset* ds);
int ss_dataset_num_classes(const ss_dataset* ds);
void ss_dataset_free(ss_dataset* ds);

/* ---- model checkpoints ------------------------------------------- */

typedef struct ss_weights ss_weights;

ss_status ss_weights_load(const char* path, ss_weights** out);
ss_status ss_weights_save(const ss_weights* w, const char* path);
ss_status ss_weights_evaluate(const ss_weights* w, const ss_dataset* ds,
                              double* accuracy_out);
void ss_weights_free(ss_weights* w);

/* ---- feature tables ----------------------------------------------- */

typedef struct ss_features ss_features;

ss_status ss_features_extract(const ss_weights* pretrained,
                              const ss_dataset* train_set, ss_features** out);
ss_status ss_features_save_csv(const ss_features* table, const char* path);
ss_status ss_features_load_csv(const char* path, ss_features** out);
size_t ss_features_size(const ss_features* table);
void ss_features_free(ss_features* table);

/* ---- samplers ------------------------------------------------------ */

typedef struct ss_sampler ss_sampler;

ss_status ss_sampler_load(const char* json_path, ss_sampler** out);
ss_status ss_sampler_save(const ss_sampler* s, const char* json_path);
/* Normalized sampling probabilities on a feature table. probs_out must
 * hold ss_features_size(table) doubles. Degenerate samplers (zero total
 * weight) yield SS_ERR_DEGENERATE_SAMPLER. */
ss_status ss_sampler_probabilities(const ss_sampler* s, const ss_features* table,
                                   double* probs_out);
void ss_sampler_free(ss_sampler* s);

/* ---- config-driven pipeline commands ------------------------------ */
/* Each command takes the JSON configuration document as text, validates
 * it strictly (unknown keys are errors), writes its artifacts to the
 * configured paths, and optionally returns the result document.
 * result_json_out may be NULL; otherwise the returned string must be
 * released with ss_string_free. */

ss_status ss_cmd_gen_data(const char* config_json, char** result_json_out);
ss_status ss_cmd_pretrain(const char* config_json, char** result_json_out);
ss_status ss_cmd_features(const char* config_json, char** result_json_out);
/* agent: "ss" | "random" | "rl"; transform: "cgf" | "cdf", or "" to use
 * the configuration's search.transform. */
ss_status ss_cmd_search(const char* config_json, const char* agent,
                        const char* transform, char** result_json_out);
ss_status ss_cmd_retrain(const char* config_json, const char* sampler_json_path,
                         char** result_json_out);
ss_status ss_cmd_sr_tr(const char* config_json, const char* result_json_path,
                       char** result_json_out);
ss_status ss_cmd_report(const char* const* result_paths, size_t n_paths,
                        const char* out_dir, char** result_json_out);

void ss_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SAMPLERSEARCH_SAMPLER_SEARCH_H */
