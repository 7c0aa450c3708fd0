// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "runconfig.hpp"

namespace ssearch {

// Command implementations behind the CLI (and the C API). Every command is
// idempotent given identical config and seeds, writes its artifacts under
// the configured paths, and returns the primary result document. Every
// result document embeds the exact config and seed that produced it.

nlohmann::json cmd_gen_data(const RunConfig& cfg);
nlohmann::json cmd_pretrain(const RunConfig& cfg);
nlohmann::json cmd_features(const RunConfig& cfg);
nlohmann::json cmd_search(const RunConfig& cfg, const std::string& agent,
                          const std::string& transform);
nlohmann::json cmd_retrain(const RunConfig& cfg, const std::string& sampler_path);
nlohmann::json cmd_sr_tr(const RunConfig& cfg, const std::string& result_path);
nlohmann::json cmd_report(std::span<const std::string> result_paths,
                          const std::string& out_dir);

// Serialization of a search run (steps, best candidate, retrain accuracy).
nlohmann::json search_run_to_json(const SearchRunResult& run);
SearchRunResult search_run_from_json(const nlohmann::json& j);

// Wall-time fields are measurements, not semantics: strip_wall_times
// removes every key starting with "wall_time" recursively, and
// semantic_dump returns the canonical serialization of what remains.
// Determinism contracts compare semantic dumps.
void strip_wall_times(nlohmann::json& j);
std::string semantic_dump(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace ssearch
