// Copyright (c) 2026 the samplersearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. All functionality lives behind the C API of
// libsamplersearch; this binary only parses arguments, loads the config
// file and reports results.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sampler_search.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal JSON string escaping for the error envelope.
std::string json_escape(const char* s) {
  std::string out = "\"";
  for (const char* p = s; *p; ++p) {
    switch (*p) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += *p;
    }
  }
  out += "\"";
  return out;
}

// Machine-readable error envelope on stderr, nonzero exit.
int report_status(ss_status status) {
  if (status == SS_OK) return 0;
  std::fprintf(stderr, "{\"error\":{\"status\":\"%s\",\"message\":%s}}\n",
               ss_status_name(status), json_escape(ss_last_error()).c_str());
  return static_cast<int>(status);
}

int finish(ss_status status, char* result_json) {
  if (status == SS_OK && result_json) {
    std::printf("%s\n", result_json);
  }
  ss_string_free(result_json);
  return report_status(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampler-search: data-sampler search via Gaussian-process "
               "optimization over a shared-checkpoint inner loop"};
  app.require_subcommand(1);

  std::string config_path;
  std::string agent = "ss";
  std::string transform;  // empty: config's search.transform
  std::string sampler_path;
  std::string result_path;
  std::string report_out = "report";
  std::vector<std::string> report_inputs;

  auto add_config = [&config_path](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON configuration file")
        ->required();
  };

  auto* gen = app.add_subcommand("gen-data",
                                 "generate, corrupt, split and save a dataset");
  add_config(gen);

  auto* pre = app.add_subcommand("pretrain",
                                 "train the shared checkpoint with uniform sampling");
  add_config(pre);

  auto* feat = app.add_subcommand("features",
                                  "compute the static per-instance feature table");
  add_config(feat);

  auto* search = app.add_subcommand("search", "run a sampler search");
  add_config(search);
  search->add_option("--agent", agent, "outer-loop agent")
      ->check(CLI::IsMember({"ss", "random", "rl"}))
      ->capture_default_str();
  search->add_option("--transform", transform,
                     "transform mode (default: the config's search.transform)")
      ->check(CLI::IsMember({"cgf", "cdf"}));

  auto* retrain = app.add_subcommand("retrain",
                                     "retrain from scratch with a saved sampler");
  add_config(retrain);
  retrain->add_option("--sampler", sampler_path, "sampler JSON file")->required();

  auto* srtr = app.add_subcommand("sr-tr",
                                  "rank-correlation study of a search result");
  add_config(srtr);
  srtr->add_option("--result", result_path, "search result JSON file")->required();

  auto* report = app.add_subcommand("report", "summary CSVs over search results");
  report->add_option("results", report_inputs, "search result JSON files")
      ->required();
  report->add_option("--out", report_out, "output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    char* result = nullptr;
    ss_status status = SS_OK;
    if (gen->parsed()) {
      status = ss_cmd_gen_data(read_file(config_path).c_str(), &result);
    } else if (pre->parsed()) {
      status = ss_cmd_pretrain(read_file(config_path).c_str(), &result);
    } else if (feat->parsed()) {
      status = ss_cmd_features(read_file(config_path).c_str(), &result);
    } else if (search->parsed()) {
      status = ss_cmd_search(read_file(config_path).c_str(), agent.c_str(),
                             transform.c_str(), &result);
    } else if (retrain->parsed()) {
      status = ss_cmd_retrain(read_file(config_path).c_str(),
                              sampler_path.c_str(), &result);
    } else if (srtr->parsed()) {
      status = ss_cmd_sr_tr(read_file(config_path).c_str(), result_path.c_str(),
                            &result);
    } else if (report->parsed()) {
      std::vector<const char*> paths;
      paths.reserve(report_inputs.size());
      for (const auto& p : report_inputs) paths.push_back(p.c_str());
      status =
          ss_cmd_report(paths.data(), paths.size(), report_out.c_str(), &result);
    }
    return finish(status, result);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
}
