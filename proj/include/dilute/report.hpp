#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilute/checks.hpp"

namespace dilute {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  std::optional<std::string> preset;
  RunSettings settings;
  std::string lambda_given = "float";  // which of pp, ab, float supplied lambda
  std::string xi_spec = "random";      // "random", "random:<seed>" or "list"
  std::string output;                  // empty: stdout
  std::string format = "text";         // json, csv or text
  int jobs = 1;
  bool wall_time = true;
  cplx u{0.3, 0.1};  // argument of transfer --dump
  bool dump = false;
  std::string graph;  // tba-export document path; empty: stdout
};

// Flat keys of a preset, as they would appear in a config file.
Json preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

// Every flat key accepted by a config file or the command line.
const std::vector<std::string>& config_keys();

// Builds the run configuration from layered flat-key objects: the preset named
// by the layers (if any), then `file`, then `flags`. A later layer replaces a
// key of an earlier one; lambda keys of the preset are dropped when the file or
// flags give any lambda key. Throws ConfigError naming the offending field.
RunConfig resolve_config(const std::string& subcommand, const Json& file, const Json& flags);

// Reads a JSON config file; ConfigError on I/O or parse failure.
Json read_config_file(const std::string& path);

// Header: the resolved configuration, lambda conversions and per-N xi, plus
// library versions. `extra_versions` are appended to the versions block.
Json report_header(const RunConfig& cfg, const Json& extra_versions = Json::object());

Json report_json(const RunConfig& cfg, const TaskOutput& out, const Json& extra_versions = Json::object());
std::string report_csv(const TaskOutput& out, bool wall_time = true);
std::string report_text(const TaskOutput& out);

// Ordered check results of one run of the config (suite expands to every
// group that applies).
TaskOutput run_config(const RunConfig& cfg);

bool all_pass(const TaskOutput& out);

}  // namespace dilute
