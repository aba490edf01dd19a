#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dilute/closure.hpp"

namespace dilute {

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct CheckResult {
  std::string group;
  std::string id;
  ParamList params;
  real residual = 0;
  real tolerance = 0;
  bool pass = false;
  double wall_ms = 0;
  std::string note;
};

// A reported number with no pass/fail semantics.
struct Measurement {
  std::string group;
  std::string id;
  ParamList params;
  real value = 0;
  std::string note;
};

struct CheckInfo {
  std::string id;
  std::string group;
  std::string description;
};

// Every check id the runner can emit, grouped by subcommand.
const std::vector<CheckInfo>& check_catalogue();
const CheckInfo* find_check(const std::string& id);
const std::vector<std::string>& check_groups();

// lambda as a float, a root of unity (a,b), or (p,p'); (p,p') wins over (a,b)
// which wins over the float.
struct LambdaSpec {
  std::optional<real> value;
  std::optional<std::pair<int, int>> ab;
  std::optional<std::pair<int, int>> pp;
};

struct RunSettings {
  std::vector<int> Ns{2, 3};
  std::vector<int> ds;  // empty: every sector 0..N
  LambdaSpec lambda;
  std::optional<std::vector<cplx>> xi;  // nullopt: seeded random per N
  std::optional<std::uint64_t> xi_seed;  // seed of the random xi draw; defaults to seed
  cplx omega = std::polar(real(1), real(0.3));
  std::optional<cplx> alpha;
  int winding_sign = 1;
  std::uint64_t seed = 1;
  int trials = 20;
  int max_label = 4;               // largest m+n in fusion checks
  std::vector<std::string> ids;    // restrict to these check ids; empty: all
  std::map<std::string, real> tolerances;
  FusionSource relation_source = FusionSource::Determinant;
};

// Builds the context at size N (xi drawn from the seed when not given).
SpectralContext settings_context(const RunSettings& s, int N);
std::vector<int> settings_sectors(const RunSettings& s, int N);

struct TaskOutput {
  std::vector<CheckResult> results;
  std::vector<Measurement> measurements;
};

struct CheckTask {
  std::string group;
  std::string label;
  std::function<void(TaskOutput&, std::mt19937_64&)> run;
};

// Independent tasks of one group. Throws ConfigError for an unknown group, or
// when closure / tba-export is asked for without a root-of-unity lambda.
std::vector<CheckTask> plan_group(const std::string& group, const RunSettings& s);

// Groups a suite runs for these settings: closure and tba-export only at a root of unity.
std::vector<std::string> suite_groups(const RunSettings& s);

// Runs tasks on `jobs` workers; results keep task order and each task draws
// from its own generator seeded by (seed, task index), so output does not
// depend on jobs. A dilute::Error inside a task becomes a failed result.
TaskOutput run_tasks(const std::vector<CheckTask>& tasks, int jobs, std::uint64_t seed);

std::string format_real(real v);
std::string format_cplx(cplx v);

}  // namespace dilute
