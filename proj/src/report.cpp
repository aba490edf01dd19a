#include "dilute/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Core>

namespace dilute {

namespace {

constexpr const char* kVersion = "1.0.0";

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigError, field + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

long long parse_integer(const std::string& field, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) bad(field, "not an integer: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(field, "not an integer: '" + s + "'");
  }
}

real parse_number(const std::string& field, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) bad(field, "not a finite number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(field, "not a finite number: '" + s + "'");
  }
}

long long as_int(const std::string& field, const Json& j) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) return parse_integer(field, j.get<std::string>());
  bad(field, "expected an integer");
}

real as_real(const std::string& field, const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(field, j.get<std::string>());
  bad(field, "expected a number");
}

bool as_bool(const std::string& field, const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  bad(field, "expected true or false");
}

std::string as_string(const std::string& field, const Json& j) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

// Integer list: 3, [2,3], "2,3" or "2-4".
std::vector<int> as_int_list(const std::string& field, const Json& j) {
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(int(as_int(field, e)));
  } else if (j.is_string()) {
    for (const auto& part : split(j.get<std::string>(), ',')) {
      const auto dash = part.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(int(parse_integer(field, part)));
      } else {
        const int lo = int(parse_integer(field, part.substr(0, dash)));
        const int hi = int(parse_integer(field, part.substr(dash + 1)));
        if (hi < lo) bad(field, "empty range '" + part + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    }
  } else {
    out.push_back(int(as_int(field, j)));
  }
  if (out.empty()) bad(field, "empty list");
  return out;
}

// Integer pair: [a,b], "a/b" or "a,b".
std::pair<int, int> as_pair(const std::string& field, const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) bad(field, "expected two integers");
    return {int(as_int(field, j[0])), int(as_int(field, j[1]))};
  }
  const std::string s = as_string(field, j);
  const auto cut = s.find_first_of("/,");
  if (cut == std::string::npos) bad(field, "expected 'x/y', got '" + s + "'");
  return {int(parse_integer(field, s.substr(0, cut))), int(parse_integer(field, s.substr(cut + 1)))};
}

// Complex: 0.5, [re,im] or "re,im".
cplx as_cplx(const std::string& field, const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) bad(field, "expected [re, im]");
    return {as_real(field, j[0]), as_real(field, j[1])};
  }
  if (j.is_string()) {
    const auto parts = split(j.get<std::string>(), ',');
    if (parts.size() == 1) return {parse_number(field, parts[0]), 0};
    if (parts.size() == 2) return {parse_number(field, parts[0]), parse_number(field, parts[1])};
    bad(field, "expected 're,im'");
  }
  return {as_real(field, j), 0};
}

Json cplx_json(cplx z) { return Json::array({double(z.real()), double(z.imag())}); }

const std::vector<std::string> kLambdaKeys{"lambda", "ab", "pp"};

void apply_key(RunConfig& cfg, const std::string& key, const Json& v) {
  RunSettings& s = cfg.settings;
  if (key == "preset") {
    // handled by resolve_config
  } else if (key == "N") {
    s.Ns = as_int_list(key, v);
    for (int N : s.Ns)
      if (N < 1 || N > 10) bad(key, "each N must be in 1..10");
  } else if (key == "d") {
    if (v.is_string() && v.get<std::string>() == "all") {
      s.ds.clear();
    } else {
      s.ds = as_int_list(key, v);
      for (int d : s.ds)
        if (d < 0) bad(key, "sectors must be non-negative");
    }
  } else if (key == "lambda") {
    s.lambda.value = as_real(key, v);
  } else if (key == "ab") {
    s.lambda.ab = as_pair(key, v);
    if (s.lambda.ab->first < 1 || s.lambda.ab->first >= s.lambda.ab->second) bad(key, "need 1 <= a < b");
  } else if (key == "pp") {
    s.lambda.pp = as_pair(key, v);
  } else if (key == "xi") {
    if (v.is_string()) {
      const std::string spec = v.get<std::string>();
      s.xi.reset();
      s.xi_seed.reset();
      if (spec.rfind("random:", 0) == 0) {
        const long long seed = parse_integer(key, spec.substr(7));
        if (seed < 0) bad(key, "random seed must be non-negative");
        s.xi_seed = std::uint64_t(seed);
      } else if (spec != "random") {
        bad(key, "expected a list, 'random' or 'random:<seed>'");
      }
      cfg.xi_spec = spec;
    } else if (v.is_array()) {
      std::vector<cplx> xi;
      for (const auto& e : v) xi.push_back(as_cplx(key, e));
      s.xi = xi;
      s.xi_seed.reset();
      cfg.xi_spec = "list";
    } else {
      bad(key, "expected a list, 'random' or 'random:<seed>'");
    }
  } else if (key == "omega") {
    s.omega = as_cplx(key, v);
    if (std::abs(s.omega) < 1e-12) bad(key, "omega must be nonzero");
  } else if (key == "alpha") {
    s.alpha = as_cplx(key, v);
  } else if (key == "winding_sign") {
    s.winding_sign = int(as_int(key, v));
    if (s.winding_sign != 1 && s.winding_sign != -1) bad(key, "must be 1 or -1");
  } else if (key == "seed") {
    const long long seed = as_int(key, v);
    if (seed < 0) bad(key, "must be non-negative");
    s.seed = std::uint64_t(seed);
  } else if (key == "trials") {
    s.trials = int(as_int(key, v));
    if (s.trials < 1) bad(key, "must be at least 1");
  } else if (key == "max_label") {
    s.max_label = int(as_int(key, v));
    if (s.max_label < 1 || s.max_label > 6) bad(key, "must be in 1..6");
  } else if (key == "id") {
    std::vector<std::string> ids;
    if (v.is_array()) {
      for (const auto& e : v) ids.push_back(as_string(key, e));
    } else {
      ids = split(as_string(key, v), ',');
    }
    for (const auto& id : ids)
      if (!find_check(id)) bad(key, "unknown check '" + id + "'");
    s.ids = ids;
  } else if (key == "source") {
    const std::string src = as_string(key, v);
    if (src == "determinant") s.relation_source = FusionSource::Determinant;
    else if (src == "recursion") s.relation_source = FusionSource::Recursion;
    else bad(key, "expected determinant or recursion");
  } else if (key == "tol") {
    if (!v.is_object()) bad(key, "expected an object of check id to tolerance");
    for (const auto& [id, t] : v.items()) {
      if (!find_check(id)) bad(key, "unknown check '" + id + "'");
      const real tol = as_real(key + "." + id, t);
      if (tol < 0) bad(key + "." + id, "must be non-negative");
      s.tolerances[id] = tol;
    }
  } else if (key == "output") {
    cfg.output = as_string(key, v);
  } else if (key == "format") {
    cfg.format = as_string(key, v);
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
      bad(key, "expected json, csv or text");
  } else if (key == "jobs") {
    cfg.jobs = int(as_int(key, v));
    if (cfg.jobs < 1 || cfg.jobs > 256) bad(key, "must be in 1..256");
  } else if (key == "wall_time") {
    cfg.wall_time = as_bool(key, v);
  } else if (key == "u") {
    cfg.u = as_cplx(key, v);
  } else if (key == "dump") {
    cfg.dump = as_bool(key, v);
  } else if (key == "graph") {
    cfg.graph = as_string(key, v);
  } else {
    bad(key, "unknown config key");
  }
}

bool has_lambda_key(const Json& j) {
  for (const auto& k : kLambdaKeys)
    if (j.contains(k)) return true;
  return false;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> n{"dlm-1-2", "dlm-3-4", "ab-1-2", "ab-2-3", "ab-3-4", "generic"};
  return n;
}

Json preset_config(const std::string& name) {
  if (name == "dlm-1-2") return {{"pp", "1/2"}};
  if (name == "dlm-3-4") return {{"pp", "3/4"}};
  if (name == "ab-1-2") return {{"ab", "1/2"}};
  if (name == "ab-2-3") return {{"ab", "2/3"}};
  if (name == "ab-3-4") return {{"ab", "3/4"}};
  if (name == "generic") return {{"lambda", 0.55}};
  bad("preset", "unknown preset '" + name + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> k{"preset", "N",     "d",         "lambda", "ab",  "pp",
                                          "xi",     "omega", "alpha",     "winding_sign", "seed",
                                          "trials", "max_label", "id",    "source", "tol", "output",
                                          "format", "jobs",  "wall_time", "u",      "dump", "graph"};
  return k;
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("config", "cannot open '" + path + "'");
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) bad("config", "top level must be an object");
    return j;
  } catch (const Json::parse_error& e) {
    bad("config", std::string("parse error: ") + e.what());
  }
}

RunConfig resolve_config(const std::string& subcommand, const Json& file, const Json& flags) {
  static const std::set<std::string> subcommands{"enumerate",  "local-check",     "transfer",   "fusion-check",
                                                 "tsystem",    "ysystem",         "closure",    "projector-check",
                                                 "tba-export", "suite"};
  if (!subcommands.count(subcommand)) bad("subcommand", "unknown subcommand '" + subcommand + "'");
  RunConfig cfg;
  cfg.subcommand = subcommand;

  Json merged = Json::object();
  std::optional<std::string> preset;
  if (file.contains("preset")) preset = as_string("preset", file["preset"]);
  if (flags.contains("preset")) preset = as_string("preset", flags["preset"]);
  if (preset) {
    const Json p = preset_config(*preset);
    const bool override_lambda = has_lambda_key(file) || has_lambda_key(flags);
    for (const auto& [k, v] : p.items())
      if (!override_lambda || std::find(kLambdaKeys.begin(), kLambdaKeys.end(), k) == kLambdaKeys.end())
        merged[k] = v;
    cfg.preset = preset;
  }
  for (const Json* layer : {&file, &flags}) {
    if (!layer->is_object()) bad("config", "expected an object");
    for (const auto& [k, v] : layer->items()) merged[k] = v;
  }
  // tolerance overrides may also come as flat "tol.<id>" keys
  Json tol = Json::object();
  for (const auto& [k, v] : merged.items()) {
    if (k.rfind("tol.", 0) == 0) tol[k.substr(4)] = v;
  }
  for (const auto& [k, v] : merged.items()) {
    if (k.rfind("tol.", 0) == 0) continue;
    apply_key(cfg, k, v);
  }
  if (!tol.empty()) apply_key(cfg, "tol", tol);

  LambdaSpec& l = cfg.settings.lambda;
  if (l.pp) {
    ab_from_pp(l.pp->first, l.pp->second);
    cfg.lambda_given = "pp";
  } else if (l.ab) {
    cfg.lambda_given = "ab";
  } else if (!l.value) {
    l.value = 0.55;
  }
  if (cfg.lambda_given == "float") {
    l.ab.reset();
    l.pp.reset();
  } else if (cfg.lambda_given == "ab") {
    l.pp.reset();
  }
  // every context the run will build must be constructible
  for (int N : cfg.settings.Ns) {
    try {
      settings_context(cfg.settings, N);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      bad("lambda", e.what());
    }
  }
  if ((subcommand == "closure" || subcommand == "tba-export") && !l.ab && !l.pp)
    bad("lambda", subcommand + " needs lambda given as ab or pp");
  return cfg;
}

Json report_header(const RunConfig& cfg, const Json& extra_versions) {
  const RunSettings& s = cfg.settings;
  Json c = Json::object();
  c["subcommand"] = cfg.subcommand;
  c["preset"] = cfg.preset ? Json(*cfg.preset) : Json(nullptr);
  c["N"] = s.Ns;
  if (s.ds.empty()) c["d"] = "all";
  else c["d"] = s.ds;
  Json lam = Json::object();
  lam["given"] = cfg.lambda_given;
  const SpectralContext ctx0 = settings_context(s, s.Ns.front());
  lam["value"] = double(ctx0.lambda);
  if (s.lambda.pp) {
    lam["p"] = s.lambda.pp->first;
    lam["pprime"] = s.lambda.pp->second;
  }
  if (ctx0.root_of_unity()) {
    lam["a"] = ctx0.a();
    lam["b"] = ctx0.b();
  }
  c["lambda"] = lam;
  c["xi"] = cfg.xi_spec;
  Json xv = Json::object();
  for (int N : s.Ns) {
    Json row = Json::array();
    for (cplx z : settings_context(s, N).xi) row.push_back(cplx_json(z));
    xv[std::to_string(N)] = row;
  }
  c["xi_values"] = xv;
  c["omega"] = cplx_json(s.omega);
  c["alpha"] = cplx_json(ctx0.alpha);
  c["winding_sign"] = s.winding_sign;
  c["seed"] = s.seed;
  c["trials"] = s.trials;
  c["max_label"] = s.max_label;
  c["id"] = s.ids;
  c["source"] = fusion_source_name(s.relation_source);
  Json tol = Json::object();
  for (const auto& [id, t] : s.tolerances) tol[id] = double(t);
  c["tol"] = tol;
  if (cfg.subcommand == "transfer" && cfg.dump) c["u"] = cplx_json(cfg.u);

  Json v = Json::object();
  v["dilute"] = kVersion;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
#ifdef __VERSION__
  v["compiler"] = __VERSION__;
#endif
  v["real"] = sizeof(real) == sizeof(double) ? "double" : "long double";
  for (const auto& [k, e] : extra_versions.items()) v[k] = e;
  return {{"config", c}, {"versions", v}};
}

Json report_json(const RunConfig& cfg, const TaskOutput& out, const Json& extra_versions) {
  Json results = Json::array();
  int passed = 0;
  for (const auto& r : out.results) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    Json e = Json::object();
    e["group"] = r.group;
    e["id"] = r.id;
    e["params"] = params;
    e["residual"] = double(r.residual);
    e["tolerance"] = double(r.tolerance);
    e["pass"] = r.pass;
    if (cfg.wall_time) e["wall_ms"] = r.wall_ms;
    e["note"] = r.note;
    results.push_back(e);
    passed += r.pass;
  }
  Json measurements = Json::array();
  for (const auto& m : out.measurements) {
    Json params = Json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    measurements.push_back({{"group", m.group}, {"id", m.id}, {"params", params}, {"value", double(m.value)},
                            {"note", m.note}});
  }
  Json j = Json::object();
  j["header"] = report_header(cfg, extra_versions);
  j["results"] = results;
  j["measurements"] = measurements;
  j["summary"] = {{"total", out.results.size()}, {"passed", passed}, {"failed", int(out.results.size()) - passed}};
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string params_text(const ParamList& p, char sep) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += sep;
    s += k + "=" + v;
  }
  return s;
}

std::string num(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string report_csv(const TaskOutput& out, bool wall_time) {
  std::string s = "group,id,params,residual,tolerance,pass";
  s += wall_time ? ",wall_ms,note\n" : ",note\n";
  for (const auto& r : out.results) {
    s += csv_field(r.group) + "," + csv_field(r.id) + "," + csv_field(params_text(r.params, ';')) + "," +
         num(double(r.residual), "%.17g") + "," + num(double(r.tolerance), "%.17g") + "," +
         (r.pass ? "true" : "false") + ",";
    if (wall_time) s += num(r.wall_ms, "%.3f") + ",";
    s += csv_field(r.note) + "\n";
  }
  return s;
}

std::string report_text(const TaskOutput& out) {
  std::string s;
  int passed = 0;
  for (const auto& r : out.results) {
    s += std::string(r.pass ? "PASS " : "FAIL ") + r.group + " " + r.id;
    const std::string p = params_text(r.params, ' ');
    if (!p.empty()) s += " [" + p + "]";
    s += " residual=" + num(double(r.residual), "%.3e") + " tol=" + num(double(r.tolerance), "%.1e");
    if (!r.note.empty()) s += " (" + r.note + ")";
    s += "\n";
    passed += r.pass;
  }
  for (const auto& m : out.measurements) {
    s += "MEASURE " + m.group + " " + m.id;
    const std::string p = params_text(m.params, ' ');
    if (!p.empty()) s += " [" + p + "]";
    s += " value=" + num(double(m.value), "%.6g");
    if (!m.note.empty()) s += " (" + m.note + ")";
    s += "\n";
  }
  s += "passed " + std::to_string(passed) + "/" + std::to_string(out.results.size()) + "\n";
  return s;
}

TaskOutput run_config(const RunConfig& cfg) {
  const std::vector<std::string> groups =
      cfg.subcommand == "suite" ? suite_groups(cfg.settings) : std::vector<std::string>{cfg.subcommand};
  std::vector<CheckTask> tasks;
  for (const auto& g : groups)
    for (auto& t : plan_group(g, cfg.settings)) tasks.push_back(std::move(t));
  return run_tasks(tasks, cfg.jobs, cfg.settings.seed);
}

bool all_pass(const TaskOutput& out) {
  return std::all_of(out.results.begin(), out.results.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace dilute
