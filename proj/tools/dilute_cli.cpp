#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilute/report.hpp"
#include "dilute/transfer.hpp"

using namespace dilute;

namespace {

struct Flags {
  std::optional<std::string> config, preset, N, d, lambda, ab, pp, xi, omega, alpha, winding_sign, seed,
      trials, max_label, id, source, output, format, jobs, u, graph;
  std::vector<std::string> tol;
  bool no_wall_time = false;
  bool dump = false;
};

void add_options(CLI::App& app, Flags& f, const std::string& name) {
  app.add_option("--config", f.config, "JSON config file with flat keys; flags override it");
  app.add_option("--preset", f.preset, "dlm-1-2, dlm-3-4, ab-1-2, ab-2-3, ab-3-4 or generic");
  app.add_option("--N", f.N, "system sizes: 3, 2,3 or 2-4");
  app.add_option("--d", f.d, "defect sectors: all, 0 or 0,2");
  app.add_option("--lambda", f.lambda, "crossing parameter as a float");
  app.add_option("--ab", f.ab, "root of unity a/b, lambda = (b-a)pi/2b");
  app.add_option("--pp", f.pp, "coprime p/p', mapped to a/b");
  app.add_option("--xi", f.xi, "inhomogeneities: comma-separated reals, random or random:<seed>");
  app.add_option("--omega", f.omega, "twist omega as re or re,im");
  app.add_option("--alpha", f.alpha, "winding loop fugacity as re or re,im (default omega+1/omega)");
  app.add_option("--winding-sign", f.winding_sign, "1 or -1; -1 flips the seam winding convention");
  app.add_option("--seed", f.seed, "seed of every random draw");
  app.add_option("--trials", f.trials, "random draws per local identity");
  app.add_option("--max-label", f.max_label, "largest fusion label m+n");
  app.add_option("--id", f.id, "only these check ids (comma-separated)");
  app.add_option("--source", f.source, "determinant or recursion build for relation checks");
  app.add_option("--tol", f.tol, "tolerance override id=value (repeatable)");
  app.add_option("--output", f.output, "report file");
  app.add_option("--format", f.format, "json, csv or text");
  app.add_option("--jobs", f.jobs, "worker threads");
  app.add_flag("--no-wall-time", f.no_wall_time, "omit wall times from the report");
  if (name == "transfer") {
    app.add_flag("--dump", f.dump, "print the transfer matrix of each sector at --u instead of checking");
    app.add_option("--u", f.u, "spectral parameter for --dump as re or re,im");
  }
  if (name == "tba-export") app.add_option("--graph", f.graph, "write the graph document here");
}

Json flags_json(const Flags& f) {
  Json j = Json::object();
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
  };
  put("preset", f.preset);
  put("N", f.N);
  put("d", f.d);
  put("lambda", f.lambda);
  put("ab", f.ab);
  put("pp", f.pp);
  if (f.xi) {
    if (f.xi->rfind("random", 0) == 0) {
      j["xi"] = *f.xi;
    } else {
      Json list = Json::array();
      std::stringstream ss(*f.xi);
      std::string item;
      while (std::getline(ss, item, ',')) list.push_back(item);
      j["xi"] = list;
    }
  }
  put("omega", f.omega);
  put("alpha", f.alpha);
  put("winding_sign", f.winding_sign);
  put("seed", f.seed);
  put("trials", f.trials);
  put("max_label", f.max_label);
  put("id", f.id);
  put("source", f.source);
  put("output", f.output);
  put("format", f.format);
  put("jobs", f.jobs);
  put("u", f.u);
  put("graph", f.graph);
  if (f.no_wall_time) j["wall_time"] = false;
  if (f.dump) j["dump"] = true;
  if (!f.tol.empty()) {
    Json tol = Json::object();
    for (const auto& t : f.tol) {
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorKind::ConfigError, "tol: expected id=value, got '" + t + "'");
      tol[t.substr(0, eq)] = t.substr(eq + 1);
    }
    j["tol"] = tol;
  }
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "output: cannot write '" + path + "'");
  out << text;
}

std::string report_format(const RunConfig& cfg) {
  if (cfg.format != "text" || cfg.output.empty()) return cfg.format;
  const auto ext = cfg.output.substr(cfg.output.find_last_of('.') + 1);
  if (ext == "json") return "json";
  if (ext == "csv") return "csv";
  return "text";
}

void print_enumeration(const RunConfig& cfg) {
  const RunSettings& s = cfg.settings;
  int sectors = 0;
  for (int N : s.Ns) sectors += int(settings_sectors(s, N).size());
  for (int N : s.Ns)
    for (int d : settings_sectors(s, N)) {
      if (sectors > 1) std::cout << "# N=" << N << " d=" << d << "\n";
      const ModuleBasis basis = enumerate_link_states(N, d);
      for (const auto& st : basis.states) std::cout << st.dump() << "\n";
      std::cout << "dim=" << basis.size() << "\n";
    }
}

int run(const RunConfig& cfg) {
  if (cfg.subcommand == "transfer" && cfg.dump) {
    for (int N : cfg.settings.Ns) {
      const SpectralContext ctx = settings_context(cfg.settings, N);
      for (int d : settings_sectors(cfg.settings, N))
        std::cout << dump_matrix(build_fundamental(cfg.u, enumerate_link_states(N, d), ctx), N, d, cfg.u,
                                 ctx);
    }
    return 0;
  }
  const TaskOutput out = run_config(cfg);
  const Json versions = {{"cli11", CLI11_VERSION}};
  const std::string fmt = report_format(cfg);
  std::string report;
  if (fmt == "json") report = report_json(cfg, out, versions).dump(2) + "\n";
  else if (fmt == "csv") report = report_csv(out, cfg.wall_time);
  else report = report_text(out);

  if (cfg.subcommand == "tba-export") {
    const auto& s = cfg.settings;
    const auto ab = s.lambda.pp ? ab_from_pp(s.lambda.pp->first, s.lambda.pp->second) : *s.lambda.ab;
    const std::string doc = tba_to_text(export_tba_diagram(ab.first, ab.second));
    if (cfg.graph.empty()) std::cout << doc;
    else write_file(cfg.graph, doc);
  }
  if (!cfg.output.empty()) {
    write_file(cfg.output, report);
    if (cfg.subcommand == "enumerate") print_enumeration(cfg);
    else std::cout << report_text(out);
  } else if (cfg.subcommand == "enumerate" && fmt == "text") {
    print_enumeration(cfg);
  } else {
    std::cout << report;
  }
  return all_pass(out) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilute loop model transfer matrices and functional relation checks"};
  app.require_subcommand(0, 1);
  bool list = false;
  std::optional<std::string> explain;
  app.add_flag("--list", list, "list every check id");
  app.add_option("--explain", explain, "describe a check id");

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"enumerate", "list link-state bases and check their dimensions"},
      {"local-check", "local face-tangle identities at random parameters"},
      {"transfer", "transfer matrix properties, or --dump a matrix"},
      {"fusion-check", "fusion hierarchy relations, determinants, regularity, polynomiality"},
      {"tsystem", "T-system and its two-parameter family"},
      {"ysystem", "Y-system, eigenvalue-wise"},
      {"closure", "root-of-unity symmetries, J, closure relations and the closed Y-system"},
      {"projector-check", "projector identities and the projected fused transfer"},
      {"tba-export", "TBA graph document and its counts"},
      {"suite", "every group that applies to the configuration"}};
  for (const auto& [name, help] : subs) add_options(*app.add_subcommand(name, help), flags, name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& c : check_catalogue()) std::cout << c.id << "\t" << c.group << "\n";
    return 0;
  }
  if (explain) {
    const CheckInfo* c = find_check(*explain);
    if (!c) {
      std::cerr << "ConfigError: explain: unknown check '" << *explain << "'\n";
      return 2;
    }
    std::cout << c->id << " (" << c->group << "): " << c->description << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const Json file = flags.config ? read_config_file(*flags.config) : Json::object();
    const RunConfig cfg = resolve_config(sub, file, flags_json(flags));
    return run(cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::cerr << e.what() << "\n";
    return 1;
  }
}
