#include <doctest.h>

#include "dilute/report.hpp"

using namespace dilute;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  return "";
}

bool mentions(const std::string& msg, const std::string& field) {
  return msg.find(field + ":") != std::string::npos;
}

}  // namespace

TEST_CASE("lambda precedence is pp over ab over float") {
  RunConfig c = resolve_config("transfer", Json::object(), {{"lambda", 0.4}, {"ab", "3/4"}, {"pp", "1/2"}});
  CHECK(c.lambda_given == "pp");
  CHECK(settings_context(c.settings, 2).b() == 4);
  c = resolve_config("transfer", Json::object(), {{"lambda", 0.4}, {"ab", "3/4"}});
  CHECK(c.lambda_given == "ab");
  CHECK(std::abs(settings_context(c.settings, 2).lambda - pi / 8) < 1e-15);
  c = resolve_config("transfer", Json::object(), {{"lambda", 0.4}});
  CHECK(c.lambda_given == "float");
  CHECK_FALSE(settings_context(c.settings, 2).root_of_unity());
}

TEST_CASE("flags override the file, which overrides the preset") {
  const Json file = {{"preset", "dlm-1-2"}, {"N", "2"}, {"trials", 3}};
  RunConfig c = resolve_config("closure", file, {{"trials", "5"}});
  CHECK(c.settings.trials == 5);
  CHECK(c.settings.Ns == std::vector<int>{2});
  CHECK(c.settings.lambda.pp == std::pair{1, 2});
  c = resolve_config("transfer", file, {{"lambda", "0.5"}});
  CHECK(c.lambda_given == "float");
  CHECK(*c.settings.lambda.value == doctest::Approx(0.5));
}

TEST_CASE("presets map to the expected roots of unity") {
  const std::pair<const char*, std::pair<int, int>> want[] = {
      {"dlm-1-2", {1, 4}}, {"dlm-3-4", {3, 8}}, {"ab-1-2", {1, 2}}, {"ab-2-3", {2, 3}}, {"ab-3-4", {3, 4}}};
  for (const auto& [name, ab] : want) {
    const RunConfig c = resolve_config("suite", {{"preset", name}}, Json::object());
    const SpectralContext ctx = settings_context(c.settings, 2);
    CHECK(ctx.a() == ab.first);
    CHECK(ctx.b() == ab.second);
  }
  const RunConfig g = resolve_config("suite", {{"preset", "generic"}}, Json::object());
  CHECK(settings_context(g.settings, 2).lambda == doctest::Approx(0.55));
}

TEST_CASE("configuration errors name the field") {
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"N", "0"}}); }), "N"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"N", "two"}}); }), "N"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"ab", "3/2"}}); }), "ab"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"pp", "2/4"}}); }), "pp"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"lambda", "1.0471975511965976"}}); }),
                 "lambda"));
  CHECK(mentions(error_of([] { resolve_config("closure", Json::object(), {{"lambda", "0.5"}}); }), "lambda"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"xi", "0.1,0.2"}, {"N", "3"}}); }),
                 "xi"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"format", "xml"}}); }), "format"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"id", "nope"}}); }), "id"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"bogus", 1}}); }), "bogus"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"tol", {{"ybe", -1}}}}); }), "tol.ybe"));
  CHECK(mentions(error_of([] { resolve_config("transfer", Json::object(), {{"preset", "x"}}); }), "preset"));
  CHECK(mentions(error_of([] { resolve_config("nothing", Json::object(), Json::object()); }), "subcommand"));
}

TEST_CASE("value syntaxes") {
  const RunConfig c = resolve_config(
      "transfer", Json::object(),
      {{"N", "2-4"}, {"d", "0,1"}, {"omega", "0.6,0.8"}, {"xi", "random:9"}, {"tol.ybe", "1e-9"}, {"id", "ybe,crossing"}});
  CHECK(c.settings.Ns == std::vector<int>{2, 3, 4});
  CHECK(c.settings.ds == std::vector<int>{0, 1});
  CHECK(c.settings.omega == cplx(0.6, 0.8));
  CHECK(c.settings.xi_seed == std::uint64_t(9));
  CHECK(c.settings.tolerances.at("ybe") == doctest::Approx(1e-9));
  CHECK(c.settings.ids.size() == 2);
  const RunConfig l = resolve_config("transfer", {{"xi", Json::array({0.1, Json::array({0.2, 0.05})})}, {"N", 2}},
                                     Json::object());
  CHECK(settings_context(l.settings, 2).xi[1] == cplx(0.2, 0.05));
}

TEST_CASE("same configuration and seed give byte-identical reports") {
  const Json flags = {{"N", "2"}, {"seed", "17"}, {"trials", "3"}, {"wall_time", false}, {"ab", "1/4"}};
  RunConfig one = resolve_config("suite", Json::object(), flags);
  RunConfig many = one;
  many.jobs = 4;
  const std::string a = report_json(one, run_config(one)).dump(2);
  const std::string b = report_json(one, run_config(one)).dump(2);
  const std::string c = report_json(many, run_config(many)).dump(2);
  CHECK(a == b);
  CHECK(a == c);
  RunConfig other = resolve_config("suite", Json::object(), {{"N", "2"}, {"seed", "18"}, {"trials", "3"},
                                                             {"wall_time", false}, {"ab", "1/4"}});
  CHECK(report_json(other, run_config(other)).dump(2) != a);
}

TEST_CASE("report layout") {
  const RunConfig c = resolve_config("local-check", Json::object(), {{"id", "ybe"}, {"trials", "2"}, {"seed", "7"}});
  const TaskOutput out = run_config(c);
  REQUIRE(out.results.size() == 2);
  const Json j = report_json(c, out);
  CHECK(j["header"]["config"]["subcommand"] == "local-check");
  CHECK(j["header"]["versions"].contains("eigen"));
  CHECK(j["results"][0]["id"] == "ybe");
  CHECK(j["results"][0]["residual"].get<double>() >= 0);
  const std::string csv = report_csv(out);
  CHECK(csv.rfind("group,id,params,residual,tolerance,pass,wall_ms,note\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(all_pass(out));
}

TEST_CASE("every listed check has a description") {
  for (const auto& c : check_catalogue()) {
    CHECK_FALSE(c.description.empty());
    CHECK(find_check(c.id) == &c);
    CHECK(std::find(check_groups().begin(), check_groups().end(), c.group) != check_groups().end());
  }
}
