#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "qmorph/errors.hpp"
#include "qmorph/runner.hpp"

using namespace qmorph;

namespace {

std::string config_path(const char* name) { return std::string(QMORPH_SOURCE_DIR) + "/configs/" + name; }

Json minimal_tree() {
  return Json{{"schema", kConfigSchema},
              {"space", {{"kind", "tree"}, {"rank", 2}}},
              {"group", {{"kind", "free"}, {"rank", 2}}},
              {"word", "aab"},
              {"basepoint", ""},
              {"constants", {{"C", 1}, {"B", 1.5}}},
              {"expressway", {{"margin", 0.5}}}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QMORPH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const char* name) { return std::string(QMORPH_BINARY_DIR) + "/" + name; }

}  // namespace

TEST_CASE("qm on the shipped tree config") {
  const ExperimentConfig cfg = load_config(config_path("tree_aab.json"));
  const RunResult r = run("qm", cfg);
  CHECK(r.exit_code == 0);
  const Json& table = r.body.at("qm").at("table");
  REQUIRE(table.size() == 6);
  for (const Json& row : table) CHECK(row.at("phi").get<double>() == row.at("n").get<double>());
  CHECK(r.body.at("qm").at("independence").at("rank") == 3);
}

TEST_CASE("axioms on the Euclidean config") {
  const ExperimentConfig cfg = load_config(config_path("euclid.json"));
  CHECK(cfg.C == 0.0);
  CHECK(run("axioms", cfg).exit_code == 0);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(minimal_tree()));
  Json j = minimal_tree();
  j["schema"] = "qmorph.config/0";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal_tree();
  j["budgets"] = {{"n_max", 0}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal_tree();
  j["budgets"] = {{"nmax", 3}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal_tree();
  j["word"] = "axb";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal_tree();
  j["basepoint"] = "ac";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal_tree();
  j.erase("group");
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  CHECK_THROWS_AS(run("nonsense", parse_config(minimal_tree())), ConfigError);
}

TEST_CASE("budget scaling and seed override") {
  const ExperimentConfig base = parse_config(minimal_tree());
  const ExperimentConfig scaled = parse_config(minimal_tree(), 99, 2.0);
  CHECK(scaled.seed == 99);
  CHECK(scaled.echo.at("seed") == 99);
  CHECK(scaled.budgets.n_max == 2 * base.budgets.n_max);
  CHECK(parse_config(minimal_tree(), std::nullopt, 0.01).budgets.n_max == 1);
  CHECK_THROWS_AS(parse_config(minimal_tree(), std::nullopt, 0.0), ConfigError);
  const ExperimentConfig again = parse_config(scaled.echo);
  CHECK(again.budgets.n_max == scaled.budgets.n_max);
  CHECK(again.echo == scaled.echo);
}

TEST_CASE("point serialization round-trips") {
  const ExperimentConfig cfg = parse_config(minimal_tree());
  const Point p = tree_point(Word::parse("ab"), 1, 0.5);
  CHECK(point_from_json(cfg.space, point_to_json(cfg.space, p)) == p);
  const ModelSpace prod = ModelSpace::product(ModelSpace::half_plane(), ModelSpace::euclidean(1));
  const Point q = make_product_point(PlanePoint{0.25, 2}, euclid_point({-3}));
  CHECK(point_from_json(prod, point_to_json(prod, q)) == q);
  CHECK_THROWS_AS(point_from_json(ModelSpace::half_plane(), Json::array({0, -1})), ConfigError);
}

TEST_CASE("every section is present or explicitly skipped") {
  const ExperimentConfig cfg = parse_config(minimal_tree());
  const RunResult r = run("all", cfg);
  for (const std::string& s : subcommands()) {
    if (s == "all") continue;
    INFO(s);
    REQUIRE(r.body.contains(s));
    CHECK(r.body.at(s).contains("status"));
    if (r.body.at(s).at("status") == "skipped") CHECK(r.body.at(s).contains("reason"));
  }
}

TEST_CASE("replay of refutation witnesses") {
  const ExperimentConfig cfg = load_config(config_path("euclid.json"));
  const RunResult r = run("rank1", cfg);
  CHECK(r.exit_code == 0);
  Json report = make_report(cfg, "rank1", r, 0.0);
  const ReplayResult ok = replay(report);
  CHECK(ok.ok);
  CHECK(ok.checked >= 8);

  Json corrupt = report;
  Json& w = corrupt["body"]["rank1"]["flat_control"]["rows"][3]["witness"];
  w["diameter"] = w["diameter"].get<double>() + 0.5;
  const ReplayResult bad = replay(corrupt);
  CHECK_FALSE(bad.ok);
  CHECK(bad.failures.size() == 1);

  Json empty = make_report(cfg, "axioms", run("axioms", cfg), 0.0);
  const ReplayResult vac = replay(empty);
  CHECK(vac.ok);
  CHECK(vac.checked == 0);

  Json wrong = report;
  wrong["schema"] = "qmorph.report/0";
  CHECK_THROWS_AS(replay(wrong), ConfigError);
}

TEST_CASE("replay of lambda paths and equivalence witnesses") {
  const ExperimentConfig cfg = load_config(config_path("tree_aab.json"));
  Json report = make_report(cfg, "qm", run("qm", cfg), 0.0);
  CHECK(replay(report).ok);
  report["body"]["qm"]["witnesses"][0]["value"] = 5.0;
  CHECK_FALSE(replay(report).ok);

  Json eq = make_report(cfg, "equiv", run("equiv", cfg), 0.0);
  const ReplayResult e = replay(eq);
  CHECK(e.ok);
  CHECK(e.checked == 2);
  eq["body"]["equiv"]["search"]["witness"]["gamma"] = "b";
  CHECK_FALSE(replay(eq).ok);
}

TEST_CASE("report bodies are deterministic") {
  const ExperimentConfig cfg = load_config(config_path("halfplane.json"), std::nullopt, 0.1);
  const Json a = run("axioms", cfg).body;
  const Json b = run("axioms", cfg).body;
  CHECK(a.dump() == b.dump());
}

TEST_CASE("command line exit codes") {
  const std::string bad = temp_path("malformed.json");
  {
    std::ofstream f(bad);
    f << "{\"schema\": \"qmorph.config/1\", \"space\": ";
  }
  const std::string out = temp_path("malformed_report.json");
  std::remove(out.c_str());
  CHECK(run_cli("axioms --config " + bad + " --out " + out) == 2);
  CHECK_FALSE(std::ifstream(out).good());
  CHECK(run_cli("axioms --config " + config_path("euclid.json") + " --out " + out) == 0);
  CHECK(run_cli("replay " + out) == 0);
  CHECK(run_cli("bogus --config " + config_path("euclid.json")) == 2);
  CHECK(run_cli("qm --config " + config_path("euclid.json") + " --budget-scale -1") == 2);
}
