#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qmorph/errors.hpp"
#include "qmorph/runner.hpp"

namespace {

int emit(const qmorph::Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "qmorph: cannot write " << out << "\n";
    return 2;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmorph: contraction certificates and quasimorphism experiments"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::uint64_t> seed;
  double scale = 1.0;
  std::string out;

  for (const std::string& name : qmorph::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiments");
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--budget-scale", scale, "multiply every budget");
    sub->add_option("--out", out, "write the report here instead of stdout");
  }
  std::string report_path;
  CLI::App* rep = app.add_subcommand("replay", "re-evaluate every witness in a report");
  rep->add_option("report", report_path, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "replay") {
      std::ifstream in(report_path);
      if (!in) throw qmorph::ConfigError("cannot open report " + report_path);
      qmorph::Json report;
      try {
        in >> report;
      } catch (const qmorph::Json::exception& e) {
        throw qmorph::ConfigError(std::string("malformed report: ") + e.what());
      }
      const qmorph::ReplayResult r = qmorph::replay(report);
      for (const std::string& f : r.failures) std::cerr << f << "\n";
      std::cout << (r.ok ? "replay ok" : "replay failed") << " (" << r.checked << " witnesses)\n";
      return r.ok ? 0 : 1;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const qmorph::ExperimentConfig cfg = qmorph::load_config(config, seed, scale);
    const qmorph::RunResult res = qmorph::run(name, cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (emit(qmorph::make_report(cfg, name, res, wall), out) != 0) return 2;
    return res.exit_code;
  } catch (const qmorph::ConfigError& e) {
    std::cerr << "qmorph: config error: " << e.what() << "\n";
  } catch (const qmorph::BudgetError& e) {
    std::cerr << "qmorph: budget exhausted: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "qmorph: " << e.what() << "\n";
  }
  return 2;
}
