#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmorph/action.hpp"
#include "qmorph/contraction.hpp"
#include "qmorph/space.hpp"

namespace qmorph {

using Json = nlohmann::json;

inline constexpr const char* kConfigSchema = "qmorph.config/1";
inline constexpr const char* kReportSchema = "qmorph.report/1";

struct Budgets {
  int ball_radius = 3;
  int ball_samples = 64;
  int n_max = 6;
  int power_max = 5;
  int word_len_max = 4;
  int defect_radius = 3;
  int grid_max = 8;
  int homogenize_n = 64;
  int suite_count = 100;
  int lemma_radius = 3;
  int wpd_radius = 6;
  int equiv_radius = 4;
  int schottky_n = 8;
  int family_count = 2;
  int lambda_pairs = 100;
};

/// A parsed experiment. `echo` is the normalized configuration with all
/// defaults filled in; it is what reports carry and what replay rebuilds from.
struct ExperimentConfig {
  Json echo;
  ModelSpace space = ModelSpace::tree(2);
  GroupModel group = GroupModel::free(2);
  Word word;
  Point basepoint;
  double C = 1.0;
  double B = 1.0;
  std::uint64_t seed = 0;
  Budgets budgets;
};

/// Throws ConfigError on malformed input or nonpositive budgets.
ExperimentConfig parse_config(const Json& j, std::optional<std::uint64_t> seed = std::nullopt,
                              double budget_scale = 1.0);
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed = std::nullopt,
                             double budget_scale = 1.0);

Json point_to_json(const ModelSpace& space, const Point& p);
/// Throws ConfigError if j does not describe a valid point of the space.
Point point_from_json(const ModelSpace& space, const Json& j);

const std::vector<std::string>& subcommands();

struct RunResult {
  Json body;
  int exit_code = 0;  // 0 all properties held, 1 a property was violated
};

/// Runs one subcommand. Throws ConfigError for unknown subcommands and
/// propagates ConfigError/BudgetError from the operations.
RunResult run(const std::string& subcommand, const ExperimentConfig& cfg);

Json make_report(const ExperimentConfig& cfg, const std::string& subcommand, const RunResult& result,
                 double wall_clock_seconds);

struct ReplayResult {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};

/// Re-evaluates every witness in the report body against the echoed config.
/// Throws ConfigError on a schema mismatch.
ReplayResult replay(const Json& report);

}  // namespace qmorph
