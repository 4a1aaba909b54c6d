#pragma once

// Scenario runner behind quatfrac_cli: JSON config, seeded corpus, residual
// rows and CSV/JSON reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quatfrac/iterated.hpp"

namespace quatfrac::cli {

/// One scenario with every default resolved.
struct ScenarioConfig {
  std::string id;
  Box4 box = Box4::unit();
  Box4 inner = Box4::make({0.15, 0.15, 0.15, 0.15}, {0.85, 0.85, 0.85, 0.85});
  AlphaVec alpha = AlphaVec::real(0.3, 0.5, 0.7, 0.5);
  AlphaVec beta = AlphaVec::real(0.4, 0.3, 0.2, 0.5);
  StructuralSet psi = StructuralSet::standard();
  QuadratureSpec spec{};
  std::uint64_t seed = 7;
  int samples = 20;
  Point4 q{0.4, 0.6, 0.35, 0.7};
  std::vector<Point4> points;       ///< empty: the scenario's default points
  std::vector<std::string> fields;  ///< corpus ids; empty: the scenario's default fields
  bool timing = false;
};

extern const std::vector<std::string> kScenarioIds;
/// Tolerance of a scenario's gated rows.
double scenario_tolerance(const std::string& id);

/// Parses a config document: top-level keys are defaults, "scenario" names
/// one scenario and "scenarios" lists ids or objects with their own
/// overrides. Throws ConfigError naming the offending field path.
std::vector<ScenarioConfig> parse_config(const nlohmann::json& doc, std::optional<int> refine,
                                         std::optional<std::uint64_t> seed);

struct Row {
  std::string scenario;
  std::string field_id;
  std::string qx_id;
  int level = 0;
  double residual = 0.0;
  double skipped_fraction = 0.0;
  double wall_ms = 0.0;
  bool gated = true;
};

struct ScenarioSummary {
  std::string id;
  double tolerance = 0.0;
  double max_residual = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::vector<Row> rows;
  std::vector<ScenarioSummary> summary;
  [[nodiscard]] bool pass() const;
};

/// Runs one scenario and appends its rows and summary. Numeric errors are
/// rethrown with the case id prefixed.
void run(const ScenarioConfig& config, Report& report);

std::string to_csv(const Report& report);
nlohmann::json to_json(const Report& report);
/// Writes `text` to `path`; IoError on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace quatfrac::cli
