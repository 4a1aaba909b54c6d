#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "quatfrac/error.hpp"
#include "scenarios.hpp"

using namespace quatfrac;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::IoError;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto one = cli::parse_config(json::parse(R"({"scenario": "rl_const", "seed": 3, "samples": 4})"), {}, {});
  REQUIRE(one.size() == 1);
  CHECK(one[0].id == "rl_const");
  CHECK(one[0].seed == 3);
  CHECK(one[0].samples == 4);

  const auto many = cli::parse_config(
      json::parse(R"({"scenarios": ["rl_const", {"id": "bp_classical", "quadrature": {"order": 16}}],
                      "quadrature": {"order": 20}, "alpha": [0.3, [0.5, 0.1], 0.7, 0.5]})"),
      2, 99);
  REQUIRE(many.size() == 2);
  CHECK(many[0].spec.order == 20);
  CHECK(many[1].spec.order == 16);
  CHECK(many[1].spec.refine_levels == 2);
  CHECK(many[1].seed == 99);
  CHECK(many[0].alpha[1] == Complex(0.5, 0.1));

  auto parse = [](const char* text) { return [text] { cli::parse_config(json::parse(text), {}, {}); }; };
  CHECK(kind_of(parse(R"({"scenario": "nope"})")) == ErrorKind::ConfigError);
  CHECK(kind_of(parse(R"({"seed": 1})")) == ErrorKind::ConfigError);
  CHECK(kind_of(parse(R"({"scenario": "rl_const", "alpha": [0.3, 1.5, 0.7, 0.5]})")) == ErrorKind::ConfigError);
  CHECK(kind_of(parse(R"({"scenario": "rl_const", "psi": [1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]})")) ==
        ErrorKind::ConfigError);
  CHECK(message_of(parse(R"({"scenario": "rl_const", "quadrature": {"order": "x"}})")).find("quadrature.order") !=
        std::string::npos);
  CHECK(message_of(parse(R"({"scenarios": ["rl_const", {"id": "teodorescu", "box": {"a": [0, 0, 0, 0]}}]})"))
            .find("scenarios[1].box") != std::string::npos);
  CHECK(kind_of(parse(R"({"scenario": "rl_const", "quadrature": {"order": 1}})")) == ErrorKind::ConfigError);
  CHECK(kind_of(parse(R"({"scenario": "rl_const", "colour": 1})")) == ErrorKind::ConfigError);
}

TEST_CASE("reports") {
  cli::Report empty;
  CHECK(cli::to_csv(empty) == "scenario,field_id,qx_id,level,residual,skipped_fraction,wall_ms\n");
  CHECK(empty.pass());

  cli::Report r;
  auto configs = cli::parse_config(json::parse(R"({"scenario": "rl_const"})"), {}, {});
  cli::run(configs[0], r);
  CHECK(r.pass());
  CHECK(r.rows.size() == 30);
  CHECK(r.summary.back().tolerance == 1e-10);

  // 17 significant digits round-trip every residual.
  const std::string csv = cli::to_csv(r);
  const std::size_t first = csv.find('\n') + 1;
  const std::string row = csv.substr(first, csv.find('\n', first) - first);
  double residual = 0.0;
  std::sscanf(row.c_str() + row.find(',', row.find(',', row.find(',', row.find(',') + 1) + 1) + 1) + 1, "%lf",
              &residual);
  CHECK(residual == r.rows[0].residual);

  const json j = json::parse(cli::to_json(r).dump());
  CHECK(j["rows"].size() == r.rows.size());
  CHECK(j["rows"][3]["residual"].get<double>() == r.rows[3].residual);
  CHECK(j["summary"][0]["scenario"] == "rl_const");
  CHECK(j["pass"] == true);

  cli::Report again;
  cli::run(configs[0], again);
  CHECK(cli::to_csv(again) == csv);

  CHECK(kind_of([] { cli::write_file("/nonexistent/dir/report.csv", "x"); }) == ErrorKind::IoError);
}

TEST_CASE("numeric errors carry the case id") {
  auto configs = cli::parse_config(
      json::parse(R"({"scenario": "bp_classical", "fields": ["one"], "points": [[1.0, 0.5, 0.5, 0.5]]})"), {}, {});
  cli::Report r;
  const std::string msg = message_of([&] { cli::run(configs[0], r); });
  CHECK(msg.find("case bp_classical/p0") != std::string::npos);
  auto bad_field = cli::parse_config(json::parse(R"({"scenario": "bp_classical", "fields": ["nope"]})"), {}, {});
  CHECK(kind_of([&] { cli::run(bad_field[0], r); }) == ErrorKind::ConfigError);
}
