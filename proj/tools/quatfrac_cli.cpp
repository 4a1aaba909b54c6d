#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "quatfrac/error.hpp"
#include "scenarios.hpp"

using namespace quatfrac;

int main(int argc, char** argv) {
  CLI::App app{"quatfrac_cli: residual studies for quaternionic fractional operators"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "run the scenarios of a config file");
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<int> refine;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_path, "report path (stdout if omitted)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--refine", refine, "refinement levels");
  run->add_option("--seed", seed, "corpus seed");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ConfigError, std::string("$: ") + e.what());
    }
    auto configs = cli::parse_config(doc, refine, seed);
    if (const char* t = std::getenv("THREADS")) {
      const int n = std::atoi(t);
      if (n < 1) throw Error(ErrorKind::ConfigError, "THREADS: expected a positive integer");
      for (auto& c : configs) c.spec.threads = n;
    }

    cli::Report report;
    for (const auto& c : configs) {
      cli::run(c, report);
      const auto& s = report.summary.back();
      std::fprintf(stderr, "%-20s %s  max residual %.3e  tolerance %.0e%s%s\n", s.id.c_str(),
                   s.pass ? "PASS" : "FAIL", s.max_residual, s.tolerance, s.note.empty() ? "" : "  ",
                   s.note.c_str());
    }
    const std::string text = format == "csv" ? cli::to_csv(report) : cli::to_json(report).dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else cli::write_file(out_path, text);
    return report.pass() ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
