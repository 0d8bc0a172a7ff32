#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbc/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for Poisson groupoids on generalized double Bruhat cells"};
  dbc::SuiteConfig config;
  int rank = 0;
  int samples = 0;
  double tol = 0.0;
  std::vector<std::string> words;
  std::string report_path;
  app.add_option("--rank", rank, "Rank n of SL_n");
  app.add_option("--word", words, "Comma-separated simple reflections of one cell tuple (repeatable)");
  app.add_option("--samples", samples, "Samples per check (overrides the per-check defaults)");
  app.add_option("--tol", tol, "Tolerance for every residual check (overrides the per-check defaults)");
  app.add_option("--seed", config.seed, "Seed of the keyed random streams");
  app.add_option("--suite", config.suites, "Suite to run (repeatable): kernel, gamma, cells, gdbc, twist, tstar_c, poisson");
  app.add_option("--report", report_path, "Path of the JSON report");
  app.add_option("--workers", config.workers, "Worker threads (0 = hardware concurrency)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (app.count("--rank")) config.rank = rank;
    if (app.count("--samples")) config.samples = samples;
    if (app.count("--tol")) config.tol = tol;
    for (const auto& w : words) config.words.push_back(dbc::parse_word_tuple(w));
    dbc::validate_config(config);
    const std::vector<dbc::SuiteReport> reports = dbc::run(config);
    bool ok = true;
    for (const auto& r : reports) {
      for (const auto& c : r.checks) {
        std::printf("%-4s %-8s %-48s %-24s tol=%.1e\n", c.pass ? "ok" : "FAIL", r.suite.c_str(), c.id.c_str(),
                    dbc::format_residual(c.max_residual).c_str(), c.tol);
        ok = ok && c.pass;
      }
    }
    if (!report_path.empty()) dbc::emit_report(reports, report_path);
    return ok ? 0 : 1;
  } catch (const dbc::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const dbc::IoError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
