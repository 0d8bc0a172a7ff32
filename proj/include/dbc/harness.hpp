#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbc/lie.hpp"

namespace dbc {

// A tuple of Weyl words, one per cell factor.
using WordTuple = std::vector<WeylWord>;

struct SuiteConfig {
  std::optional<int> rank;
  std::vector<WordTuple> words;
  std::optional<int> samples;
  std::optional<double> tol;
  std::uint64_t seed = 20240917;
  std::vector<std::string> suites;
  // Number of worker threads; 0 selects the hardware concurrency.
  unsigned workers = 0;
};

struct CheckRecord {
  std::string id;
  std::string anchor;
  int samples = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  // Bookkeeping that is not serialized.
  int criterion = 0;
  double wall_ms = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  double wall_ms = 0.0;
  bool passed() const;
};

const std::vector<std::string>& suite_names();

// Parse "1,2,1" into the tuple ((s1), (s2), (s1)).
WordTuple parse_word_tuple(const std::string& text);
std::string format_word_tuple(const WordTuple& w);

// Throws ConfigError on invalid settings.
void validate_config(const SuiteConfig& config);

SuiteReport run_suite(const std::string& suite, const SuiteConfig& config);
std::vector<SuiteReport> run(const SuiteConfig& config);

// Decimal string with 17 significant digits.
std::string format_residual(double r);

std::string report_json(const std::vector<SuiteReport>& reports);
void emit_report(const std::vector<SuiteReport>& reports, const std::string& path);

}  // namespace dbc
