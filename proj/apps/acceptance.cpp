#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dbc/harness.hpp"
#include "json.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  double worst_ratio = 0.0;
  int records = 0;
};

Outcome collect(const std::vector<dbc::SuiteReport>& reports, int criterion) {
  Outcome o;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      if (c.criterion != criterion) continue;
      ++o.records;
      o.pass = o.pass && c.pass;
      if (c.tol > 0) o.worst_ratio = std::max(o.worst_ratio, c.max_residual / c.tol);
    }
  }
  o.pass = o.pass && o.records > 0;
  return o;
}

double ms_for(const std::vector<dbc::SuiteReport>& reports, int criterion) {
  double ms = 0.0;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      if (c.criterion == criterion) ms += c.wall_ms;
    }
  }
  return ms;
}

std::string strip_wall(const std::string& json) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(json);
  for (auto& r : doc) r.erase("wall_ms");
  return doc.dump();
}

void line(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
}

}  // namespace

int main() {
  dbc::SuiteConfig config;
  const auto t0 = Clock::now();
  const std::vector<dbc::SuiteReport> first = dbc::run(config);
  const double ms_first = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  const auto t1 = Clock::now();
  const std::vector<dbc::SuiteReport> second = dbc::run(config);
  const double ms_second = std::chrono::duration<double, std::milli>(Clock::now() - t1).count();

  // Budgets in milliseconds for the criteria that carry one.
  const std::vector<std::pair<int, double>> budgets = {{1, 5e3}, {2, 3e4}, {3, 1.2e5}};
  bool all = true;
  for (int k = 1; k <= 8; ++k) {
    const Outcome o = collect(first, k);
    double budget = 0.0;
    for (const auto& [c, b] : budgets) {
      if (c == k) budget = b;
    }
    const double ms = ms_for(first, k);
    const bool timed_ok = budget == 0.0 || ms < budget;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "(%d records, worst residual/tol %.3g, %.0f ms%s)", o.records, o.worst_ratio, ms,
                  budget > 0.0 ? (std::string(", budget ") + std::to_string(static_cast<int>(budget)) + " ms").c_str() : "");
    line(k, o.pass && timed_ok, buf);
    all = all && o.pass && timed_ok;
  }
  const bool same = strip_wall(dbc::report_json(first)) == strip_wall(dbc::report_json(second));
  const double total = ms_first + ms_second;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "(reports %s, two runs %.0f ms, budget 300000 ms)", same ? "identical" : "differ",
                total);
  line(9, same && total < 3e5, buf);
  all = all && same && total < 3e5;
  return all ? 0 : 1;
}
