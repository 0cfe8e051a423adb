#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace slideopt::bench {

// One CSV row: a trial observed at one checkpoint (an outer iteration for
// run mode, a target accuracy for sweep mode).
struct ReportRow {
  std::uint64_t trial_seed = 0;
  std::string algorithm;
  std::string policy;
  double k_or_epsilon = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  long long grad_calls = 0;
  long long subgrad_calls = 0;
  long long stoch_calls = 0;
  double elapsed_ms = 0.0;
};

struct Aggregate {
  double k_or_epsilon = 0.0;
  int trials = 0;
  double mean_gap = 0.0;
  double se_gap = 0.0;
  double mean_bound = 0.0;
  double mean_grad = 0.0;
  double mean_subgrad = 0.0;
  double mean_stoch = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<Aggregate> aggregates;
  // Every derived constant needed to replay the experiment.
  std::map<std::string, std::string> config_echo;
  // Least-squares slopes of log(calls) against log(1/eps) for sweeps.
  std::map<std::string, double> slopes;
  bool bounds_hold = true;

  void recompute_aggregates();
};

// Stable text form of a double: shortest round-trip representation, C locale.
std::string format_double(double v);

std::string to_csv(const Report& report);
std::string to_json(const Report& report);
// Gap-vs-checkpoint line chart (log y); one polyline per series quantile.
std::string to_svg(const Report& report);

void write_report_files(const Report& report, const std::string& out_dir,
                        const std::vector<std::string>& formats,
                        const std::string& stem);

// Parses an emitted CSV back into rows (round-trip checks).
std::vector<ReportRow> parse_csv(const std::string& text);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace slideopt::bench
