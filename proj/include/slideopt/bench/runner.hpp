#pragma once

#include "slideopt/bench/config.hpp"
#include "slideopt/bench/report.hpp"

namespace slideopt::bench {

// Executes the configured trials (parallel across seeds), writes the report
// files, and returns the in-memory report. Deterministic for a fixed config:
// every column except elapsed_ms is reproduced byte for byte.
Report run_experiment(const ExperimentConfig& config);

// Target-accuracy mode: picks the horizon from the policy guarantee for each
// accuracy, runs at that horizon, and fits log-log slopes of the call counts
// against 1/eps.
Report complexity_sweep(const ExperimentConfig& config,
                        const std::vector<double>& accuracies);

// Invariant suite on a named instance; prints one line per check and returns
// true when every bound holds.
bool verify_bounds(const std::string& preset_name, std::ostream& out);

// Horizon needed by the fixed-horizon policy to guarantee the accuracy.
int horizon_for_accuracy(double L, double nu, double d_x, double dtilde,
                         double eps, bool stochastic);

}  // namespace slideopt::bench
