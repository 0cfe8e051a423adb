#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slideopt/geometry.hpp"
#include "slideopt/oracles.hpp"
#include "slideopt/schedule.hpp"

namespace slideopt {

struct ScheduleEcho {
  std::string policy;
  double L = 0, M = 0, sigma = 0, nu = 0, dtilde = 0;
  int horizon = 0;
};

// Per-outer-iteration trace of one run. Counter columns are cumulative and
// taken relative to the counter state at the start of the run, so a shared
// problem can host several sequential runs.
struct RunRecord {
  std::string algorithm;
  ScheduleEcho schedule;
  std::uint64_t seed = 0;

  std::vector<double> psi;           // objective at xbar_k (diagnostic channel)
  std::vector<double> gap;           // psi - psi*, empty without a reference
  std::vector<long long> grad_calls;
  std::vector<long long> subgrad_calls;
  std::vector<long long> stoch_calls;
  std::vector<double> elapsed_ms;
  std::vector<Vector> iterates;      // xbar_k, kept only on request

  Vector x_final;

  int outer_count() const { return static_cast<int>(grad_calls.size()); }
  long long final_grad() const { return grad_calls.empty() ? 0 : grad_calls.back(); }
  long long final_subgrad() const {
    return subgrad_calls.empty() ? 0 : subgrad_calls.back();
  }
  long long final_stoch() const { return stoch_calls.empty() ? 0 : stoch_calls.back(); }
  double final_gap() const { return gap.empty() ? 0.0 : gap.back(); }
  double final_elapsed_ms() const {
    return elapsed_ms.empty() ? 0.0 : elapsed_ms.back();
  }
};

struct RunOptions {
  bool record_iterates = false;
  // Evaluate psi (and the gap when a reference is cached) at every outer
  // iteration; the final point is always evaluated.
  bool trace_objective = true;
  std::uint64_t seed = 0;
  std::uint64_t phase = 0;
  // Start override; defaults to the problem's start point.
  std::optional<Vector> x0;
};

}  // namespace slideopt
