#pragma once

#include "slideopt/smoothing.hpp"
#include "slideopt/stochastic.hpp"

namespace slideopt {

struct SsgsOptions {
  // Dtilde override; 0 picks the stochastic fixed-horizon default from D_X.
  double dtilde = 0.0;
  // Smoothing level override; 0 picks choose_eta for the horizon.
  double eta = 0.0;
  std::uint64_t seed = 0;
  bool trace_objective = true;
  bool record_iterates = false;
  std::optional<Vector> x0;
};

// Sliding on the smoothed surrogate of a bilinear-max f. Each outer
// iteration costs one gradient of the surrogate (one application of A and
// one of its adjoint); the reported objective and gap are measured against
// the exact, unsmoothed f. Requires a bounded primal set. When the problem
// carries a stochastic oracle the inner passes sample it, otherwise they use
// exact subgradients.
RunRecord ssgs_run(const CompositeProblem& problem, int n_outer,
                   const SsgsOptions& options = {});

}  // namespace slideopt
