#pragma once

#include "slideopt/sliding.hpp"

namespace slideopt {

// Per-inner-step noise diagnostics, filled only on request.
struct NoiseTrace {
  std::vector<Vector> delta;   // H(u_{t-1}, xi) - h'(u_{t-1})
  std::vector<Vector> u_prev;  // the point each sample was drawn at
  std::vector<double> delta_norms;
};

// Inner sliding pass driven by the stochastic oracle: identical to
// prox_sliding except each step consumes one sample H(u_{t-1}, xi_{t-1}).
// Deterministic given the stream key; consumes exactly T samples.
std::pair<Vector, Vector> sprox_sliding(const CompositeProblem& problem,
                                        const AffineModel& g, const Vector& x,
                                        double beta, long long t_steps,
                                        const SlidingSchedule& schedule,
                                        const StreamKey& key,
                                        InnerTrace* trace = nullptr,
                                        NoiseTrace* noise = nullptr);

// Outer loop with stochastic inner passes; grad calls = N, samples = sum T_k.
RunRecord sgs_run(const CompositeProblem& problem,
                  const SlidingSchedule& schedule, int n_outer,
                  const RunOptions& options = {});

// Expectation estimate of Theorem-style quality for the stochastic runs:
//   Btilde_d(N) = Gamma_N beta_1 V0 / (1 - P_{T_1})
//               + (Gamma_N / nu) sum_k sum_i (M^2 + sigma^2) gamma_k P_{T_k}
//                 / (beta_k Gamma_k (1 - P_{T_k}) p_i^2 P_{i-1}).
double bound_bd_stochastic(const SlidingSchedule& schedule, double v0,
                           int n_outer);
double bound_bd_stochastic_compact(const SlidingSchedule& schedule,
                                   double vbar_star, int n_outer);

// Large-deviation half-width B_p(N); needs a compact set through Vbar*.
double bound_bp(const SlidingSchedule& schedule, double vbar_star, int n_outer);

// Tail mass allowed at level lambda: exp(-2 lambda^2 / 3) + exp(-lambda).
double bp_tail_mass(double lambda);

// Closed-form policy guarantees in expectation.
double sgs_bound_fixed(double L, double nu, int n_outer, double v0, double dtilde);
double sgs_bound_compact(double L, double nu, int n_outer, double vbar_star,
                         double dtilde);

// Restarted stochastic sliding for strongly convex smooth parts. Phase s
// runs a fixed-horizon schedule with Dtilde = delta0 / (nu mu 2^s) from the
// previous phase's output; the expected gap halves every phase.
struct MsgsConfig {
  double delta0 = 0.0;  // upper bound on the initial gap
  int phases = 6;
  int inner_horizon = 0;  // 0: ceil(4 sqrt(2L / (nu mu)))
  bool trace_objective = true;
};

struct PhaseResult {
  Vector y;
  double psi = 0.0;
  double gap = 0.0;  // against the cached reference when present
  long long grad_calls = 0;
  long long stoch_calls = 0;
  double elapsed_ms = 0.0;
};

int msgs_default_inner_horizon(double L, double nu, double mu);

std::vector<PhaseResult> msgs_run(const CompositeProblem& problem,
                                  const MsgsConfig& config, std::uint64_t seed);

}  // namespace slideopt
