#pragma once

#include <utility>

#include "slideopt/oracles.hpp"
#include "slideopt/run_record.hpp"
#include "slideopt/schedule.hpp"

namespace slideopt {

// Affine model kept fixed across one inner sliding pass, typically the
// linearization of f at the outer search point.
struct AffineModel {
  double c0 = 0.0;
  Vector c;
  double value(const Vector& x) const { return c0 + c.dot(x); }
};

// Optional inner-loop diagnostics (the convergence checks evaluate both
// sides of the per-iteration estimates from these).
struct InnerTrace {
  std::vector<Vector> u;       // u_t, t = 1..T
  std::vector<Vector> u_tilde; // running weighted average
};

// Inner sliding pass: T prox steps against the fixed model g, all reusing
// the same anchor x with weight beta. Returns (u_T, u_tilde_T) and consumes
// exactly T subgradient calls and no gradient calls.
std::pair<Vector, Vector> prox_sliding(const CompositeProblem& problem,
                                       const AffineModel& g, const Vector& x,
                                       double beta, long long t_steps,
                                       const SlidingSchedule& schedule,
                                       InnerTrace* trace = nullptr);

// Outer loop: N accelerated steps, each computing one gradient of f and
// delegating the subproblem to prox_sliding with sliding period T_k.
RunRecord gs_run(const CompositeProblem& problem,
                 const SlidingSchedule& schedule, int n_outer,
                 const RunOptions& options = {});

// Direct evaluation of the deterministic convergence estimate
//   B_d(N) = Gamma_N beta_1 V0 / (1 - P_{T_1})
//          + (M^2 Gamma_N / (2 nu)) sum_k sum_i gamma_k P_{T_k} /
//            (Gamma_k beta_k (1 - P_{T_k}) p_i^2 P_{i-1}),
// with V0 = V(x_0, x*). The compact-set variant replaces the first term by
// gamma_N beta_N Vbar(x*) / (1 - P_{T_N}).
double bound_bd(const SlidingSchedule& schedule, double v0, int n_outer);
double bound_bd_compact(const SlidingSchedule& schedule, double vbar_star,
                        int n_outer);

// Closed-form policy guarantees for the two built-in schedules.
double gs_bound_fixed(double L, double nu, int n_outer, double v0, double dtilde);
double gs_bound_compact(double L, double nu, int n_outer, double vbar_star,
                        double dtilde);

// sum_{i=1}^{T} 1 / (p_i^2 P_{i-1}) = 2 (T + H_T) for p_t = t/2.
double inner_weight_sum(long long t_steps);
// sum_{i=1}^{T} (i+1)^2, the squared-weight sum of the large-deviation term.
double inner_weight_sq_sum(long long t_steps);

}  // namespace slideopt
