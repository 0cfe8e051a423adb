#pragma once

#include "slideopt/oracles.hpp"
#include "slideopt/run_record.hpp"

namespace slideopt {

// Comparator methods. The exact-h variants fold h into the prox subproblem
// and are only admissible when the problem exposes h as a simple term; the
// linearized variant replaces h by its tangent at the search point and works
// for any h at the price of one subgradient per iteration.
enum class BaselineKind { prox_gradient, accel_prox_exact_h, accel_linearized_h };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::accel_prox_exact_h;
  // Fixed prox weight for prox_gradient (beta_k = beta); the accelerated
  // variants use beta_k = 2L/(nu k) and gamma_k = 2/(k+2) unless a constant
  // gamma is forced.
  double beta = 0.0;
  std::optional<double> constant_gamma;
  // Distance estimate entering the linearized variant's stepsize growth; the
  // nonsmooth floor needs beta_k to grow like M sqrt(k / D).
  double distance_estimate = 1.0;
};

RunRecord prox_grad_run(const CompositeProblem& problem, int n_iters,
                        const std::vector<double>& beta,
                        const RunOptions& options = {});
RunRecord prox_grad_run(const CompositeProblem& problem, int n_iters,
                        double beta, const RunOptions& options = {});

RunRecord accel_prox_run(const CompositeProblem& problem, int n_iters,
                         const BaselineConfig& config,
                         const RunOptions& options = {});

}  // namespace slideopt
