#include "slideopt/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace slideopt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Effective simple term with h folded in; requires h to be an l1 penalty and
// the problem's own simple term to be absent.
SimpleTerm folded_simple(const CompositeProblem& problem) {
  if (!problem.h_as_simple())
    throw std::invalid_argument("baseline: h is not representable in the prox subproblem");
  if (problem.simple().kind() != SimpleTerm::Kind::zero)
    throw std::invalid_argument("baseline: cannot fold h into a nonzero simple term");
  return *problem.h_as_simple();
}

void push_counters(RunRecord& rec, const CompositeProblem& problem,
                   const CallCounts& base, Clock::time_point t0) {
  const CallCounts now = problem.counters();
  rec.grad_calls.push_back(now.grad - base.grad);
  rec.subgrad_calls.push_back(now.subgrad - base.subgrad);
  rec.stoch_calls.push_back(now.stoch - base.stoch);
  rec.elapsed_ms.push_back(ms_since(t0));
}

void push_objective(RunRecord& rec, const CompositeProblem& problem,
                    const Vector& x, bool force, const RunOptions& options) {
  if (options.trace_objective || force) {
    const double v = problem.psi(x);
    rec.psi.push_back(v);
    if (problem.reference()) rec.gap.push_back(v - problem.reference()->second);
  }
  if (options.record_iterates) rec.iterates.push_back(x);
}

}  // namespace

RunRecord prox_grad_run(const CompositeProblem& problem, int n_iters,
                        const std::vector<double>& beta,
                        const RunOptions& options) {
  if (n_iters < 1) throw std::invalid_argument("prox_grad_run: N must be >= 1");
  if (static_cast<int>(beta.size()) < n_iters)
    throw std::invalid_argument("prox_grad_run: stepsize sequence too short");
  const SimpleTerm simple = folded_simple(problem);
  ProxKernel kernel(problem.geometry(), simple);

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();
  RunRecord rec;
  rec.algorithm = "prox_grad";
  rec.seed = options.seed;
  rec.schedule = {"constant", problem.smooth().lipschitz(),
                  problem.nonsmooth().bound(), 0.0,
                  problem.geometry().modulus(), 0.0, n_iters};

  Vector x = options.x0.value_or(problem.start_point());
  Vector g(x.size()), xn(x.size());
  for (int k = 1; k <= n_iters; ++k) {
    const double bk = beta[k - 1];
    if (!(bk > 0.0)) throw std::invalid_argument("prox_grad_run: beta must be positive");
    problem.smooth().gradient_into(x, g);
    kernel.step(g, x, bk, x, 0.0, xn);  // duplicate anchor, single weight
    x = xn;
    push_counters(rec, problem, base, t0);
    push_objective(rec, problem, x, k == n_iters, options);
  }
  rec.x_final = std::move(x);
  return rec;
}

RunRecord prox_grad_run(const CompositeProblem& problem, int n_iters,
                        double beta, const RunOptions& options) {
  return prox_grad_run(problem, n_iters, std::vector<double>(n_iters, beta),
                       options);
}

RunRecord accel_prox_run(const CompositeProblem& problem, int n_iters,
                         const BaselineConfig& config,
                         const RunOptions& options) {
  if (n_iters < 1) throw std::invalid_argument("accel_prox_run: N must be >= 1");
  const bool linearized = config.kind == BaselineKind::accel_linearized_h;
  if (config.kind == BaselineKind::prox_gradient)
    throw std::invalid_argument("accel_prox_run: use prox_grad_run for the plain method");

  const SimpleTerm simple =
      linearized ? problem.simple() : folded_simple(problem);
  ProxKernel kernel(problem.geometry(), simple);

  const double L = problem.smooth().lipschitz();
  const double nu = problem.geometry().modulus();
  const double M = problem.nonsmooth().bound();

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();
  RunRecord rec;
  rec.algorithm = linearized ? "accel_linearized" : "accel_prox";
  rec.seed = options.seed;
  rec.schedule = {"accelerated", L, M, 0.0, nu, 0.0, n_iters};

  Vector x = options.x0.value_or(problem.start_point());
  Vector xbar = x;
  Vector xunder(x.size()), lin(x.size()), hsub(x.size()), xn(x.size());

  for (int k = 1; k <= n_iters; ++k) {
    const double gk =
        config.constant_gamma ? *config.constant_gamma : 2.0 / (k + 2.0);
    double bk = 2.0 * L / (nu * k);
    if (linearized) {
      // Growing prox weight flattens the subgradient noise floor at the
      // optimal 1/sqrt(N) rate.
      bk += M * std::sqrt(static_cast<double>(k)) /
            std::sqrt(3.0 * nu * std::max(config.distance_estimate, 1e-12));
    }
    xunder = (1.0 - gk) * xbar + gk * x;
    problem.smooth().gradient_into(xunder, lin);
    if (linearized) {
      problem.nonsmooth().subgradient_into(xunder, hsub);
      lin += hsub;
    }
    kernel.step(lin, x, bk, x, 0.0, xn);
    x = xn;
    xbar = (1.0 - gk) * xbar + gk * x;
    push_counters(rec, problem, base, t0);
    push_objective(rec, problem, xbar, k == n_iters, options);
  }
  rec.x_final = std::move(xbar);
  return rec;
}

}  // namespace slideopt
