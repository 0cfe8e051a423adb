#include "slideopt/ssgs.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace slideopt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

double ssgs_bound(double a_norm, int n_outer, double d_x, double d_y, double nu,
                  double nu_prime) {
  return 4.0 * std::sqrt(3.0) * a_norm * std::sqrt(d_x * d_y) /
         (std::sqrt(nu * nu_prime) * n_outer);
}

RunRecord ssgs_run(const CompositeProblem& problem, int n_outer,
                   const SsgsOptions& options) {
  if (n_outer < 1) throw std::invalid_argument("ssgs_run: N must be >= 1");
  if (!problem.saddle())
    throw std::invalid_argument("ssgs_run: problem has no bilinear-max structure");
  const SaddleSmoother& sm = *problem.saddle();
  const FeasibleSet& set = problem.geometry().feasible_set();
  if (!set.bounded())
    throw std::invalid_argument("ssgs_run: requires a bounded feasible set");

  const double nu = problem.geometry().modulus();
  const double nu_prime = sm.dual_modulus();
  const double d_x = problem.geometry().max_bregman(set.center_point());
  const double d_y = sm.dual_range();
  const double eta =
      options.eta > 0.0
          ? options.eta
          : choose_eta(sm.operator_norm(), n_outer, d_x, d_y, nu, nu_prime);
  const double lipschitz = sm.lipschitz(eta);
  const double dtilde = options.dtilde > 0.0
                            ? options.dtilde
                            : dtilde_default_fixed_stochastic(d_x, nu);
  const double m_bound = problem.nonsmooth().bound();
  const bool stochastic = problem.stochastic().has_value();
  const double sigma = stochastic ? problem.stochastic()->sigma() : 0.0;

  SlidingSchedule sched = SlidingSchedule::fixed_horizon(
      lipschitz, m_bound, nu, n_outer, dtilde, sigma);

  // Smoothed surrogate; its gradient is metered as the run's gradient call.
  SmoothOracle surrogate(
      [&sm, eta](const Vector& x) { return sm.value_grad(eta, x).value; },
      [&sm, eta](const Vector& x, Vector& out) {
        out = sm.value_grad(eta, x).gradient;
      },
      lipschitz);
  CompositeProblem smoothed(problem.geometry(), std::move(surrogate),
                            problem.nonsmooth(), problem.simple(),
                            problem.start_point());
  if (stochastic) smoothed.set_stochastic(*problem.stochastic());
  smoothed.adopt_counters(problem);

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();

  RunRecord rec;
  rec.algorithm = "ssgs";
  rec.seed = options.seed;
  rec.schedule = {to_string(sched.policy()), lipschitz, m_bound, sigma, nu,
                  dtilde, n_outer};

  Vector x = options.x0.value_or(problem.start_point());
  Vector xbar = x;
  Vector xunder(x.size());
  AffineModel model;
  const auto& ref = problem.reference();

  for (int k = 1; k <= n_outer; ++k) {
    const double gk = sched.gamma(k);
    xunder = (1.0 - gk) * xbar + gk * x;
    model.c = smoothed.smooth().gradient(xunder);
    std::pair<Vector, Vector> inner;
    if (stochastic) {
      StreamKey key{options.seed, 0, static_cast<std::uint64_t>(k)};
      inner = sprox_sliding(smoothed, model, x, sched.beta(k), sched.big_t(k),
                            sched, key);
    } else {
      inner = prox_sliding(smoothed, model, x, sched.beta(k), sched.big_t(k),
                           sched);
    }
    x = std::move(inner.first);
    xbar = (1.0 - gk) * xbar + gk * inner.second;

    const CallCounts now = problem.counters();
    rec.grad_calls.push_back(now.grad - base.grad);
    rec.subgrad_calls.push_back(now.subgrad - base.subgrad);
    rec.stoch_calls.push_back(now.stoch - base.stoch);
    rec.elapsed_ms.push_back(ms_since(t0));
    if (options.trace_objective || k == n_outer) {
      const double v = problem.psi(xbar);  // exact f, uncounted
      rec.psi.push_back(v);
      if (ref) rec.gap.push_back(v - ref->second);
    }
    if (options.record_iterates) rec.iterates.push_back(xbar);
  }
  rec.x_final = std::move(xbar);
  return rec;
}

}  // namespace slideopt
