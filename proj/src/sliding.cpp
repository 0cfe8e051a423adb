#include "slideopt/sliding.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slideopt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::pair<Vector, Vector> prox_sliding(const CompositeProblem& problem,
                                       const AffineModel& g, const Vector& x,
                                       double beta, long long t_steps,
                                       const SlidingSchedule& schedule,
                                       InnerTrace* trace) {
  if (!(beta > 0.0)) throw std::invalid_argument("prox_sliding: beta must be positive");
  if (t_steps < 1) throw std::invalid_argument("prox_sliding: T must be >= 1");
  if (!problem.geometry().feasible_set().contains(x, 1e-9))
    throw std::invalid_argument("prox_sliding: infeasible prox center");

  ProxKernel kernel(problem.geometry(), problem.simple());
  Vector u = x;
  Vector u_tilde = x;
  Vector u_next(x.size());
  Vector lin(x.size());

  for (long long t = 1; t <= t_steps; ++t) {
    problem.nonsmooth().subgradient_into(u, lin);
    lin += g.c;
    kernel.step(lin, x, beta, u, beta * schedule.p(t), u_next);
    u.swap(u_next);
    // theta_1 = 1, so u_tilde restarts at u_1.
    const double theta = schedule.theta(t);
    u_tilde = (1.0 - theta) * u_tilde + theta * u;
    if (trace) {
      trace->u.push_back(u);
      trace->u_tilde.push_back(u_tilde);
    }
  }
  return {std::move(u), std::move(u_tilde)};
}

RunRecord gs_run(const CompositeProblem& problem,
                 const SlidingSchedule& schedule, int n_outer,
                 const RunOptions& options) {
  if (n_outer < 1) throw std::invalid_argument("gs_run: N must be >= 1");
  schedule.validate_for_problem(problem.smooth().lipschitz(),
                                problem.geometry().modulus(), n_outer);

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();

  RunRecord rec;
  rec.algorithm = "gs";
  rec.seed = options.seed;
  rec.schedule = {to_string(schedule.policy()), schedule.lipschitz(),
                  schedule.nonsmooth_bound(), schedule.sigma(),
                  schedule.modulus(), schedule.dtilde(), n_outer};

  Vector x = options.x0.value_or(problem.start_point());
  Vector xbar = x;
  Vector xunder(x.size());
  AffineModel model;
  const auto& ref = problem.reference();

  for (int k = 1; k <= n_outer; ++k) {
    const double gk = schedule.gamma(k);
    xunder = (1.0 - gk) * xbar + gk * x;
    model.c = problem.smooth().gradient(xunder);
    model.c0 = 0.0;  // constants do not move the argmin
    auto [x_plus, x_tilde] =
        prox_sliding(problem, model, x, schedule.beta(k), schedule.big_t(k),
                     schedule);
    x = std::move(x_plus);
    xbar = (1.0 - gk) * xbar + gk * x_tilde;

    const CallCounts now = problem.counters();
    rec.grad_calls.push_back(now.grad - base.grad);
    rec.subgrad_calls.push_back(now.subgrad - base.subgrad);
    rec.stoch_calls.push_back(now.stoch - base.stoch);
    rec.elapsed_ms.push_back(ms_since(t0));
    if (options.trace_objective || k == n_outer) {
      const double v = problem.psi(xbar);
      rec.psi.push_back(v);
      if (ref) rec.gap.push_back(v - ref->second);
    }
    if (options.record_iterates) rec.iterates.push_back(xbar);
  }
  rec.x_final = std::move(xbar);
  return rec;
}

double inner_weight_sum(long long t_steps) {
  // 2 sum_{i=1}^{T} (i+1)/i = 2 (T + H_T).
  double harmonic = 0.0;
  if (t_steps <= 100000) {
    for (long long i = 1; i <= t_steps; ++i) harmonic += 1.0 / i;
  } else {
    const double t = static_cast<double>(t_steps);
    constexpr double euler = 0.57721566490153286060651209008240243;
    harmonic = std::log(t) + euler + 1.0 / (2.0 * t) - 1.0 / (12.0 * t * t);
  }
  return 2.0 * (static_cast<double>(t_steps) + harmonic);
}

double inner_weight_sq_sum(long long t_steps) {
  // sum_{i=1}^{T} (i+1)^2 = (T+1)(T+2)(2T+3)/6 - 1.
  const double t = static_cast<double>(t_steps);
  return (t + 1.0) * (t + 2.0) * (2.0 * t + 3.0) / 6.0 - 1.0;
}

namespace {

double bd_noise_sum(const SlidingSchedule& s, int n_outer, double m2,
                    double denom_factor) {
  // sum_k gamma_k P_{T_k} / (Gamma_k beta_k (1 - P_{T_k})) * inner sum.
  double total = 0.0;
  for (int k = 1; k <= n_outer; ++k) {
    const long long tk = s.big_t(k);
    const double ptk = s.big_p(tk);
    const double w = s.gamma(k) * ptk /
                     (s.gamma_prod(k) * s.beta(k) * (1.0 - ptk));
    total += w * inner_weight_sum(tk);
  }
  return s.gamma_prod(n_outer) * m2 * total / denom_factor;
}

}  // namespace

double bound_bd(const SlidingSchedule& schedule, double v0, int n_outer) {
  if (n_outer < 1) throw std::invalid_argument("bound_bd: N must be >= 1");
  const double first = schedule.gamma_prod(n_outer) * schedule.beta(1) * v0 /
                       (1.0 - schedule.big_p(schedule.big_t(1)));
  const double m2 = schedule.nonsmooth_bound() * schedule.nonsmooth_bound();
  return first + bd_noise_sum(schedule, n_outer, m2, 2.0 * schedule.modulus());
}

double bound_bd_compact(const SlidingSchedule& schedule, double vbar_star,
                        int n_outer) {
  if (n_outer < 1) throw std::invalid_argument("bound_bd: N must be >= 1");
  const double first = schedule.gamma(n_outer) * schedule.beta(n_outer) *
                       vbar_star /
                       (1.0 - schedule.big_p(schedule.big_t(n_outer)));
  const double m2 = schedule.nonsmooth_bound() * schedule.nonsmooth_bound();
  return first + bd_noise_sum(schedule, n_outer, m2, 2.0 * schedule.modulus());
}

double gs_bound_fixed(double L, double nu, int n_outer, double v0,
                      double dtilde) {
  const double n = n_outer;
  return 2.0 * L / (n * (n + 1.0)) * (3.0 * v0 / nu + 2.0 * dtilde);
}

double gs_bound_compact(double L, double nu, int n_outer, double vbar_star,
                        double dtilde) {
  const double n = n_outer;
  return L / ((n + 1.0) * (n + 2.0)) *
         (13.5 * vbar_star / nu + 8.0 * dtilde / 3.0);
}

}  // namespace slideopt
