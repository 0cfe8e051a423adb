#include "slideopt/stochastic.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace slideopt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const StochasticOracle& stochastic_or_throw(const CompositeProblem& p) {
  if (!p.stochastic())
    throw std::invalid_argument("stochastic sliding: problem has no stochastic oracle");
  return *p.stochastic();
}

}  // namespace

std::pair<Vector, Vector> sprox_sliding(const CompositeProblem& problem,
                                        const AffineModel& g, const Vector& x,
                                        double beta, long long t_steps,
                                        const SlidingSchedule& schedule,
                                        const StreamKey& key, InnerTrace* trace,
                                        NoiseTrace* noise) {
  if (!(beta > 0.0)) throw std::invalid_argument("sprox_sliding: beta must be positive");
  if (t_steps < 1) throw std::invalid_argument("sprox_sliding: T must be >= 1");
  const StochasticOracle& so = stochastic_or_throw(problem);

  ProxKernel kernel(problem.geometry(), problem.simple());
  Vector u = x;
  Vector u_tilde = x;
  Vector u_next(x.size());
  Vector lin(x.size());

  for (long long t = 1; t <= t_steps; ++t) {
    RngStream stream = key.inner_stream(static_cast<std::uint64_t>(t));
    so.sample_into(u, stream, lin);
    if (noise) {
      Vector exact(u.size());
      problem.nonsmooth().subgradient_unmetered(u, exact);
      noise->u_prev.push_back(u);
      noise->delta.push_back(lin - exact);
      noise->delta_norms.push_back(problem.geometry().dual_norm(lin - exact));
    }
    lin += g.c;
    kernel.step(lin, x, beta, u, beta * schedule.p(t), u_next);
    u.swap(u_next);
    const double theta = schedule.theta(t);
    u_tilde = (1.0 - theta) * u_tilde + theta * u;
    if (trace) {
      trace->u.push_back(u);
      trace->u_tilde.push_back(u_tilde);
    }
  }
  return {std::move(u), std::move(u_tilde)};
}

RunRecord sgs_run(const CompositeProblem& problem,
                  const SlidingSchedule& schedule, int n_outer,
                  const RunOptions& options) {
  if (n_outer < 1) throw std::invalid_argument("sgs_run: N must be >= 1");
  stochastic_or_throw(problem);
  schedule.validate_for_problem(problem.smooth().lipschitz(),
                                problem.geometry().modulus(), n_outer);

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();

  RunRecord rec;
  rec.algorithm = "sgs";
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
    StreamKey key{options.seed, options.phase, static_cast<std::uint64_t>(k)};
    auto [x_plus, x_tilde] =
        sprox_sliding(problem, model, x, schedule.beta(k), schedule.big_t(k),
                      schedule, key);
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

namespace {

double bd_noise_sum_stochastic(const SlidingSchedule& s, int n_outer) {
  double total = 0.0;
  for (int k = 1; k <= n_outer; ++k) {
    const long long tk = s.big_t(k);
    const double ptk = s.big_p(tk);
    const double w =
        s.gamma(k) * ptk / (s.gamma_prod(k) * s.beta(k) * (1.0 - ptk));
    total += w * inner_weight_sum(tk);
  }
  return s.gamma_prod(n_outer) * s.m2_effective() * total / s.modulus();
}

}  // namespace

double bound_bd_stochastic(const SlidingSchedule& schedule, double v0,
                           int n_outer) {
  const double first = schedule.gamma_prod(n_outer) * schedule.beta(1) * v0 /
                       (1.0 - schedule.big_p(schedule.big_t(1)));
  return first + bd_noise_sum_stochastic(schedule, n_outer);
}

double bound_bd_stochastic_compact(const SlidingSchedule& schedule,
                                   double vbar_star, int n_outer) {
  const double first = schedule.gamma(n_outer) * schedule.beta(n_outer) *
                       vbar_star /
                       (1.0 - schedule.big_p(schedule.big_t(n_outer)));
  return first + bd_noise_sum_stochastic(schedule, n_outer);
}

double bound_bp(const SlidingSchedule& schedule, double vbar_star, int n_outer) {
  if (n_outer < 1) throw std::invalid_argument("bound_bp: N must be >= 1");
  const double sigma = schedule.sigma();
  const double nu = schedule.modulus();
  double sq = 0.0;      // sum of alpha_{k,i}^2
  double scaled = 0.0;  // sigma^2-weighted mean-square sum
  for (int k = 1; k <= n_outer; ++k) {
    const long long tk = schedule.big_t(k);
    const double ptk = schedule.big_p(tk);
    const double base =
        schedule.gamma(k) * ptk / (schedule.gamma_prod(k) * (1.0 - ptk));
    sq += base * base * inner_weight_sq_sum(tk);
    scaled += base / schedule.beta(k) * inner_weight_sum(tk);
  }
  const double gamma_n = schedule.gamma_prod(n_outer);
  return sigma * gamma_n * std::sqrt(2.0 * vbar_star * sq / nu) +
         gamma_n * sigma * sigma * scaled / nu;
}

double bp_tail_mass(double lambda) {
  return std::exp(-2.0 * lambda * lambda / 3.0) + std::exp(-lambda);
}

double sgs_bound_fixed(double L, double nu, int n_outer, double v0,
                       double dtilde) {
  const double n = n_outer;
  return 2.0 * L / (n * (n + 1.0)) * (3.0 * v0 / nu + 4.0 * dtilde);
}

double sgs_bound_compact(double L, double nu, int n_outer, double vbar_star,
                         double dtilde) {
  const double n = n_outer;
  return L / ((n + 1.0) * (n + 2.0)) *
         (13.5 * vbar_star / nu + 16.0 * dtilde / 3.0);
}

int msgs_default_inner_horizon(double L, double nu, double mu) {
  return static_cast<int>(std::ceil(4.0 * std::sqrt(2.0 * L / (nu * mu))));
}

std::vector<PhaseResult> msgs_run(const CompositeProblem& problem,
                                  const MsgsConfig& config, std::uint64_t seed) {
  const double mu = problem.smooth().strong_convexity();
  if (!(mu > 0.0))
    throw std::invalid_argument("msgs_run: smooth component must be strongly convex");
  if (problem.geometry().kind() != GeometryKind::euclidean)
    throw std::invalid_argument("msgs_run: requires a quadratically growing prox term");
  if (!(config.delta0 > 0.0))
    throw std::invalid_argument("msgs_run: delta0 must be positive");
  stochastic_or_throw(problem);

  const double L = problem.smooth().lipschitz();
  const double nu = problem.geometry().modulus();
  const double M = problem.nonsmooth().bound();
  const double sigma = problem.stochastic()->sigma();
  const int n0 = config.inner_horizon > 0
                     ? config.inner_horizon
                     : msgs_default_inner_horizon(L, nu, mu);

  const auto t0 = Clock::now();
  const CallCounts base = problem.counters();
  std::vector<PhaseResult> phases;
  Vector y = problem.start_point();
  for (int s = 1; s <= config.phases; ++s) {
    const double dtilde =
        config.delta0 / (nu * mu * std::pow(2.0, static_cast<double>(s)));
    SlidingSchedule sched =
        SlidingSchedule::fixed_horizon(L, M, nu, n0, dtilde, sigma);
    RunOptions opts;
    opts.seed = seed;
    opts.phase = static_cast<std::uint64_t>(s);
    opts.x0 = y;
    opts.trace_objective = false;
    RunRecord rec = sgs_run(problem, sched, n0, opts);
    y = rec.x_final;

    PhaseResult pr;
    pr.y = y;
    pr.psi = problem.psi(y);
    pr.gap = problem.reference() ? pr.psi - problem.reference()->second : 0.0;
    const CallCounts now = problem.counters();
    pr.grad_calls = now.grad - base.grad;
    pr.stoch_calls = now.stoch - base.stoch;
    pr.elapsed_ms = ms_since(t0);
    phases.push_back(std::move(pr));
  }
  return phases;
}

}  // namespace slideopt
