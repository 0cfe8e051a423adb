#include "slideopt/bench/runner.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "slideopt/baselines.hpp"
#include "slideopt/bench/log.hpp"
#include "slideopt/problems.hpp"
#include "slideopt/sliding.hpp"
#include "slideopt/ssgs.hpp"
#include "slideopt/stochastic.hpp"

namespace slideopt::bench {

namespace {

struct Instance {
  CompositeProblem problem;
  double d_x = 0.0;      // Bregman range of the feasible set (or v0 estimate)
  double v0 = 0.0;       // V(x0, x*)
  double vbar_star = 0.0;
  double psi_star = 0.0;
};

// When the set is unbounded the fixed-horizon policies fall back to a
// distance estimate from the certified reference.
double domain_estimate(const CompositeProblem& problem) {
  const FeasibleSet& set = problem.geometry().feasible_set();
  if (set.bounded()) return problem.geometry().max_bregman(set.center_point());
  const auto& ref = problem.reference();
  if (!ref) throw std::runtime_error("unbounded set needs a reference for D_X");
  return 2.0 * std::max(1e-12, problem.geometry().bregman(problem.start_point(),
                                                          ref->first));
}

Instance build_instance(const ExperimentConfig& config) {
  CompositeProblem problem = make_problem(config.problem);
  double tol = config.ref_tol;
  if (config.problem.family == "stoch_abs") tol = std::max(tol, 1e-4);
  if (config.problem.family == "saddle_linf") tol = std::max(tol, 1e-5);
  auto [x_star, psi_star] = reference_optimum(problem, tol);
  Instance inst{std::move(problem), 0.0, 0.0, 0.0, psi_star};
  inst.d_x = domain_estimate(inst.problem);
  inst.v0 = inst.problem.geometry().bregman(inst.problem.start_point(), x_star);
  if (inst.problem.geometry().feasible_set().bounded())
    inst.vbar_star = inst.problem.geometry().max_bregman(x_star);
  return inst;
}

SlidingSchedule make_schedule(const ExperimentConfig& config,
                              const Instance& inst, int n_outer,
                              bool stochastic) {
  const double L = inst.problem.smooth().lipschitz();
  const double nu = inst.problem.geometry().modulus();
  const double M = inst.problem.nonsmooth().bound();
  const double sigma =
      stochastic && inst.problem.stochastic() ? inst.problem.stochastic()->sigma() : 0.0;
  if (config.policy == "compact_set") {
    const double dt = config.dtilde > 0.0
                          ? config.dtilde
                          : (stochastic ? dtilde_default_compact_stochastic(inst.d_x, nu)
                                        : dtilde_default_compact(inst.d_x, nu));
    return SlidingSchedule::compact_set(L, M, nu, dt, sigma);
  }
  const double dt = config.dtilde > 0.0
                        ? config.dtilde
                        : (stochastic ? dtilde_default_fixed_stochastic(inst.d_x, nu)
                                      : dtilde_default_fixed(inst.d_x, nu));
  return SlidingSchedule::fixed_horizon(L, M, nu, n_outer, dt, sigma);
}

double bound_at(const ExperimentConfig& config, const Instance& inst,
                const SlidingSchedule& sched, bool stochastic, int k) {
  if (config.policy == "compact_set") {
    return stochastic ? bound_bd_stochastic_compact(sched, inst.vbar_star, k)
                      : bound_bd_compact(sched, inst.vbar_star, k);
  }
  return stochastic ? bound_bd_stochastic(sched, inst.v0, k)
                    : bound_bd(sched, inst.v0, k);
}

// One trial of the configured algorithm; returns rows at the checkpoints.
std::vector<ReportRow> run_trial(const ExperimentConfig& config,
                                 const Instance& shared, std::uint64_t seed) {
  CompositeProblem problem = shared.problem.with_fresh_counters();
  const bool all_k = config.checkpoints == "all";
  std::vector<ReportRow> rows;

  auto emit_from_record = [&](const RunRecord& rec, const std::string& algo,
                              const std::string& policy, auto&& bound_fn) {
    const int n = rec.outer_count();
    for (int k = 1; k <= n; ++k) {
      if (!all_k && k != n) continue;
      ReportRow r;
      r.trial_seed = seed;
      r.algorithm = algo;
      r.policy = policy;
      r.k_or_epsilon = k;
      r.gap = rec.gap.empty() ? 0.0 : rec.gap[k - 1];
      r.bound = bound_fn(k);
      r.grad_calls = rec.grad_calls[k - 1];
      r.subgrad_calls = rec.subgrad_calls[k - 1];
      r.stoch_calls = rec.stoch_calls[k - 1];
      r.elapsed_ms = rec.elapsed_ms[k - 1];
      rows.push_back(std::move(r));
    }
  };

  RunOptions opts;
  opts.seed = seed;
  opts.trace_objective = all_k;

  if (config.algorithm == "gs") {
    SlidingSchedule sched = make_schedule(config, shared, config.n_outer, false);
    RunRecord rec = gs_run(problem, sched, config.n_outer, opts);
    emit_from_record(rec, "gs", config.policy, [&](int k) {
      return bound_at(config, shared, sched, false, k);
    });
  } else if (config.algorithm == "sgs") {
    SlidingSchedule sched = make_schedule(config, shared, config.n_outer, true);
    RunRecord rec = sgs_run(problem, sched, config.n_outer, opts);
    emit_from_record(rec, "sgs", config.policy, [&](int k) {
      return bound_at(config, shared, sched, true, k);
    });
  } else if (config.algorithm == "msgs") {
    MsgsConfig mc;
    mc.phases = config.phases;
    mc.delta0 = config.delta0 > 0.0
                    ? config.delta0
                    : std::max(1e-12, problem.psi(problem.start_point()) -
                                          shared.psi_star);
    auto phases = msgs_run(problem, mc, seed);
    for (int s = 1; s <= static_cast<int>(phases.size()); ++s) {
      if (!all_k && s != static_cast<int>(phases.size())) continue;
      const PhaseResult& pr = phases[s - 1];
      ReportRow r;
      r.trial_seed = seed;
      r.algorithm = "msgs";
      r.policy = "fixed_horizon";
      r.k_or_epsilon = s;
      r.gap = pr.gap;
      r.bound = mc.delta0 / std::pow(2.0, s);
      r.grad_calls = pr.grad_calls;
      r.subgrad_calls = 0;
      r.stoch_calls = pr.stoch_calls;
      r.elapsed_ms = pr.elapsed_ms;
      rows.push_back(std::move(r));
    }
  } else if (config.algorithm == "ssgs") {
    SsgsOptions so;
    so.seed = seed;
    so.trace_objective = all_k;
    so.dtilde = config.dtilde;
    so.eta = config.eta;
    RunRecord rec = ssgs_run(problem, config.n_outer, so);
    const auto& sm = *problem.saddle();
    const double b = ssgs_bound(sm.operator_norm(), config.n_outer, shared.d_x,
                                sm.dual_range(), problem.geometry().modulus(),
                                sm.dual_modulus());
    emit_from_record(rec, "ssgs", "fixed_horizon", [&](int) { return b; });
  } else if (config.algorithm == "prox_grad") {
    const double beta =
        config.beta > 0.0 ? config.beta : problem.smooth().lipschitz();
    RunRecord rec = prox_grad_run(problem, config.n_outer, beta, opts);
    // Distance-over-steps envelope of the 1/N decay.
    emit_from_record(rec, "prox_grad", "constant", [&](int k) {
      return 2.0 * beta * shared.v0 / std::max(1, k);
    });
  } else if (config.algorithm == "accel_prox" ||
             config.algorithm == "accel_linearized") {
    BaselineConfig bc;
    bc.kind = config.algorithm == "accel_prox"
                  ? BaselineKind::accel_prox_exact_h
                  : BaselineKind::accel_linearized_h;
    bc.distance_estimate = shared.d_x;
    RunRecord rec = accel_prox_run(problem, config.n_outer, bc, opts);
    const double L = problem.smooth().lipschitz();
    const double M = problem.nonsmooth().bound();
    const double nu = problem.geometry().modulus();
    // Generous envelopes of the accelerated rates (validated empirically).
    emit_from_record(rec, config.algorithm, "accelerated", [&](int k) {
      double b = 8.0 * L * std::max(shared.v0, 1e-12) / (nu * k * double(k));
      if (bc.kind == BaselineKind::accel_linearized_h)
        b += 4.0 * M * std::sqrt(shared.d_x / (nu * std::max(1, k)));
      return b;
    });
  } else {
    throw std::invalid_argument("config field 'algorithm.name': unknown algorithm");
  }
  return rows;
}

void echo_config(const ExperimentConfig& config, const Instance& inst,
                 Report& report) {
  auto& e = report.config_echo;
  e["problem.family"] = config.problem.family;
  if (!config.preset.empty()) e["problem.preset"] = config.preset;
  e["problem.n"] = std::to_string(config.problem.n);
  e["problem.m"] = std::to_string(config.problem.m);
  e["problem.rank"] = std::to_string(config.problem.rank);
  e["problem.lambda"] = format_double(config.problem.lambda);
  e["problem.mu"] = format_double(config.problem.mu);
  e["problem.sigma"] = format_double(config.problem.sigma);
  e["problem.radius"] = format_double(config.problem.radius);
  e["problem.seed"] = std::to_string(config.problem.seed);
  e["algorithm.name"] = config.algorithm;
  e["algorithm.policy"] = config.policy;
  e["algorithm.N"] = std::to_string(config.n_outer);
  e["run.trials"] = std::to_string(config.trials);
  e["run.seed_start"] = std::to_string(config.seed_start);
  e["derived.L"] = format_double(inst.problem.smooth().lipschitz());
  e["derived.mu"] = format_double(inst.problem.smooth().strong_convexity());
  e["derived.M"] = format_double(inst.problem.nonsmooth().bound());
  e["derived.sigma"] = format_double(
      inst.problem.stochastic() ? inst.problem.stochastic()->sigma() : 0.0);
  e["derived.nu"] = format_double(inst.problem.geometry().modulus());
  e["derived.D_X"] = format_double(inst.d_x);
  e["derived.V0"] = format_double(inst.v0);
  e["derived.Vbar_star"] = format_double(inst.vbar_star);
  e["derived.psi_star"] = format_double(inst.psi_star);
  const bool stochastic = config.algorithm == "sgs" || config.algorithm == "ssgs";
  if (config.algorithm == "gs" || config.algorithm == "sgs") {
    SlidingSchedule sched = make_schedule(config, inst, config.n_outer, stochastic);
    e["derived.dtilde"] = format_double(sched.dtilde());
  }
  if (config.algorithm == "msgs") {
    e["derived.N0"] = std::to_string(msgs_default_inner_horizon(
        inst.problem.smooth().lipschitz(), inst.problem.geometry().modulus(),
        inst.problem.smooth().strong_convexity()));
  }
  if (config.algorithm == "ssgs" && inst.problem.saddle()) {
    const auto& sm = *inst.problem.saddle();
    e["derived.A_norm"] = format_double(sm.operator_norm());
    e["derived.D_Y"] = format_double(sm.dual_range());
    const double eta = config.eta > 0.0
                           ? config.eta
                           : choose_eta(sm.operator_norm(), config.n_outer,
                                        inst.d_x, sm.dual_range(),
                                        inst.problem.geometry().modulus(),
                                        sm.dual_modulus());
    e["derived.eta"] = format_double(eta);
    e["derived.L_eta"] = format_double(sm.lipschitz(eta));
  }
}

std::vector<std::vector<ReportRow>> run_all_trials(
    const ExperimentConfig& config, const Instance& inst) {
  const int jobs = config.jobs > 0
                       ? config.jobs
                       : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<ReportRow>> per_trial(config.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= config.trials) break;
      per_trial[i] = run_trial(config, inst, config.seed_start + i);
    }
  };
  if (jobs == 1 || config.trials == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, config.trials);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return per_trial;
}

// Mean-vs-bound acceptance per checkpoint; deterministic algorithms must
// respect the bound row-wise, stochastic ones in mean up to two standard
// errors.
bool check_bounds(const ExperimentConfig& config, Report& report) {
  const bool stochastic = config.algorithm == "sgs" ||
                          config.algorithm == "msgs" ||
                          config.algorithm == "ssgs";
  if (!stochastic) {
    for (const ReportRow& r : report.rows)
      if (r.gap > r.bound + 1e-8) return false;
    return true;
  }
  for (const Aggregate& a : report.aggregates)
    if (a.mean_gap > a.mean_bound + 2.0 * a.se_gap + 1e-8) return false;
  return true;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  SLIDEOPT_INFO("run: algorithm=%s trials=%d", config.algorithm.c_str(),
                config.trials);
  Instance inst = build_instance(config);
  Report report;
  echo_config(config, inst, report);
  auto per_trial = run_all_trials(config, inst);
  for (auto& rows : per_trial)
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  report.recompute_aggregates();
  report.bounds_hold = check_bounds(config, report);
  write_report_files(report, config.out_dir, config.formats, "report");
  return report;
}

int horizon_for_accuracy(double L, double nu, double d_x, double dtilde,
                         double eps, bool stochastic) {
  // Smallest N with the fixed-horizon guarantee below eps, using D_X as the
  // distance estimate.
  const double c = stochastic ? 4.0 : 2.0;
  const double num = 2.0 * L * (3.0 * d_x / nu + c * dtilde);
  const double disc = std::sqrt(std::max(0.0, 0.25 + num / eps));
  return std::max(1, static_cast<int>(std::ceil(disc - 0.5)));
}

Report complexity_sweep(const ExperimentConfig& config,
                        const std::vector<double>& accuracies) {
  config.validate();
  Instance inst = build_instance(config);
  const double L = inst.problem.smooth().lipschitz();
  const double nu = inst.problem.geometry().modulus();

  Report report;
  echo_config(config, inst, report);

  if (config.algorithm == "msgs") {
    // Phase s reaches delta0 / 2^s; sweep over phases.
    ExperimentConfig pc = config;
    pc.checkpoints = "all";
    auto per_trial = run_all_trials(pc, inst);
    const double delta0 =
        config.delta0 > 0.0
            ? config.delta0
            : std::max(1e-12, inst.problem.psi(inst.problem.start_point()) -
                                  inst.psi_star);
    for (auto& rows : per_trial)
      for (ReportRow& r : rows) {
        r.k_or_epsilon = delta0 / std::pow(2.0, r.k_or_epsilon);
        report.rows.push_back(r);
      }
  } else if (config.algorithm == "gs" || config.algorithm == "sgs") {
    const bool stochastic = config.algorithm == "sgs";
    for (const double eps : accuracies) {
      ExperimentConfig step = config;
      step.checkpoints = "final";
      const double dt =
          config.dtilde > 0.0
              ? config.dtilde
              : (stochastic ? dtilde_default_fixed_stochastic(inst.d_x, nu)
                            : dtilde_default_fixed(inst.d_x, nu));
      step.n_outer = horizon_for_accuracy(L, nu, inst.d_x, dt, eps, stochastic);
      SLIDEOPT_DEBUG("sweep eps=%g -> N=%d", eps, step.n_outer);
      auto per_trial = run_all_trials(step, inst);
      for (auto& rows : per_trial)
        for (ReportRow& r : rows) {
          r.k_or_epsilon = eps;
          report.rows.push_back(r);
        }
    }
  } else if (config.algorithm == "ssgs") {
    const auto& sm = *inst.problem.saddle();
    for (const double eps : accuracies) {
      ExperimentConfig step = config;
      step.checkpoints = "final";
      const double c = 4.0 * std::sqrt(3.0) * sm.operator_norm() *
                       std::sqrt(inst.d_x * sm.dual_range()) /
                       std::sqrt(nu * sm.dual_modulus());
      step.n_outer = std::max(1, static_cast<int>(std::ceil(c / eps)));
      auto per_trial = run_all_trials(step, inst);
      for (auto& rows : per_trial)
        for (ReportRow& r : rows) {
          r.k_or_epsilon = eps;
          report.rows.push_back(r);
        }
    }
  } else {
    throw std::invalid_argument(
        "config field 'algorithm.name': sweep supports gs, sgs, msgs, ssgs");
  }

  report.recompute_aggregates();
  // Call-count slopes against 1/eps.
  std::vector<double> lx, lg, ls, lt;
  for (const Aggregate& a : report.aggregates) {
    lx.push_back(std::log(1.0 / a.k_or_epsilon));
    lg.push_back(std::log(std::max(1.0, a.mean_grad)));
    ls.push_back(std::log(std::max(1.0, a.mean_subgrad)));
    lt.push_back(std::log(std::max(1.0, a.mean_stoch)));
  }
  if (lx.size() >= 2) {
    report.slopes["grad_calls"] = fit_slope(lx, lg);
    report.slopes["subgrad_calls"] = fit_slope(lx, ls);
    report.slopes["stoch_calls"] = fit_slope(lx, lt);
    if (config.algorithm == "msgs") {
      // grad calls are linear in the phase count itself.
      std::vector<double> s_axis, g_axis;
      for (const Aggregate& a : report.aggregates) {
        s_axis.push_back(std::log2(
            std::max(1.0, report.aggregates.front().k_or_epsilon * 2.0 /
                              a.k_or_epsilon)));
        g_axis.push_back(a.mean_grad);
      }
      report.slopes["grad_calls_per_phase"] = fit_slope(s_axis, g_axis);
    }
  }
  report.bounds_hold = check_bounds(config, report);
  write_report_files(report, config.out_dir, config.formats, "sweep");
  return report;
}

bool verify_bounds(const std::string& preset_name, std::ostream& out) {
  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    out << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
    ok = ok && pass;
  };

  // Schedule closed forms.
  {
    SlidingSchedule s = SlidingSchedule::fixed_horizon(1, 1, 1, 10, 1);
    bool forms = true;
    for (int t = 1; t <= 1000; ++t) {
      const double pt = s.big_p(t);
      forms = forms && std::abs(pt - 2.0 / ((t + 1.0) * (t + 2.0))) < 1e-15;
      const double lhs = s.theta(t);
      const double rhs = (s.big_p(t - 1) - pt) / ((1.0 - pt) * s.big_p(t - 1));
      forms = forms && std::abs(lhs - rhs) < 1e-12;
    }
    check("inner schedule closed forms", forms);
  }

  ProblemSpec spec = preset(preset_name);
  ExperimentConfig cfg;
  cfg.problem = spec;
  cfg.preset = preset_name;
  cfg.checkpoints = "final";
  cfg.out_dir = "";
  Instance inst = build_instance(cfg);

  const bool has_stoch = inst.problem.stochastic().has_value();
  {
    // Deterministic run against both the summed and the closed-form bounds.
    CompositeProblem p = inst.problem.with_fresh_counters();
    const double nu = p.geometry().modulus();
    SlidingSchedule sched = SlidingSchedule::fixed_horizon(
        p.smooth().lipschitz(), p.nonsmooth().bound(), nu, 10,
        dtilde_default_fixed(inst.d_x, nu));
    RunOptions opts;
    opts.trace_objective = false;
    RunRecord rec = gs_run(p, sched, 10, opts);
    const double gap = rec.final_gap();
    check("gap within summed estimate", gap <= bound_bd(sched, inst.v0, 10) + 1e-8);
    check("gap within closed-form estimate",
          gap <= gs_bound_fixed(p.smooth().lipschitz(), nu, 10, inst.v0,
                                sched.dtilde()) + 1e-8);
    long long expected = 0;
    for (int k = 1; k <= 10; ++k) expected += sched.big_t(k);
    check("gradient call identity", rec.final_grad() == 10);
    check("subgradient call identity", rec.final_subgrad() == expected);
  }
  if (has_stoch) {
    CompositeProblem p = inst.problem.with_fresh_counters();
    const double nu = p.geometry().modulus();
    SlidingSchedule sched = SlidingSchedule::fixed_horizon(
        p.smooth().lipschitz(), p.nonsmooth().bound(), nu, 10,
        dtilde_default_fixed_stochastic(inst.d_x, nu),
        p.stochastic()->sigma());
    double mean = 0.0;
    const int trials = 64;
    long long expected = 0;
    for (int k = 1; k <= 10; ++k) expected += sched.big_t(k);
    bool counts_ok = true;
    for (int i = 0; i < trials; ++i) {
      CompositeProblem q = p.with_fresh_counters();
      RunOptions opts;
      opts.seed = 1000 + i;
      opts.trace_objective = false;
      RunRecord rec = sgs_run(q, sched, 10, opts);
      mean += rec.final_gap() / trials;
      counts_ok = counts_ok && rec.final_grad() == 10 &&
                  rec.final_stoch() == expected;
    }
    check("stochastic call identities", counts_ok);
    check("mean gap within expectation bound",
          mean <= sgs_bound_fixed(p.smooth().lipschitz(), nu, 10, inst.v0,
                                  sched.dtilde()) + 1e-8);
  }
  return ok;
}

}  // namespace slideopt::bench
