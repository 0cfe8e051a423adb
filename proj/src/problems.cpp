#include "slideopt/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "slideopt/smoothing.hpp"

namespace slideopt {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

Matrix gaussian_matrix(int rows, int cols, RngStream& rng, double scale) {
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = scale * rng.next_gaussian();
  return a;
}

// Sparse planted signal with unit-scaled support values.
Vector planted_signal(int n, double norm, RngStream& rng) {
  Vector x = Vector::Zero(n);
  const int k = std::max(1, n / 5);
  for (int j = 0; j < k; ++j) {
    const int idx = static_cast<int>(rng.pick_index(n));
    const double sgn = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
    x[idx] = sgn * rng.next_uniform(0.5, 1.0);
  }
  const double nrm = x.norm();
  if (nrm > 0.0 && norm > 0.0) x *= norm / nrm;
  return x;
}

FeasibleSet make_set(int n, double radius) {
  return radius > 0.0 ? FeasibleSet::ball(Vector::Zero(n), radius)
                      : FeasibleSet::whole_space(n);
}

SmoothOracle make_quadratic_oracle(std::shared_ptr<const ZooData> data) {
  const double L = data->lmax_ata + data->mu;
  auto value = [data](const Vector& x) {
    double v = 0.5 * (data->a * x - data->b).squaredNorm();
    if (data->mu > 0.0) v += 0.5 * data->mu * x.squaredNorm();
    return v;
  };
  auto grad = [data](const Vector& x, Vector& out) {
    out.noalias() = data->a.transpose() * (data->a * x - data->b);
    if (data->mu > 0.0) out += data->mu * x;
  };
  return SmoothOracle(value, grad, L, data->mu);
}

NonsmoothOracle make_l1_oracle(double lambda, int n) {
  auto value = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
  auto subgrad = [lambda](const Vector& x, Vector& out) {
    out = lambda * x.array().sign();
  };
  return NonsmoothOracle(value, subgrad, lambda * std::sqrt(double(n)));
}

// Bounded spherical perturbation of the exact subgradient: sigma * r * v
// with r uniform on [0,1] and v a unit direction, so the deviation is at
// most sigma surely and E |.|^2 = sigma^2 / 3.
StochasticOracle make_noisy_oracle(const NonsmoothOracle& h, double sigma) {
  auto sample = [h, sigma](const Vector& x, RngStream& rng, Vector& out) {
    h.subgradient_unmetered(x, out);
    if (sigma > 0.0) {
      const double r = rng.next_uniform();
      out += (sigma * r) * rng.unit_sphere_l2(static_cast<int>(x.size()));
    }
  };
  return StochasticOracle(sample, sigma, /*light_tail=*/true);
}

CompositeProblem build_quadratic_family(const ProblemSpec& spec, bool strong) {
  require(spec.n > 0 && spec.m > 0, "make_problem: invalid dimensions");
  require(spec.lambda >= 0.0, "make_problem: regularization must be nonnegative");
  require(!strong || spec.mu > 0.0, "make_problem: strong family requires mu > 0");

  auto data = std::make_shared<ZooData>();
  data->spec = spec;
  data->lambda = spec.lambda;
  data->mu = strong ? spec.mu : 0.0;

  RngStream rng(spec.seed, /*phase=*/1001, 0, 0);
  if (spec.custom_a.size() > 0) {
    data->a = spec.custom_a;
  } else {
    const int n = spec.n, m = spec.m;
    if (spec.rank > 0 && spec.rank < std::min(m, n)) {
      Matrix left = gaussian_matrix(m, spec.rank, rng, 1.0 / std::sqrt(double(m)));
      Matrix right = gaussian_matrix(spec.rank, n, rng, 1.0 / std::sqrt(double(spec.rank)));
      data->a = left * right;
    } else {
      data->a = gaussian_matrix(m, n, rng, 1.0 / std::sqrt(double(m)));
    }
    if (spec.normalize) {
      const double lmax = power_iteration_lmax(Matrix(data->a.transpose() * data->a));
      if (lmax > 0.0) data->a /= std::sqrt(lmax);
    }
  }
  const int n = static_cast<int>(data->a.cols());
  const int m = static_cast<int>(data->a.rows());
  if (spec.custom_b.size() > 0) {
    require(spec.custom_b.size() == m, "make_problem: invalid dimensions");
    data->b = spec.custom_b;
  } else {
    Vector signal = planted_signal(n, spec.signal_norm, rng);
    data->b = data->a * signal + 0.05 * gaussian_matrix(m, 1, rng, 1.0).col(0);
  }
  data->lmax_ata = power_iteration_lmax(Matrix(data->a.transpose() * data->a));

  ProxGeometry geometry = ProxGeometry::euclidean(make_set(n, spec.radius));
  Vector x0 = geometry.feasible_set().center_point();
  CompositeProblem problem(geometry, make_quadratic_oracle(data),
                           make_l1_oracle(data->lambda, n), SimpleTerm::zero(),
                           std::move(x0));
  problem.set_h_as_simple(SimpleTerm::l1(data->lambda));
  if (spec.sigma > 0.0)
    problem.set_stochastic(make_noisy_oracle(problem.nonsmooth(), spec.sigma));
  problem.set_zoo(data);
  return problem;
}

CompositeProblem build_stoch_abs(const ProblemSpec& spec) {
  require(spec.n > 0 && spec.m > 0, "make_problem: invalid dimensions");
  require(spec.pool > 0, "make_problem: pool must be positive");

  auto data = std::make_shared<ZooData>();
  data->spec = spec;
  data->mu = spec.mu;

  RngStream rng(spec.seed, /*phase=*/1002, 0, 0);
  data->a = gaussian_matrix(spec.m, spec.n, rng, 1.0 / std::sqrt(double(spec.m)));
  if (spec.normalize) {
    const double lmax = power_iteration_lmax(Matrix(data->a.transpose() * data->a));
    if (lmax > 0.0) data->a /= std::sqrt(lmax);
  }
  data->lmax_ata = power_iteration_lmax(Matrix(data->a.transpose() * data->a));
  Vector signal = planted_signal(spec.n, spec.signal_norm, rng);
  data->b = data->a * signal + 0.05 * gaussian_matrix(spec.m, 1, rng, 1.0).col(0);
  data->c = gaussian_matrix(spec.pool, spec.n, rng, 1.0 / std::sqrt(double(spec.n)));
  data->d = data->c * signal + 0.1 * gaussian_matrix(spec.pool, 1, rng, 1.0).col(0);

  const auto c = data;
  const int pool = spec.pool;
  auto h_value = [c, pool](const Vector& x) {
    return (c->c * x - c->d).lpNorm<1>() / pool;
  };
  auto h_subgrad = [c, pool](const Vector& x, Vector& out) {
    Vector s = (c->c * x - c->d).array().sign();
    out.noalias() = c->c.transpose() * s / pool;
  };
  // |h(x) - h(y)| <= mean_i |a_i|_2 |x - y|_2, and the descent form holds
  // with twice that.
  double mean_row = 0.0, max_row = 0.0;
  for (int i = 0; i < pool; ++i) {
    const double r = data->c.row(i).norm();
    mean_row += r / pool;
    max_row = std::max(max_row, r);
  }
  NonsmoothOracle h(h_value, h_subgrad, 2.0 * mean_row);

  auto sample = [c, pool](const Vector& x, RngStream& stream, Vector& out) {
    const int i = static_cast<int>(stream.pick_index(pool));
    const double s = c->c.row(i).dot(x) - c->d[i] >= 0.0 ? 1.0 : -1.0;
    out = s * c->c.row(i).transpose();
  };
  const double sigma = max_row + mean_row;  // sure deviation bound

  ProxGeometry geometry = ProxGeometry::euclidean(make_set(spec.n, spec.radius));
  Vector x0 = geometry.feasible_set().center_point();
  CompositeProblem problem(geometry, make_quadratic_oracle(data), std::move(h),
                           SimpleTerm::zero(), std::move(x0));
  problem.set_stochastic(StochasticOracle(sample, sigma, /*light_tail=*/true));
  problem.set_zoo(data);
  return problem;
}

CompositeProblem build_saddle_linf(const ProblemSpec& spec) {
  require(spec.n > 0 && spec.m > 0, "make_problem: invalid dimensions");
  require(spec.lambda >= 0.0, "make_problem: regularization must be nonnegative");
  require(spec.radius > 0.0, "make_problem: saddle family needs a bounded set");

  auto data = std::make_shared<ZooData>();
  data->spec = spec;
  data->lambda = spec.lambda;

  RngStream rng(spec.seed, /*phase=*/1003, 0, 0);
  Matrix a = gaussian_matrix(spec.m, spec.n, rng, 1.0 / std::sqrt(double(spec.n)));
  if (spec.normalize) {
    double max_row = 0.0;
    for (int i = 0; i < spec.m; ++i) max_row = std::max(max_row, a.row(i).norm());
    if (max_row > 0.0) a /= max_row;
  }
  Vector signal = planted_signal(spec.n, spec.signal_norm, rng);
  Vector b = a * signal + 0.05 * gaussian_matrix(spec.m, 1, rng, 1.0).col(0);
  data->a = a;
  data->b = b;

  // max-norm as a bilinear max over the doubled simplex.
  Matrix a2(2 * spec.m, spec.n);
  a2.topRows(spec.m) = a;
  a2.bottomRows(spec.m) = -a;
  Vector b2(2 * spec.m);
  b2.head(spec.m) = b;
  b2.tail(spec.m) = -b;
  auto smoother = std::make_shared<SaddleSmoother>(
      std::move(a2), ProxGeometry::entropy_simplex(2 * spec.m, 1.0),
      std::move(b2));

  // The problem-level smooth slot stays inert; runs substitute the smoothed
  // surrogate and diagnostics use the exact max.
  SmoothOracle inert([](const Vector&) { return 0.0; },
                     [](const Vector&, Vector& g) { g.setZero(); }, 0.0);

  ProxGeometry geometry = ProxGeometry::euclidean(make_set(spec.n, spec.radius));
  Vector x0 = geometry.feasible_set().center_point();
  CompositeProblem problem(geometry, std::move(inert),
                           make_l1_oracle(spec.lambda, spec.n),
                           SimpleTerm::zero(), std::move(x0));
  problem.set_h_as_simple(SimpleTerm::l1(spec.lambda));
  if (spec.sigma > 0.0)
    problem.set_stochastic(make_noisy_oracle(problem.nonsmooth(), spec.sigma));
  problem.set_saddle(smoother);
  problem.set_zoo(data);
  return problem;
}

}  // namespace

CompositeProblem make_problem(const ProblemSpec& spec) {
  if (spec.family == "quad_l1") return build_quadratic_family(spec, false);
  if (spec.family == "strong_quad_l1") return build_quadratic_family(spec, true);
  if (spec.family == "stoch_abs") return build_stoch_abs(spec);
  if (spec.family == "saddle_linf") return build_saddle_linf(spec);
  throw std::invalid_argument("make_problem: unknown family '" + spec.family + "'");
}

std::vector<std::string> list_families() {
  return {"quad_l1", "strong_quad_l1", "stoch_abs", "saddle_linf"};
}

ProblemSpec desk_quad_l1() {
  ProblemSpec s;
  s.family = "quad_l1";
  s.n = 50;
  s.m = 80;
  s.rank = 30;
  s.lambda = 0.004;
  s.radius = 3.0;
  s.signal_norm = 1.0;
  s.seed = 7;
  return s;
}

ProblemSpec desk_quad_l1_noisy() {
  ProblemSpec s = desk_quad_l1();
  s.sigma = 0.1;
  return s;
}

ProblemSpec desk_strong_quad_l1() {
  ProblemSpec s;
  s.family = "strong_quad_l1";
  s.n = 50;
  s.m = 80;
  s.lambda = 0.004;
  s.mu = 0.1;
  s.sigma = 0.1;
  s.radius = 0.0;
  s.seed = 7;
  return s;
}

ProblemSpec desk_stoch_abs() {
  ProblemSpec s;
  s.family = "stoch_abs";
  s.n = 30;
  s.m = 40;
  s.pool = 64;
  s.radius = 3.0;
  s.seed = 7;
  return s;
}

ProblemSpec desk_saddle_linf() {
  ProblemSpec s;
  s.family = "saddle_linf";
  s.n = 50;
  s.m = 80;
  s.lambda = 0.004;
  s.sigma = 0.05;
  s.radius = 3.0;
  s.seed = 7;
  return s;
}

ProblemSpec preset(const std::string& name) {
  if (name == "desk_quad_l1") return desk_quad_l1();
  if (name == "desk_quad_l1_noisy") return desk_quad_l1_noisy();
  if (name == "desk_strong_quad_l1") return desk_strong_quad_l1();
  if (name == "desk_stoch_abs") return desk_stoch_abs();
  if (name == "desk_saddle_linf") return desk_saddle_linf();
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> list_presets() {
  return {"desk_quad_l1", "desk_quad_l1_noisy", "desk_strong_quad_l1",
          "desk_stoch_abs", "desk_saddle_linf"};
}

}  // namespace slideopt
