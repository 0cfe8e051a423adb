#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "slideopt/problems.hpp"
#include "slideopt/smoothing.hpp"

// Reference optima. Everything here works on the generation artifacts
// directly (never through the metered oracles), so computing a reference
// leaves the problem's call counters untouched.

namespace slideopt {

namespace {

Vector soft_vec(const Vector& v, double tau) {
  return (v.array().abs() - tau).cwiseMax(0.0) * v.array().sign();
}

struct QuadModel {
  const ZooData& data;
  const FeasibleSet& set;
  double lambda;
  double mu;

  double psi(const Vector& x) const {
    double v = 0.5 * (data.a * x - data.b).squaredNorm() + lambda * x.lpNorm<1>();
    if (mu > 0.0) v += 0.5 * mu * x.squaredNorm();
    return v;
  }
  Vector grad_f(const Vector& x) const {
    Vector g = data.a.transpose() * (data.a * x - data.b);
    if (mu > 0.0) g += mu * x;
    return g;
  }
  Vector prox(const Vector& v, double step) const {
    return set.project(soft_vec(v, lambda * step));
  }

  // Fenchel lower bound at the dual candidate y = residual of x. The
  // mu-quadratic absorbs the linear term exactly; without it the term is
  // bounded over the ball or the candidate is rescaled onto the dual box.
  double dual_lower(const Vector& x) const {
    const Vector y = data.a * x - data.b;
    if (mu > 0.0) {
      const Vector ct = data.a.transpose() * y;
      return -0.5 * y.squaredNorm() - data.b.dot(y) -
             soft_vec(ct, lambda).squaredNorm() / (2.0 * mu);
    }
    if (set.kind() == SetKind::ball) {
      const Vector ct = data.a.transpose() * y;
      return -0.5 * y.squaredNorm() - data.b.dot(y) -
             set.radius() * soft_vec(ct, lambda).norm();
    }
    // Whole space: scale y until A^T y lands in the dual box.
    Vector ct = data.a.transpose() * y;
    const double ninf = ct.lpNorm<Eigen::Infinity>();
    if (lambda <= 0.0) {
      if (ninf > 1e-13) return -std::numeric_limits<double>::infinity();
      return -0.5 * y.squaredNorm() - data.b.dot(y);
    }
    const double scale = ninf > lambda ? lambda / ninf : 1.0;
    const Vector ys = scale * y;
    return -0.5 * ys.squaredNorm() - data.b.dot(ys);
  }
};

// Accelerated proximal solve with function-value restarts, certified by the
// Fenchel gap. Returns the final point; throws if the budget runs out.
Vector fista_certified(const QuadModel& model, Vector x, double lipschitz,
                       double tol, long long budget) {
  const double step = 1.0 / std::max(lipschitz, 1e-12);
  Vector y = x;
  Vector x_prev = x;
  double t = 1.0;
  double best_psi = model.psi(x);
  Vector best_x = x;
  double best_lb = -std::numeric_limits<double>::infinity();
  for (long long it = 1; it <= budget; ++it) {
    x = model.prox(y - step * model.grad_f(y), step);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + ((t - 1.0) / tn) * (x - x_prev);
    const double fx = model.psi(x);
    if (fx > best_psi) {
      // restart the momentum
      y = x;
      t = 1.0;
    } else {
      t = tn;
    }
    if (fx < best_psi) {
      best_psi = fx;
      best_x = x;
    }
    x_prev = x;
    if (it % 64 == 0 || it == budget) {
      best_lb = std::max(best_lb, model.dual_lower(best_x));
      if (best_psi - best_lb <= tol) return best_x;
    }
  }
  throw std::runtime_error("reference_optimum: failed to certify tolerance within budget");
}

std::pair<Vector, double> reference_quadratic(const CompositeProblem& problem,
                                              double tol, bool use_fista) {
  const ZooData& data = *problem.zoo();
  const FeasibleSet& set = problem.geometry().feasible_set();
  QuadModel model{data, set, data.lambda, data.mu};

  if (data.lambda == 0.0 && set.kind() == SetKind::whole_space) {
    // Plain least squares; solve directly.
    const int n = static_cast<int>(data.a.cols());
    Vector x;
    if (data.mu > 0.0) {
      Matrix h = data.a.transpose() * data.a + data.mu * Matrix::Identity(n, n);
      x = h.ldlt().solve(data.a.transpose() * data.b);
    } else {
      x = data.a.completeOrthogonalDecomposition().solve(data.b);
    }
    return {x, model.psi(x)};
  }

  const double lipschitz = data.lmax_ata + data.mu;
  Vector x0 = problem.start_point();
  Vector x = use_fista
                 ? fista_certified(model, x0, lipschitz, tol, 2000000)
                 : [&] {
                     // Independent route: plain proximal gradient.
                     Vector z = x0;
                     const double step = 1.0 / std::max(lipschitz, 1e-12);
                     double lb = -std::numeric_limits<double>::infinity();
                     for (long long it = 1; it <= 5000000; ++it) {
                       z = model.prox(z - step * model.grad_f(z), step);
                       if (it % 64 == 0) {
                         lb = std::max(lb, model.dual_lower(z));
                         if (model.psi(z) - lb <= tol) return z;
                       }
                     }
                     throw std::runtime_error(
                         "reference_optimum: failed to certify tolerance within budget");
                   }();
  return {x, model.psi(x)};
}

std::pair<Vector, double> reference_stoch_abs(const CompositeProblem& problem,
                                              double tol) {
  const ZooData& data = *problem.zoo();
  const FeasibleSet& set = problem.geometry().feasible_set();
  if (set.kind() != SetKind::ball)
    throw std::runtime_error("reference_optimum: stoch_abs needs a ball set for certification");
  const double pool = static_cast<double>(data.c.rows());

  auto psi = [&](const Vector& x) {
    double v = 0.5 * (data.a * x - data.b).squaredNorm() +
               (data.c * x - data.d).lpNorm<1>() / pool;
    if (data.mu > 0.0) v += 0.5 * data.mu * x.squaredNorm();
    return v;
  };
  auto subgrad = [&](const Vector& x) {
    Vector g = data.a.transpose() * (data.a * x - data.b);
    g += data.c.transpose() * Vector((data.c * x - data.d).array().sign()) / pool;
    if (data.mu > 0.0) g += data.mu * x;
    return g;
  };
  auto dual_lower = [&](const Vector& x) {
    const Vector y = data.a * x - data.b;
    Vector z = Vector((data.c * x - data.d).array().sign()) / pool;
    Vector r = data.a.transpose() * y + data.c.transpose() * z;
    return -0.5 * y.squaredNorm() - data.b.dot(y) - data.d.dot(z) -
           set.radius() * r.norm();
  };

  // Polyak-step subgradient descent against the best dual bound seen.
  Vector x = problem.start_point();
  Vector best_x = x;
  double best = psi(x);
  double lb = dual_lower(x);
  for (long long it = 1; it <= 500000; ++it) {
    Vector g = subgrad(x);
    const double gap_est = std::max(psi(x) - lb, 1e-16);
    x = set.project(x - (gap_est / g.squaredNorm()) * g);
    const double v = psi(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    if (it % 256 == 0) {
      lb = std::max(lb, dual_lower(best_x));
      if (best - lb <= tol) return {best_x, best};
    }
  }
  if (best - lb <= tol) return {best_x, best};
  throw std::runtime_error("reference_optimum: failed to certify tolerance within budget");
}

std::pair<Vector, double> reference_saddle(const CompositeProblem& problem,
                                           double tol) {
  const ZooData& data = *problem.zoo();
  const FeasibleSet& set = problem.geometry().feasible_set();
  const SaddleSmoother& sm = *problem.saddle();
  if (set.kind() != SetKind::ball)
    throw std::runtime_error("reference_optimum: saddle family needs a ball set");
  const double lambda = data.lambda;
  const double d_y = sm.dual_range();
  const int ny = sm.dual_dim();

  auto psi = [&](const Vector& x) {
    return sm.exact_value(x) + lambda * x.lpNorm<1>();
  };

  // Smoothing continuation: accelerated solves on the smoothed objective
  // with eta shrinking geometrically.
  Vector x = problem.start_point();
  double eta = 1.0;
  const double eta_floor = std::max(tol / (8.0 * d_y), 1e-12);
  Vector y_cand;
  while (true) {
    const double lip = sm.lipschitz(eta);
    const double step = 1.0 / lip;
    Vector xv = x, x_prev = x;
    double t = 1.0;
    auto psi_eta = [&](const Vector& p) {
      return sm.value_grad(eta, p).value + lambda * p.lpNorm<1>();
    };
    double prev = psi_eta(xv);
    for (int it = 0; it < 4000; ++it) {
      auto sg = sm.value_grad(eta, xv);
      Vector xn = set.project(soft_vec(xv - step * sg.gradient, lambda * step));
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      xv = xn + ((t - 1.0) / tn) * (xn - x_prev);
      x_prev = xn;
      const double cur = psi_eta(xn);
      if (cur > prev) {
        xv = xn;
        t = 1.0;
      } else {
        t = tn;
      }
      if (it > 200 && std::abs(prev - cur) <= 1e-15 + 1e-13 * std::abs(cur)) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    x = x_prev;
    y_cand = sm.value_grad(eta, x).y_max;
    if (eta <= eta_floor) break;
    eta *= 0.25;
  }

  // Dual polish: entropy ascent on the concave lower bound over the simplex.
  const Vector b2 = [&] {
    Vector b(ny);
    const int m = static_cast<int>(data.b.size());
    b.head(m) = data.b;
    b.tail(m) = -data.b;
    return b;
  }();
  auto lower_of = [&](const Vector& y) {
    Vector c = sm.a().transpose() * y;
    return -b2.dot(y) - set.radius() * soft_vec(c, lambda).norm();
  };
  Vector y = y_cand.cwiseMax(1e-14);
  y /= y.sum();
  double best_lb = lower_of(y);
  Vector y_best = y;
  for (int it = 1; it <= 4000; ++it) {
    Vector c = sm.a().transpose() * y;
    Vector s = soft_vec(c, lambda);
    const double sn = s.norm();
    Vector grad = -b2;
    if (sn > 1e-15) grad -= set.radius() * (sm.a() * (s / sn));
    const double stepsz = 0.5 / std::sqrt(static_cast<double>(it));
    Vector logits = y.array().log() + stepsz * grad.array();
    const double mx = logits.maxCoeff();
    y = (logits.array() - mx).exp();
    y /= y.sum();
    const double lb = lower_of(y);
    if (lb > best_lb) {
      best_lb = lb;
      y_best = y;
    }
  }

  const double upper = psi(x);
  if (upper - best_lb <= tol) return {x, upper};
  throw std::runtime_error("reference_optimum: failed to certify tolerance within budget (achieved " +
                           std::to_string(upper - best_lb) + ")");
}

}  // namespace

std::pair<Vector, double> reference_optimum(CompositeProblem& problem,
                                            double tol) {
  if (!(tol >= 1e-12))
    throw std::invalid_argument("reference_optimum: tol must be >= 1e-12");
  if (problem.reference()) return *problem.reference();
  if (!problem.zoo())
    throw std::invalid_argument("reference_optimum: problem carries no generation data");
  const std::string& family = problem.zoo()->spec.family;
  std::pair<Vector, double> ref;
  if (family == "quad_l1" || family == "strong_quad_l1") {
    ref = reference_quadratic(problem, tol, /*use_fista=*/true);
  } else if (family == "stoch_abs") {
    ref = reference_stoch_abs(problem, tol);
  } else if (family == "saddle_linf") {
    ref = reference_saddle(problem, tol);
  } else {
    throw std::invalid_argument("reference_optimum: unknown family");
  }
  problem.set_reference(ref.first, ref.second);
  return ref;
}

// Second, independent solve used by the cross-checking tests.
std::pair<Vector, double> reference_optimum_alternate(
    const CompositeProblem& problem, double tol) {
  const std::string& family = problem.zoo()->spec.family;
  if (family == "quad_l1" || family == "strong_quad_l1")
    return reference_quadratic(problem, tol, /*use_fista=*/false);
  throw std::invalid_argument("alternate reference only covers the separable families");
}

}  // namespace slideopt
