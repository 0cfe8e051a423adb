#include "slideopt/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace slideopt {

SaddleSmoother::SaddleSmoother(Matrix a, ProxGeometry dual_geometry,
                               Vector j_linear)
    : a_(std::move(a)),
      dual_geometry_(std::move(dual_geometry)),
      j_linear_(std::move(j_linear)),
      op_calls_(std::make_shared<std::atomic<long long>>(0)) {
  if (dual_geometry_.dim() != dual_dim())
    throw std::invalid_argument("SaddleSmoother: dual geometry dimension mismatch");
  if (j_linear_.size() == 0) j_linear_ = Vector::Zero(dual_dim());
  if (j_linear_.size() != dual_dim())
    throw std::invalid_argument("SaddleSmoother: J dimension mismatch");
  const FeasibleSet& y_set = dual_geometry_.feasible_set();
  if (!y_set.bounded())
    throw std::invalid_argument("SaddleSmoother: dual set must be bounded");

  if (dual_geometry_.kind() == GeometryKind::entropy_simplex) {
    dual_center_ = y_set.center_point();
    // max over Y of KL(y | uniform) is attained at a vertex.
    dual_range_ = y_set.scale() * std::log(static_cast<double>(dual_dim()));
    double best = 0.0;
    for (int i = 0; i < dual_dim(); ++i)
      best = std::max(best, a_.row(i).norm());
    a_norm_ = best;
  } else if (y_set.kind() == SetKind::ball) {
    // v = |y|^2/2; its minimizer over the ball:
    const Vector& c = y_set.center();
    const double cn = c.norm();
    dual_center_ = cn <= y_set.radius() ? Vector::Zero(dual_dim())
                                        : Vector(c * (1.0 - y_set.radius() / cn));
    // d(y) = |y - c_v|^2 / 2, maximized at the far side of the ball.
    const double reach = (c - dual_center_).norm() + y_set.radius();
    dual_range_ = 0.5 * reach * reach;
    Matrix gram = a_.transpose() * a_;
    a_norm_ = std::sqrt(power_iteration_lmax(gram));
  } else {
    throw std::invalid_argument("SaddleSmoother: unsupported dual geometry");
  }
}

double SaddleSmoother::dual_prox_term(const Vector& y) const {
  return dual_geometry_.bregman(dual_center_, y);
}

SaddleSmoother::Smoothed SaddleSmoother::value_grad(double eta,
                                                    const Vector& x) const {
  if (!(eta > 0.0)) throw std::invalid_argument("value_grad: eta must be positive");
  Vector z = apply(x) - j_linear_;
  const FeasibleSet& y_set = dual_geometry_.feasible_set();
  Smoothed out;
  if (dual_geometry_.kind() == GeometryKind::entropy_simplex) {
    const double s = y_set.scale();
    // Softmax of z/eta against the uniform center, computed stably.
    Vector logits = z / eta;
    const double m = logits.maxCoeff();
    Vector w = (logits.array() - m).exp();
    out.y_max = w * (s / w.sum());
    out.value = z.dot(out.y_max) - eta * dual_prox_term(out.y_max);
  } else {
    // Shrink toward the dual center, then project onto the ball.
    Vector cand = dual_center_ + z / eta;
    out.y_max = y_set.project(cand);
    out.value = z.dot(out.y_max) - 0.5 * eta * (out.y_max - dual_center_).squaredNorm();
  }
  out.gradient = apply_adjoint(out.y_max);
  return out;
}

double SaddleSmoother::exact_value(const Vector& x) const {
  // Diagnostic channel: does not meter operator applications.
  Vector z = a_ * x - j_linear_;
  const FeasibleSet& y_set = dual_geometry_.feasible_set();
  if (dual_geometry_.kind() == GeometryKind::entropy_simplex)
    return y_set.scale() * z.maxCoeff();
  return z.dot(y_set.center()) + y_set.radius() * z.norm();
}

double choose_eta(double a_norm, int horizon, double d_x, double d_y, double nu,
                  double nu_prime) {
  if (!(a_norm > 0.0) || horizon < 1 || !(d_x > 0.0) || !(d_y > 0.0) ||
      !(nu > 0.0) || !(nu_prime > 0.0))
    throw std::invalid_argument("choose_eta: all arguments must be positive");
  return (2.0 * a_norm / horizon) * std::sqrt(3.0 * d_x / (nu * nu_prime * d_y));
}

double power_iteration_lmax(const Matrix& sym, double tol, int max_iter) {
  const int n = static_cast<int>(sym.rows());
  if (n == 0) return 0.0;
  Vector v = Vector::Ones(n);
  // Deterministic tie-breaking perturbation.
  for (int i = 0; i < n; ++i) v[i] += 1e-3 * std::sin(1.0 + i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = sym * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = w.dot(sym * w);
    const bool done = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
    lambda = next;
    v = w;
    if (done && it > 2) break;
  }
  return lambda;
}

}  // namespace slideopt
