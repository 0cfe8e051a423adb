#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "slideopt/geometry.hpp"

namespace slideopt {

class CompositeProblem;
struct RunRecord;

// Bilinear max structure  f(x) = max_{y in Y} <A x, y> - J(y)  together with
// the dual prox term used to smooth it. J is restricted to zero or a linear
// term <j, y> so the inner maximization stays in closed form.
class SaddleSmoother {
 public:
  // dual_geometry carries Y and the dual distance generating function v;
  // supported kinds: entropy over a simplex Y and Euclidean over a ball Y.
  SaddleSmoother(Matrix a, ProxGeometry dual_geometry, Vector j_linear);

  const Matrix& a() const { return a_; }
  const ProxGeometry& dual_geometry() const { return dual_geometry_; }
  int primal_dim() const { return static_cast<int>(a_.cols()); }
  int dual_dim() const { return static_cast<int>(a_.rows()); }

  // Induced operator norm from the primal l2 norm to the norm dual to Y's:
  // spectral norm for a Euclidean Y, max row l2 norm for a simplex Y.
  double operator_norm() const { return a_norm_; }
  double dual_modulus() const { return dual_geometry_.modulus(); }
  // Prox center of Y and the range of the dual prox term over Y.
  const Vector& dual_center() const { return dual_center_; }
  double dual_range() const { return dual_range_; }
  // d(y) = v(y) - v(c) - <grad v(c), y - c>.
  double dual_prox_term(const Vector& y) const;

  double lipschitz(double eta) const {
    return a_norm_ * a_norm_ / (eta * dual_modulus());
  }

  struct Smoothed {
    double value;
    Vector gradient;
    Vector y_max;
  };
  // Solves max_{y in Y} { <A x, y> - J(y) - eta d(y) } in closed form
  // (softmax for a simplex Y, shrink-and-project for a ball Y) and returns
  // the smoothed value, its gradient A^T y, and the maximizer.
  Smoothed value_grad(double eta, const Vector& x) const;

  // Exact f(x) = max_{y in Y} <A x, y> - J(y), eta = 0 limit.
  double exact_value(const Vector& x) const;

  // Applications of A and A^T since the last reset; one of each per
  // value_grad or exact_value call.
  long long operator_applications() const { return op_calls_->load(); }
  void reset_operator_count() const { op_calls_->store(0); }

 private:
  Vector apply(const Vector& x) const {
    op_calls_->fetch_add(1, std::memory_order_relaxed);
    return a_ * x;
  }
  Vector apply_adjoint(const Vector& y) const {
    op_calls_->fetch_add(1, std::memory_order_relaxed);
    return a_.transpose() * y;
  }

  Matrix a_;
  ProxGeometry dual_geometry_;
  Vector j_linear_;
  Vector dual_center_;
  double dual_range_ = 0.0;
  double a_norm_ = 0.0;
  std::shared_ptr<std::atomic<long long>> op_calls_;
};

// Smoothing level of the fixed-horizon policy: eta decreases like 1/N.
double choose_eta(double a_norm, int horizon, double d_x, double d_y, double nu,
                  double nu_prime);

// Guarantee of the smoothing run: 4 sqrt(3) |A| sqrt(D_X D_Y) / (sqrt(nu nu') N).
double ssgs_bound(double a_norm, int n_outer, double d_x, double d_y, double nu,
                  double nu_prime);

// Largest eigenvalue of the symmetric positive semidefinite matrix by power
// iteration, converged to the given relative tolerance.
double power_iteration_lmax(const Matrix& sym, double tol = 1e-10,
                            int max_iter = 200000);

}  // namespace slideopt
