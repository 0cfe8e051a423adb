#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace slideopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kFeasTol = 1e-12;        // absolute feasibility tolerance
inline constexpr double kCertTol = 1e-8;         // optimality certificates
inline constexpr double kBoundaryNudge = 1e-12;  // floor applied before log()

enum class SetKind { whole_space, box, ball, simplex };

// Closed convex feasible set with a closed-form Euclidean projection.
class FeasibleSet {
 public:
  static FeasibleSet whole_space(int dim);
  static FeasibleSet box(Vector lo, Vector hi);
  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet simplex(int dim, double scale);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const { return kind_ != SetKind::whole_space; }
  double scale() const { return scale_; }
  double radius() const { return radius_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Vector& center() const { return center_; }

  bool contains(const Vector& x, double tol = kFeasTol) const;
  Vector project(const Vector& x) const;
  // Natural starting point: box midpoint, ball center, uniform simplex point,
  // origin for the whole space.
  Vector center_point() const;

 private:
  FeasibleSet() = default;
  SetKind kind_ = SetKind::whole_space;
  int dim_ = 0;
  Vector lo_, hi_, center_;
  double radius_ = 0.0;
  double scale_ = 0.0;
};

// The simple nonsmooth term kept inside the prox subproblems.
class SimpleTerm {
 public:
  enum class Kind { zero, l1 };

  static SimpleTerm zero() { return SimpleTerm(Kind::zero, 0.0); }
  static SimpleTerm l1(double weight);

  Kind kind() const { return kind_; }
  double weight() const { return weight_; }
  double value(const Vector& x) const {
    return kind_ == Kind::zero ? 0.0 : weight_ * x.lpNorm<1>();
  }

 private:
  SimpleTerm(Kind kind, double weight) : kind_(kind), weight_(weight) {}
  Kind kind_;
  double weight_;
};

enum class GeometryKind { euclidean, entropy_simplex };

// Distance generating function plus feasible set. The geometry owns the
// Bregman distance and the closed-form prox solvers used by every algorithm.
//
// Supported pairs:
//   euclidean       omega = |x|^2/2, any feasible set, modulus 1 under l2
//   entropy_simplex omega = sum x_i log x_i on the scaled simplex, l1 norm
class ProxGeometry {
 public:
  static ProxGeometry euclidean(FeasibleSet set);
  static ProxGeometry entropy_simplex(int dim, double scale);

  GeometryKind kind() const { return kind_; }
  int dim() const { return set_.dim(); }
  double modulus() const { return modulus_; }
  const FeasibleSet& feasible_set() const { return set_; }

  // Norm the smoothness/nonsmoothness constants refer to, and its dual.
  double norm(const Vector& x) const;
  double dual_norm(const Vector& g) const;

  double omega(const Vector& x) const;
  Vector grad_omega(const Vector& x) const;

  // Bregman distance V(x, z) = omega(z) - omega(x) - <grad omega(x), z - x>.
  // For the entropy geometry x must be strictly interior.
  double bregman(const Vector& x, const Vector& z) const;

  // Upper estimate of max_x V(x, u) over the feasible set. Exact for
  // Euclidean box/ball/simplex (farthest corner, antipode, farthest vertex).
  // The entropy value blows up as the first argument approaches the
  // boundary, so we return the domain-size surrogate
  //   scale * log(n) + V(center, u),
  // which is what the step-size policies actually need.
  double max_bregman(const Vector& u) const;

 private:
  ProxGeometry(GeometryKind kind, FeasibleSet set, double modulus)
      : kind_(kind), set_(std::move(set)), modulus_(modulus) {}
  GeometryKind kind_;
  FeasibleSet set_;
  double modulus_;
};

struct Anchor {
  Vector point;
  double weight = 0.0;
};

// Solves  argmin_{u in X} { <g, u> + sum_i w_i V(x_i, u) + simple(u) }
// in closed form. Throws on empty anchors, infeasible anchors, or an
// unsupported (geometry, simple, set) combination.
Vector composite_prox(const ProxGeometry& geometry, const SimpleTerm& simple,
                      const Vector& g, std::span<const Anchor> anchors);

// Allocation-free two-anchor prox used by the inner sliding loops. Same math
// as composite_prox with anchors {(x, wx), (y, wy)} and no validation; the
// loops maintain feasibility as an invariant.
class ProxKernel {
 public:
  ProxKernel(const ProxGeometry& geometry, const SimpleTerm& simple);

  void step(const Vector& g, const Vector& x, double wx, const Vector& y,
            double wy, Vector& out);

 private:
  const ProxGeometry& geometry_;
  SimpleTerm simple_;
  Vector v_;
};

// Elementwise soft threshold, the l1 prox building block.
void soft_threshold(const Vector& v, double tau, Vector& out);

}  // namespace slideopt
