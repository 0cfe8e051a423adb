#include "slideopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slideopt {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

bool all_finite(const Vector& x) { return x.allFinite(); }

}  // namespace

FeasibleSet FeasibleSet::whole_space(int dim) {
  require(dim > 0, "whole_space: dimension must be positive");
  FeasibleSet s;
  s.kind_ = SetKind::whole_space;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  require(lo.size() > 0 && lo.size() == hi.size(), "box: lo/hi size mismatch");
  require((lo.array() <= hi.array()).all(), "box: requires lo <= hi coordinatewise");
  FeasibleSet s;
  s.kind_ = SetKind::box;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require(center.size() > 0, "ball: dimension must be positive");
  require(radius > 0.0, "ball: requires radius > 0");
  FeasibleSet s;
  s.kind_ = SetKind::ball;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::simplex(int dim, double scale) {
  require(dim > 0, "simplex: dimension must be positive");
  require(scale > 0.0, "simplex: requires scale > 0");
  FeasibleSet s;
  s.kind_ = SetKind::simplex;
  s.dim_ = dim;
  s.scale_ = scale;
  return s;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_ || !all_finite(x)) return false;
  switch (kind_) {
    case SetKind::whole_space:
      return true;
    case SetKind::box:
      return (x.array() >= lo_.array() - tol).all() &&
             (x.array() <= hi_.array() + tol).all();
    case SetKind::ball:
      return (x - center_).norm() <= radius_ + tol;
    case SetKind::simplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - scale_) <= tol * dim_ + tol;
  }
  return false;
}

Vector FeasibleSet::project(const Vector& x) const {
  switch (kind_) {
    case SetKind::whole_space:
      return x;
    case SetKind::box:
      return x.cwiseMax(lo_).cwiseMin(hi_);
    case SetKind::ball: {
      Vector d = x - center_;
      const double nrm = d.norm();
      if (nrm <= radius_) return x;
      return center_ + d * (radius_ / nrm);
    }
    case SetKind::simplex: {
      // Sort-based projection onto { u >= 0, sum u = scale }.
      const int n = dim_;
      std::vector<double> sorted(x.data(), x.data() + n);
      std::sort(sorted.begin(), sorted.end(), std::greater<double>());
      double running = 0.0, theta = 0.0;
      int support = 0;
      for (int j = 0; j < n; ++j) {
        running += sorted[j];
        const double candidate = (running - scale_) / (j + 1);
        if (sorted[j] - candidate > 0.0) {
          support = j + 1;
          theta = candidate;
        } else {
          break;
        }
      }
      (void)support;
      return (x.array() - theta).cwiseMax(0.0);
    }
  }
  return x;
}

Vector FeasibleSet::center_point() const {
  switch (kind_) {
    case SetKind::whole_space:
      return Vector::Zero(dim_);
    case SetKind::box:
      return 0.5 * (lo_ + hi_);
    case SetKind::ball:
      return center_;
    case SetKind::simplex:
      return Vector::Constant(dim_, scale_ / dim_);
  }
  return Vector::Zero(dim_);
}

SimpleTerm SimpleTerm::l1(double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("l1 term: weight must be finite and nonnegative");
  return SimpleTerm(Kind::l1, weight);
}

ProxGeometry ProxGeometry::euclidean(FeasibleSet set) {
  return ProxGeometry(GeometryKind::euclidean, std::move(set), 1.0);
}

ProxGeometry ProxGeometry::entropy_simplex(int dim, double scale) {
  // Entropy is (1/scale)-strongly convex in l1 on the scaled simplex, which
  // reduces to the standard modulus 1 at scale 1.
  FeasibleSet set = FeasibleSet::simplex(dim, scale);
  return ProxGeometry(GeometryKind::entropy_simplex, std::move(set), 1.0 / scale);
}

double ProxGeometry::norm(const Vector& x) const {
  return kind_ == GeometryKind::euclidean ? x.norm() : x.lpNorm<1>();
}

double ProxGeometry::dual_norm(const Vector& g) const {
  return kind_ == GeometryKind::euclidean ? g.norm() : g.lpNorm<Eigen::Infinity>();
}

double ProxGeometry::omega(const Vector& x) const {
  if (kind_ == GeometryKind::euclidean) return 0.5 * x.squaredNorm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) s += x[i] * std::log(x[i]);
  }
  return s;
}

Vector ProxGeometry::grad_omega(const Vector& x) const {
  if (kind_ == GeometryKind::euclidean) return x;
  if (x.minCoeff() <= 0.0)
    throw std::domain_error("entropy gradient undefined on the simplex boundary");
  return x.array().log() + 1.0;
}

double ProxGeometry::bregman(const Vector& x, const Vector& z) const {
  require(x.size() == z.size() && x.size() == dim(), "bregman: dimension mismatch");
  require(all_finite(x) && all_finite(z), "bregman: non-finite input");
  if (kind_ == GeometryKind::euclidean) return 0.5 * (z - x).squaredNorm();
  if (x.minCoeff() <= 0.0)
    throw std::domain_error("bregman: entropy gradient undefined on the simplex boundary");
  // Generalized KL; exact also slightly off the affine slice.
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (z[i] > 0.0) v += z[i] * (std::log(z[i]) - std::log(x[i]));
    v += x[i] - z[i];
  }
  return std::max(v, 0.0);
}

double ProxGeometry::max_bregman(const Vector& u) const {
  const FeasibleSet& set = set_;
  require(set.bounded(), "max_bregman: feasible set is unbounded");
  require(u.size() == dim(), "max_bregman: dimension mismatch");
  if (kind_ == GeometryKind::euclidean) {
    switch (set.kind()) {
      case SetKind::box: {
        double s = 0.0;
        for (int i = 0; i < u.size(); ++i) {
          const double d = std::max(u[i] - set.lo()[i], set.hi()[i] - u[i]);
          s += d * d;
        }
        return 0.5 * s;
      }
      case SetKind::ball: {
        const double d = (u - set.center()).norm() + set.radius();
        return 0.5 * d * d;
      }
      case SetKind::simplex: {
        // Farthest point of a polytope is a vertex.
        double best = 0.0;
        for (int i = 0; i < u.size(); ++i) {
          Vector v = -u;
          v[i] += set.scale();
          best = std::max(best, v.squaredNorm());
        }
        return 0.5 * best;
      }
      default:
        break;
    }
  } else {
    return set.scale() * std::log(static_cast<double>(dim())) +
           bregman(set.center_point(), u);
  }
  throw std::invalid_argument("max_bregman: unsupported set");
}

void soft_threshold(const Vector& v, double tau, Vector& out) {
  out = (v.array().abs() - tau).cwiseMax(0.0) * v.array().sign();
}

namespace {

// Shared core of composite_prox and ProxKernel for the Euclidean geometry:
// the weighted Bregman terms collapse to (W/2) |u - vbar|^2.
void euclidean_prox_finish(const FeasibleSet& set, const SimpleTerm& simple,
                           double total_weight, Vector& v) {
  if (simple.kind() == SimpleTerm::Kind::l1) {
    Vector t;
    soft_threshold(v, simple.weight() / total_weight, t);
    v = std::move(t);
    if (set.kind() == SetKind::box) v = v.cwiseMax(set.lo()).cwiseMin(set.hi());
    // whole_space: nothing else to do.
  } else {
    v = set.project(v);
  }
}

void check_combination(const ProxGeometry& geometry, const SimpleTerm& simple) {
  if (geometry.kind() == GeometryKind::entropy_simplex &&
      simple.kind() != SimpleTerm::Kind::zero)
    throw std::invalid_argument("composite_prox: entropy_simplex supports only the zero simple term");
  if (simple.kind() == SimpleTerm::Kind::l1) {
    const SetKind k = geometry.feasible_set().kind();
    if (k != SetKind::whole_space && k != SetKind::box)
      throw std::invalid_argument("composite_prox: l1 term requires whole_space or box");
  }
}

}  // namespace

Vector composite_prox(const ProxGeometry& geometry, const SimpleTerm& simple,
                      const Vector& g, std::span<const Anchor> anchors) {
  require(!anchors.empty(), "composite_prox: empty anchor list");
  require(g.size() == geometry.dim(), "composite_prox: dimension mismatch");
  require(all_finite(g), "composite_prox: non-finite linear term");
  check_combination(geometry, simple);
  double total_weight = 0.0;
  for (const Anchor& a : anchors) {
    require(a.weight > 0.0, "composite_prox: anchor weight must be positive");
    require(geometry.feasible_set().contains(a.point),
            "composite_prox: infeasible anchor");
    total_weight += a.weight;
  }

  if (geometry.kind() == GeometryKind::euclidean) {
    Vector v = -g;
    for (const Anchor& a : anchors) v += a.weight * a.point;
    v /= total_weight;
    euclidean_prox_finish(geometry.feasible_set(), simple, total_weight, v);
    return v;
  }

  // Entropy: minimizer is a softmax of the weighted log-anchors. Anchor
  // coordinates are floored at the nudge level before taking logs.
  const int n = geometry.dim();
  Vector logits = Vector::Zero(n);
  for (const Anchor& a : anchors) {
    logits.array() +=
        a.weight * a.point.array().max(kBoundaryNudge).log();
  }
  logits = (logits - g) / total_weight;
  const double m = logits.maxCoeff();
  Vector u = (logits.array() - m).exp();
  u *= geometry.feasible_set().scale() / u.sum();
  return u;
}

ProxKernel::ProxKernel(const ProxGeometry& geometry, const SimpleTerm& simple)
    : geometry_(geometry), simple_(simple), v_(geometry.dim()) {
  check_combination(geometry, simple);
}

void ProxKernel::step(const Vector& g, const Vector& x, double wx,
                      const Vector& y, double wy, Vector& out) {
  const double total = wx + wy;
  if (geometry_.kind() == GeometryKind::euclidean) {
    v_ = (wx * x + wy * y - g) / total;
    euclidean_prox_finish(geometry_.feasible_set(), simple_, total, v_);
    out = v_;
    return;
  }
  v_ = (wx * x.array().max(kBoundaryNudge).log() +
        wy * y.array().max(kBoundaryNudge).log() - g.array()) /
       total;
  const double m = v_.maxCoeff();
  out = (v_.array() - m).exp();
  out *= geometry_.feasible_set().scale() / out.sum();
}

}  // namespace slideopt
