#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "slideopt/geometry.hpp"
#include "slideopt/rng.hpp"

namespace slideopt {

class SaddleSmoother;  // smoothing.hpp
struct ZooData;        // problems.hpp

struct CallCounts {
  long long grad = 0;
  long long subgrad = 0;
  long long stoch = 0;
};

// Shared between the oracles of one problem instance. Atomic so parallel
// trials on cloned problems stay exact; clones get a fresh block.
class CallCounters {
 public:
  void add_grad() { grad_.fetch_add(1, std::memory_order_relaxed); }
  void add_subgrad() { subgrad_.fetch_add(1, std::memory_order_relaxed); }
  void add_stoch() { stoch_.fetch_add(1, std::memory_order_relaxed); }
  CallCounts snapshot() const {
    return {grad_.load(), subgrad_.load(), stoch_.load()};
  }
  void reset() {
    grad_ = 0;
    subgrad_ = 0;
    stoch_ = 0;
  }

 private:
  std::atomic<long long> grad_{0}, subgrad_{0}, stoch_{0};
};

using CounterPtr = std::shared_ptr<CallCounters>;

// Smooth component: exact values and gradients, Lipschitz constant L for the
// gradient, optional strong convexity mu. Only gradient() is metered;
// value() is the uncounted diagnostic channel.
class SmoothOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<void(const Vector&, Vector&)>;

  SmoothOracle(ValueFn value, GradFn grad, double lipschitz, double mu = 0.0);

  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const {
    counters_->add_grad();
    Vector g(dim_hint_ > 0 ? dim_hint_ : x.size());
    grad_(x, g);
    return g;
  }
  void gradient_into(const Vector& x, Vector& out) const {
    counters_->add_grad();
    grad_(x, out);
  }

  double lipschitz() const { return lipschitz_; }
  double strong_convexity() const { return mu_; }

  void bind_counters(CounterPtr c) { counters_ = std::move(c); }
  const CounterPtr& counters() const { return counters_; }

 private:
  ValueFn value_;
  GradFn grad_;
  double lipschitz_;
  double mu_;
  int dim_hint_ = 0;
  CounterPtr counters_;
};

// Nonsmooth component with subgradient bound M under the geometry's dual
// norm. subgradient() is metered, value() is not.
class NonsmoothOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using SubgradFn = std::function<void(const Vector&, Vector&)>;

  NonsmoothOracle(ValueFn value, SubgradFn subgrad, double bound);

  double value(const Vector& x) const { return value_(x); }
  Vector subgradient(const Vector& x) const {
    counters_->add_subgrad();
    Vector g(x.size());
    subgrad_(x, g);
    return g;
  }
  void subgradient_into(const Vector& x, Vector& out) const {
    counters_->add_subgrad();
    subgrad_(x, out);
  }
  // Same vector, no counter; the sampling checks use this.
  void subgradient_unmetered(const Vector& x, Vector& out) const {
    subgrad_(x, out);
  }

  double bound() const { return bound_; }

  void bind_counters(CounterPtr c) { counters_ = std::move(c); }

 private:
  ValueFn value_;
  SubgradFn subgrad_;
  double bound_;
  CounterPtr counters_;
};

// Unbiased stochastic subgradient sampler for the nonsmooth component:
//   E[H(x, xi)] in subdifferential of h at x,  E |H - h'|_*^2 <= sigma^2.
// With light_tail set the deviation is bounded by sigma surely.
class StochasticOracle {
 public:
  using SampleFn = std::function<void(const Vector&, RngStream&, Vector&)>;

  StochasticOracle(SampleFn sample, double sigma, bool light_tail);

  Vector sample(const Vector& x, RngStream& stream) const {
    counters_->add_stoch();
    Vector g(x.size());
    sample_(x, stream, g);
    return g;
  }
  void sample_into(const Vector& x, RngStream& stream, Vector& out) const {
    counters_->add_stoch();
    sample_(x, stream, out);
  }

  double sigma() const { return sigma_; }
  bool light_tail() const { return light_tail_; }

  void bind_counters(CounterPtr c) { counters_ = std::move(c); }

 private:
  SampleFn sample_;
  double sigma_;
  bool light_tail_;
  CounterPtr counters_;
};

// A composite instance: minimize psi = f + h + simple over the feasible set
// carried by the geometry. Oracles are immutable and shareable; the call
// counters are the only mutable state.
class CompositeProblem {
 public:
  CompositeProblem(ProxGeometry geometry, SmoothOracle smooth,
                   NonsmoothOracle nonsmooth, SimpleTerm simple, Vector x0);

  const ProxGeometry& geometry() const { return geometry_; }
  const SmoothOracle& smooth() const { return smooth_; }
  const NonsmoothOracle& nonsmooth() const { return nonsmooth_; }
  const SimpleTerm& simple() const { return simple_; }
  const Vector& start_point() const { return x0_; }
  int dim() const { return geometry_.dim(); }

  void set_stochastic(StochasticOracle so);
  const std::optional<StochasticOracle>& stochastic() const { return stochastic_; }

  // Set when h is exactly an l1 penalty, so the exact-h baselines can fold
  // it into the prox subproblem.
  void set_h_as_simple(SimpleTerm t) { h_as_simple_ = t; }
  const std::optional<SimpleTerm>& h_as_simple() const { return h_as_simple_; }

  void set_saddle(std::shared_ptr<const SaddleSmoother> s) { saddle_ = std::move(s); }
  const std::shared_ptr<const SaddleSmoother>& saddle() const { return saddle_; }

  void set_zoo(std::shared_ptr<const ZooData> z) { zoo_ = std::move(z); }
  const std::shared_ptr<const ZooData>& zoo() const { return zoo_; }

  // Uncounted objective evaluation. For saddle instances the exact
  // (unsmoothed) f is used.
  double psi(const Vector& x) const;

  void set_reference(Vector x_star, double psi_star) {
    reference_ = std::make_pair(std::move(x_star), psi_star);
  }
  const std::optional<std::pair<Vector, double>>& reference() const {
    return reference_;
  }

  CallCounts counters() const { return counters_->snapshot(); }
  void reset_counters() { counters_->reset(); }

  // Shares the oracles but meters calls into a fresh block; recommended for
  // per-trial accounting when trials run in parallel.
  CompositeProblem with_fresh_counters() const;

  // Meters this problem's calls into another problem's counter block, so a
  // derived problem (e.g. a smoothed surrogate) reports through its parent.
  void adopt_counters(const CompositeProblem& parent) { rebind(parent.counters_); }

 private:
  void rebind(CounterPtr c);

  ProxGeometry geometry_;
  SmoothOracle smooth_;
  NonsmoothOracle nonsmooth_;
  std::optional<StochasticOracle> stochastic_;
  SimpleTerm simple_;
  std::optional<SimpleTerm> h_as_simple_;
  std::shared_ptr<const SaddleSmoother> saddle_;
  std::shared_ptr<const ZooData> zoo_;
  Vector x0_;
  std::optional<std::pair<Vector, double>> reference_;
  CounterPtr counters_;
};

}  // namespace slideopt
