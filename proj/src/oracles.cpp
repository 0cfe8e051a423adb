#include "slideopt/oracles.hpp"

#include <stdexcept>

#include "slideopt/smoothing.hpp"

namespace slideopt {

SmoothOracle::SmoothOracle(ValueFn value, GradFn grad, double lipschitz,
                           double mu)
    : value_(std::move(value)),
      grad_(std::move(grad)),
      lipschitz_(lipschitz),
      mu_(mu),
      counters_(std::make_shared<CallCounters>()) {
  if (!(lipschitz_ >= 0.0) || !(mu_ >= 0.0))
    throw std::invalid_argument("SmoothOracle: L and mu must be nonnegative");
}

NonsmoothOracle::NonsmoothOracle(ValueFn value, SubgradFn subgrad, double bound)
    : value_(std::move(value)),
      subgrad_(std::move(subgrad)),
      bound_(bound),
      counters_(std::make_shared<CallCounters>()) {
  if (!(bound_ >= 0.0))
    throw std::invalid_argument("NonsmoothOracle: bound M must be nonnegative");
}

StochasticOracle::StochasticOracle(SampleFn sample, double sigma,
                                   bool light_tail)
    : sample_(std::move(sample)),
      sigma_(sigma),
      light_tail_(light_tail),
      counters_(std::make_shared<CallCounters>()) {
  if (!(sigma_ >= 0.0))
    throw std::invalid_argument("StochasticOracle: sigma must be nonnegative");
}

CompositeProblem::CompositeProblem(ProxGeometry geometry, SmoothOracle smooth,
                                   NonsmoothOracle nonsmooth, SimpleTerm simple,
                                   Vector x0)
    : geometry_(std::move(geometry)),
      smooth_(std::move(smooth)),
      nonsmooth_(std::move(nonsmooth)),
      simple_(simple),
      x0_(std::move(x0)),
      counters_(std::make_shared<CallCounters>()) {
  if (x0_.size() != geometry_.dim())
    throw std::invalid_argument("CompositeProblem: start point dimension mismatch");
  if (!geometry_.feasible_set().contains(x0_, 1e-9))
    throw std::invalid_argument("CompositeProblem: start point infeasible");
  rebind(counters_);
}

void CompositeProblem::set_stochastic(StochasticOracle so) {
  stochastic_ = std::move(so);
  stochastic_->bind_counters(counters_);
}

double CompositeProblem::psi(const Vector& x) const {
  const double f_part =
      saddle_ ? saddle_->exact_value(x) : smooth_.value(x);
  return f_part + nonsmooth_.value(x) + simple_.value(x);
}

CompositeProblem CompositeProblem::with_fresh_counters() const {
  CompositeProblem copy = *this;
  copy.counters_ = std::make_shared<CallCounters>();
  copy.rebind(copy.counters_);
  return copy;
}

void CompositeProblem::rebind(CounterPtr c) {
  smooth_.bind_counters(c);
  nonsmooth_.bind_counters(c);
  if (stochastic_) stochastic_->bind_counters(c);
  counters_ = std::move(c);
}

}  // namespace slideopt
