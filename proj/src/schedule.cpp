#include "slideopt/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace slideopt {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

long long ceil_positive(double v) {
  // T_k is at least 1 even when the numerator vanishes (M = sigma = 0).
  return std::max<long long>(1, static_cast<long long>(std::ceil(v)));
}

}  // namespace

std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::fixed_horizon:
      return "fixed_horizon";
    case PolicyKind::compact_set:
      return "compact_set";
    case PolicyKind::custom:
      return "custom";
  }
  return "?";
}

SlidingSchedule SlidingSchedule::fixed_horizon(double L, double M, double nu,
                                               int N, double dtilde,
                                               double sigma) {
  require(L > 0 && nu > 0 && dtilde > 0, "schedule: constants must be positive");
  require(M >= 0 && sigma >= 0, "schedule: M and sigma must be nonnegative");
  require(N >= 1, "schedule: N must be >= 1");
  SlidingSchedule s;
  s.policy_ = PolicyKind::fixed_horizon;
  s.L_ = L;
  s.M_ = M;
  s.sigma_ = sigma;
  s.nu_ = nu;
  s.dtilde_ = dtilde;
  s.horizon_ = N;
  return s;
}

SlidingSchedule SlidingSchedule::compact_set(double L, double M, double nu,
                                             double dtilde, double sigma) {
  require(L > 0 && nu > 0 && dtilde > 0, "schedule: constants must be positive");
  require(M >= 0 && sigma >= 0, "schedule: M and sigma must be nonnegative");
  SlidingSchedule s;
  s.policy_ = PolicyKind::compact_set;
  s.L_ = L;
  s.M_ = M;
  s.sigma_ = sigma;
  s.nu_ = nu;
  s.dtilde_ = dtilde;
  s.horizon_ = 0;
  return s;
}

SlidingSchedule SlidingSchedule::custom(double L, double M, double nu,
                                        std::vector<double> beta,
                                        std::vector<double> gamma,
                                        std::vector<long long> big_t) {
  require(L > 0 && nu > 0, "schedule: constants must be positive");
  require(beta.size() == gamma.size() && beta.size() == big_t.size() &&
              !beta.empty(),
          "schedule: custom sequences must be nonempty and equally sized");
  SlidingSchedule s;
  s.policy_ = PolicyKind::custom;
  s.L_ = L;
  s.M_ = M;
  s.nu_ = nu;
  s.dtilde_ = 1.0;
  s.horizon_ = static_cast<int>(beta.size());
  s.beta_custom_ = std::move(beta);
  s.gamma_custom_ = std::move(gamma);
  s.t_custom_ = std::move(big_t);
  return s;
}

double SlidingSchedule::beta(int k) const {
  require(k >= 1, "beta: k must be >= 1");
  switch (policy_) {
    case PolicyKind::fixed_horizon:
      return 2.0 * L_ / (nu_ * k);
    case PolicyKind::compact_set:
      return 9.0 * L_ * (1.0 - big_p(big_t(k))) / (2.0 * nu_ * (k + 1));
    case PolicyKind::custom:
      require(k <= horizon_, "beta: k beyond custom schedule");
      return beta_custom_[k - 1];
  }
  return 0.0;
}

double SlidingSchedule::gamma(int k) const {
  require(k >= 1, "gamma: k must be >= 1");
  switch (policy_) {
    case PolicyKind::fixed_horizon:
      return 2.0 / (k + 1.0);
    case PolicyKind::compact_set:
      return 3.0 / (k + 2.0);
    case PolicyKind::custom:
      require(k <= horizon_, "gamma: k beyond custom schedule");
      return gamma_custom_[k - 1];
  }
  return 0.0;
}

long long SlidingSchedule::big_t(int k) const {
  require(k >= 1, "big_t: k must be >= 1");
  const double l2d = dtilde_ * L_ * L_;
  switch (policy_) {
    case PolicyKind::fixed_horizon:
      return ceil_positive(m2_effective() * horizon_ * static_cast<double>(k) *
                           k / l2d);
    case PolicyKind::compact_set: {
      const double kp1 = k + 1.0;
      return ceil_positive(m2_effective() * kp1 * kp1 * kp1 / l2d);
    }
    case PolicyKind::custom:
      require(k <= horizon_, "big_t: k beyond custom schedule");
      return t_custom_[k - 1];
  }
  return 1;
}

double SlidingSchedule::theta(long long t) const {
  require(t >= 1, "theta: t must be >= 1");
  const double td = static_cast<double>(t);
  return 2.0 * (td + 1.0) / (td * (td + 3.0));
}

double SlidingSchedule::big_p(long long t) const {
  require(t >= 0, "big_p: t must be >= 0");
  if (t == 0) return 1.0;
  const double td = static_cast<double>(t);
  return 2.0 / ((td + 1.0) * (td + 2.0));
}

double SlidingSchedule::gamma_prod(int k) const {
  require(k >= 1, "gamma_prod: k must be >= 1");
  const double kd = k;
  switch (policy_) {
    case PolicyKind::fixed_horizon:
      return 2.0 / (kd * (kd + 1.0));
    case PolicyKind::compact_set:
      return 6.0 / (kd * (kd + 1.0) * (kd + 2.0));
    case PolicyKind::custom: {
      require(k <= horizon_, "gamma_prod: k beyond custom schedule");
      if (gamma_prod_custom_.empty()) {
        gamma_prod_custom_.resize(horizon_);
        gamma_prod_custom_[0] = 1.0;
        for (int j = 2; j <= horizon_; ++j)
          gamma_prod_custom_[j - 1] =
              (1.0 - gamma_custom_[j - 1]) * gamma_prod_custom_[j - 2];
      }
      return gamma_prod_custom_[k - 1];
    }
  }
  return 0.0;
}

void SlidingSchedule::validate(int upto) const {
  validate_for_problem(L_, nu_, upto);
}

void SlidingSchedule::validate_for_problem(double problem_L, double problem_nu,
                                           int upto) const {
  require(upto >= 1, "validate: horizon must be >= 1");
  if (std::abs(gamma(1) - 1.0) > 1e-12)
    throw std::invalid_argument("schedule: gamma_1 must equal 1");
  double prev_ratio = 0.0;
  for (int k = 1; k <= upto; ++k) {
    if (problem_nu * beta(k) - problem_L * gamma(k) < -1e-12 * problem_L)
      throw std::invalid_argument(
          "schedule/problem constant mismatch: nu beta_k - L gamma_k < 0 at k=" +
          std::to_string(k));
    if (big_t(k) < 1) throw std::invalid_argument("schedule: T_k must be >= 1");
    const double ratio =
        gamma(k) * beta(k) / (gamma_prod(k) * (1.0 - big_p(big_t(k))));
    if (k >= 2) {
      const double slack = 1e-9 * std::max(1.0, std::abs(ratio));
      if (policy_ == PolicyKind::fixed_horizon && ratio > prev_ratio + slack)
        throw std::invalid_argument(
            "schedule: telescoping ratio must be nonincreasing");
      if (policy_ == PolicyKind::compact_set && ratio < prev_ratio - slack)
        throw std::invalid_argument(
            "schedule: telescoping ratio must be nondecreasing");
    }
    prev_ratio = ratio;
  }
}

double dtilde_default_fixed(double d_x, double nu) { return 1.5 * d_x / nu; }

double dtilde_default_compact(double d_x, double nu) {
  return 81.0 * d_x / (16.0 * nu);
}

double dtilde_default_fixed_stochastic(double d_x, double nu) {
  return 0.75 * d_x / nu;
}

double dtilde_default_compact_stochastic(double d_x, double nu) {
  return 81.0 * d_x / (32.0 * nu);
}

}  // namespace slideopt
