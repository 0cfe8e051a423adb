#pragma once

#include <string>
#include <vector>

#include "slideopt/geometry.hpp"

namespace slideopt {

enum class PolicyKind { fixed_horizon, compact_set, custom };

std::string to_string(PolicyKind k);

// Per-iteration parameters of the sliding algorithms.
//
// Inner loop (all built-in policies):
//   p_t = t/2,  theta_t = 2(t+1) / (t(t+3)),  P_t = 2 / ((t+1)(t+2))
//
// Outer loop:
//   fixed_horizon: beta_k = 2L/(nu k),            gamma_k = 2/(k+1)
//                  T_k = ceil((M^2+sigma^2) N k^2 / (Dtilde L^2))
//   compact_set:   beta_k = 9L(1-P_{T_k})/(2 nu (k+1)), gamma_k = 3/(k+2)
//                  T_k = ceil((M^2+sigma^2) (k+1)^3 / (Dtilde L^2))
//
// The deterministic schedules are the sigma = 0 case.
class SlidingSchedule {
 public:
  static SlidingSchedule fixed_horizon(double L, double M, double nu, int N,
                                       double dtilde, double sigma = 0.0);
  static SlidingSchedule compact_set(double L, double M, double nu,
                                     double dtilde, double sigma = 0.0);
  // User-supplied sequences; validated against the inner-loop conditions on
  // use, nothing more.
  static SlidingSchedule custom(double L, double M, double nu,
                                std::vector<double> beta,
                                std::vector<double> gamma,
                                std::vector<long long> big_t);

  PolicyKind policy() const { return policy_; }
  double lipschitz() const { return L_; }
  double nonsmooth_bound() const { return M_; }
  double sigma() const { return sigma_; }
  double modulus() const { return nu_; }
  double dtilde() const { return dtilde_; }
  int horizon() const { return horizon_; }  // 0 when not fixed a priori
  double m2_effective() const { return M_ * M_ + sigma_ * sigma_; }

  double beta(int k) const;
  double gamma(int k) const;
  long long big_t(int k) const;

  double p(long long t) const { return 0.5 * static_cast<double>(t); }
  double theta(long long t) const;
  // P_t with P_0 = 1.
  double big_p(long long t) const;
  // Gamma_k: 2/(k(k+1)) for fixed_horizon, 6/(k(k+1)(k+2)) for compact_set.
  double gamma_prod(int k) const;

  // Condition gamma_1 = 1, nu beta_k - L gamma_k >= 0 for k <= N, and the
  // policy's telescoping monotonicity; throws on violation.
  void validate(int upto) const;
  void validate_for_problem(double problem_L, double problem_nu, int upto) const;

 private:
  SlidingSchedule() = default;
  PolicyKind policy_ = PolicyKind::fixed_horizon;
  double L_ = 0, M_ = 0, sigma_ = 0, nu_ = 0, dtilde_ = 0;
  int horizon_ = 0;
  std::vector<double> beta_custom_, gamma_custom_;
  std::vector<long long> t_custom_;
  mutable std::vector<double> gamma_prod_custom_;
};

// Default Dtilde tunings giving the optimal total-work tradeoff, with D_X an
// upper bound on the Bregman distances over the feasible set (or on
// V(x0, x*) when the set is unbounded).
double dtilde_default_fixed(double d_x, double nu);              // 3 D_X / (2 nu)
double dtilde_default_compact(double d_x, double nu);            // 81 D_X / (16 nu)
double dtilde_default_fixed_stochastic(double d_x, double nu);   // 3 D_X / (4 nu)
double dtilde_default_compact_stochastic(double d_x, double nu); // 81 D_X / (32 nu)

}  // namespace slideopt
