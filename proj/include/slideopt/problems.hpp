#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "slideopt/oracles.hpp"

namespace slideopt {

// Desk-scale instance generator. Families:
//   quad_l1         f = |Ax-b|^2/2,               h = lambda |x|_1
//   strong_quad_l1  f = |Ax-b|^2/2 + mu |x|^2/2,  h = lambda |x|_1
//   stoch_abs       f = |Ax-b|^2/2,               h = mean_i |<c_i,x> - d_i|
//                   with a single-sample stochastic subgradient
//   saddle_linf     f = |Ax-b|_inf via its bilinear max structure,
//                   h = lambda |x|_1
// All instances are deterministic for a fixed seed.
struct ProblemSpec {
  std::string family = "quad_l1";
  int n = 50;
  int m = 80;
  // 0 keeps the generic dense operator; r > 0 builds A with rank r, which
  // removes strong convexity from f.
  int rank = 0;
  double lambda = 0.1;
  double mu = 0.0;
  // Noise level for the stochastic subgradient channel (0 = deterministic
  // problem, no stochastic oracle attached). stoch_abs ignores this and
  // certifies its own sure bound.
  double sigma = 0.0;
  int pool = 64;          // stoch_abs pieces
  double radius = 0.0;    // > 0: X = l2 ball(0, radius); 0 = whole space
  bool normalize = true;  // rescale A to unit spectral norm
  double signal_norm = 1.0;
  std::uint64_t seed = 0;

  // Direct overrides for hand-built cases; sizes win over n/m when set.
  Matrix custom_a;
  Vector custom_b;
};

// Generation artifacts kept alongside a zoo problem so reference optima can
// be certified by duality rather than by trust.
struct ZooData {
  ProblemSpec spec;
  Matrix a;
  Vector b;
  Matrix c;  // stoch_abs pieces (rows), empty otherwise
  Vector d;
  double lambda = 0.0;
  double mu = 0.0;
  double lmax_ata = 0.0;  // certified largest eigenvalue of A^T A
};

CompositeProblem make_problem(const ProblemSpec& spec);

std::vector<std::string> list_families();

// Canonical desk instances used by the verification harness.
ProblemSpec desk_quad_l1();
ProblemSpec desk_quad_l1_noisy();
ProblemSpec desk_strong_quad_l1();
ProblemSpec desk_stoch_abs();
ProblemSpec desk_saddle_linf();
ProblemSpec preset(const std::string& name);
std::vector<std::string> list_presets();

// Computes (x*, psi*) with a certificate psi(x*) - psi* <= tol and caches it
// on the problem. Separable-h instances run an accelerated exact-prox solve
// with a Fenchel duality gap; the saddle family pairs a long smoothed run
// with closed-form dual lower bounds. Throws when the certificate cannot be
// reached within the iteration budget.
std::pair<Vector, double> reference_optimum(CompositeProblem& problem,
                                            double tol);

// Second, independent route to the same optimum (plain proximal gradient
// with its own certificate); the agreement checks compare the two.
std::pair<Vector, double> reference_optimum_alternate(
    const CompositeProblem& problem, double tol);

// Convenience snapshot of the problem's oracle counters.
inline CallCounts counters(const CompositeProblem& p) { return p.counters(); }

}  // namespace slideopt
