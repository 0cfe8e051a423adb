#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace slideopt {

// Counter-based random stream. Every (seed, phase, outer, inner) tuple owns
// an independent, replayable sequence, so trials can run in parallel and in
// any order without changing results. State evolution is splitmix64.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t phase, std::uint64_t outer,
            std::uint64_t inner)
      : state_(mix(mix(mix(mix(0x9e3779b97f4a7c15ULL ^ seed) ^ phase) ^ outer) ^
                   inner)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller; rejects the u = 0 corner.
    double u = 0.0;
    do {
      u = next_uniform();
    } while (u <= 0.0);
    const double v = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd gaussian_vector(int dim) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g[i] = next_gaussian();
    return g;
  }

  // Uniform direction on the Euclidean unit sphere.
  Eigen::VectorXd unit_sphere_l2(int dim) {
    Eigen::VectorXd g = gaussian_vector(dim);
    const double nrm = g.norm();
    if (nrm == 0.0) {
      g.setZero();
      g[0] = 1.0;
      return g;
    }
    return g / nrm;
  }

  // Point on the surface of the l-infinity unit ball: one coordinate pinned
  // to +-1, the rest uniform in [-1, 1].
  Eigen::VectorXd unit_sphere_linf(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = next_uniform(-1.0, 1.0);
    const int pin = static_cast<int>(next_u64() % static_cast<std::uint64_t>(dim));
    v[pin] = next_uniform() < 0.5 ? -1.0 : 1.0;
    return v;
  }

  std::uint64_t pick_index(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Identifies the stream family a run draws from. Inner iterations derive
// their streams as (seed, phase, outer k, inner t).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t phase = 0;
  std::uint64_t outer = 0;

  RngStream inner_stream(std::uint64_t t) const {
    return RngStream(seed, phase, outer, t);
  }
};

}  // namespace slideopt
