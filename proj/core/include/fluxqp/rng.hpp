// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_RNG_HPP
#define FLUXQP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace fluxqp {

// Deterministic random number source. The engine is std::mt19937_64 (whose
// sequence is fixed by the C++ standard), and all variate transforms are
// implemented here rather than with std::*_distribution, whose algorithms
// vary across standard libraries. A given seed therefore produces an
// identical stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Exponential with the given rate (mean 1/rate), by inversion.
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  // Bernoulli with success probability p.
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fluxqp

#endif  // FLUXQP_RNG_HPP
