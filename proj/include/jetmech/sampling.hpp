#pragma once

// Seeded uniform samples from a cube. The bit-to-double conversion is done
// here rather than by <random> distributions so that a seed gives the same
// points on every standard library.

#include <cstdint>
#include <random>

#include "jetmech/bundle.hpp"

namespace jetmech {

class SampleBox {
 public:
  SampleBox(std::uint64_t seed, double lo, double hi) : rng_(seed), lo_(lo), hi_(hi) {}

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double next() { return lo_ + (hi_ - lo_) * unit(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vector vector(int n) {
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = next();
    return out;
  }

  JetPoint jet(int n) {
    const double t = next();
    Vector y = vector(n);
    return JetPoint{t, std::move(y), vector(n)};
  }

  VerticalPhasePoint phase(int n) {
    const double t = next();
    Vector y = vector(n);
    return VerticalPhasePoint{t, std::move(y), vector(n)};
  }

  HomogeneousPhasePoint homogeneous(int n) {
    const double t = next();
    Vector y = vector(n);
    Vector p = vector(n);
    return HomogeneousPhasePoint{t, std::move(y), std::move(p), next()};
  }

 private:
  std::mt19937_64 rng_;
  double lo_;
  double hi_;
};

}  // namespace jetmech
