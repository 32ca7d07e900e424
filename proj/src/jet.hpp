#pragma once

// Truncated Taylor arithmetic for forward-mode differentiation.
//
// A Jet carries a value, its gradient with respect to k seed directions and,
// when `h` is non-empty, its Hessian. Every operation is the exact chain rule
// truncated at order two.

#include <cmath>
#include <cstdint>

#include "jetmech/linalg.hpp"

namespace jetmech::detail {

struct Jet {
  double v = 0.0;
  Vector g;
  Matrix h;  // empty for first-order jets

  bool second_order() const { return h.rows() != 0; }
};

inline Jet make_constant(double value, Eigen::Index dim, bool second) {
  Jet r;
  r.v = value;
  r.g = Vector::Zero(dim);
  if (second) r.h = Matrix::Zero(dim, dim);
  return r;
}

inline Jet make_seed(double value, Eigen::Index dim, Eigen::Index index, bool second) {
  Jet r = make_constant(value, dim, second);
  r.g[index] = 1.0;
  return r;
}

/// Composition with a scalar function whose derivatives at a.v are f1, f2.
inline Jet chain(const Jet& a, double f0, double f1, double f2) {
  Jet r;
  r.v = f0;
  r.g = f1 * a.g;
  if (a.second_order()) r.h = f1 * a.h + f2 * (a.g * a.g.transpose());
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  if (a.second_order()) r.h = a.h + b.h;
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  if (a.second_order()) r.h = a.h - b.h;
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r;
  r.v = -a.v;
  r.g = -a.g;
  if (a.second_order()) r.h = -a.h;
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  if (a.second_order()) {
    r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  }
  return r;
}

inline Jet reciprocal(const Jet& a) {
  const double inv = 1.0 / a.v;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

inline Jet tan(const Jet& a) {
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

/// Integer power by binary exponentiation on the jets themselves.
template <class T>
T pow_int(const T& base, std::int64_t exponent, const T& one) {
  if (exponent < 0) return one / pow_int(base, -exponent, one);
  T result = one;
  T factor = base;
  bool first = true;
  while (exponent > 0) {
    if (exponent & 1) {
      result = first ? factor : result * factor;
      first = false;
    }
    exponent >>= 1;
    if (exponent > 0) factor = factor * factor;
  }
  return result;
}

}  // namespace jetmech::detail
