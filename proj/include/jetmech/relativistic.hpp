#pragma once

// Jets of curves in an (m+1)-dimensional manifold Z with coordinates
// z0, z1..zm, written in a chart where z0 plays the role of time.

#include <string>
#include <vector>

#include "jetmech/expr.hpp"
#include "jetmech/linalg.hpp"

namespace jetmech {

std::string z_name(int mu);  // 0 -> "z0", 1 -> "z1", ...

/// (z0, z, v) with v^i = dz^i/dz0.
struct SubmanifoldJet {
  double z0 = 0.0;
  Vector z;
  Vector v;
};

/// A point of TZ: base (z0, z) and components (ż0, ż).
struct TangentVector {
  double z0 = 0.0;
  Vector z;
  double dz0 = 0.0;
  Vector dz;
};

/// z̃^μ = maps[μ](z0, z1..zm).
class ChartTransform {
 public:
  explicit ChartTransform(std::vector<Expression> maps);
  static ChartTransform parse(const std::vector<std::string>& maps);
  static ChartTransform identity(int m);

  int m() const { return static_cast<int>(maps_.size()) - 1; }
  const std::vector<Expression>& maps() const { return maps_; }

  /// z̃ at (z0, z).
  Vector apply(double z0, const Vector& z) const;
  /// ∂z̃^μ/∂z^ν.
  Matrix jacobian(double z0, const Vector& z) const;

 private:
  std::vector<Expression> maps_;
};

/// outer∘inner, by substitution.
ChartTransform compose(const ChartTransform& outer, const ChartTransform& inner);

/// Swaps coordinates a and b (0 <= a, b <= m).
ChartTransform exchange_transform(int m, int a, int b);

/// Every coordinate exchange that brings z_k (k >= 1) into the time slot, for m <= 3.
std::vector<ChartTransform> time_exchanges(int m);

/// z̃0 = γ(z0 - β z_axis), z̃_axis = γ(z_axis - β z0); |β| < 1.
ChartTransform boost_transform(int m, double beta, int axis = 1);

inline constexpr double kChartBoundaryThreshold = 1e-12;

/// ṽ^i = (∂_0 z̃^i + v^j ∂_j z̃^i) / (∂_0 z̃^0 + v^k ∂_k z̃^0).
/// Throws ChartBoundary when the denominator is below 1e-12 in magnitude.
SubmanifoldJet transform_jet(const ChartTransform& tr, const SubmanifoldJet& j);

inline constexpr double kInfinityThreshold = 1e-15;

/// v = ż/ż0; throws AtInfinity when |ż0| < 1e-15.
SubmanifoldJet project_tangent(const TangentVector& w);

/// g_{μν}(z), symmetric; only the upper triangle is kept.
class Metric {
 public:
  /// Throws InputError unless `rows` is square and structurally symmetric.
  explicit Metric(const std::vector<std::vector<Expression>>& rows);
  static Metric parse(const std::vector<std::vector<std::string>>& rows);
  /// diag(1, -1, ..., -1).
  static Metric minkowski(int m);

  int m() const { return dim_ - 1; }
  Matrix at(double z0, const Vector& z) const;

 private:
  int dim_;
  std::vector<Expression> upper_;  // row-major upper triangle
};

/// g(w, w) - 1.
double hyperboloid_residual(const Metric& g, const TangentVector& w);

/// The vector on the hyperboloid g(w, w) = 1 projecting to j, with ż0 of sign
/// `branch` (+1 or -1). Throws SpacelikeDirection when g00 + 2 g0i v^i +
/// g_ij v^i v^j <= 0.
TangentVector normalize_to_hyperboloid(const Metric& g, const SubmanifoldJet& j, int branch = 1);

/// Σ (v^i)^2 < 1, valid in a chart where g is pseudo-Euclidean at the point.
bool velocity_bound_check(const SubmanifoldJet& j);

}  // namespace jetmech
