#pragma once

// Hamilton equations, Hamiltonian maps, canonical transformations and the
// Lagrangian L_H = p y_t - 𝓗 on the jets of V*Y.

#include <vector>

#include "jetmech/bundle.hpp"
#include "jetmech/systems.hpp"
#include "jetmech/trajectory.hpp"

namespace jetmech {

/// γ_H = ∂_t + ∂^i𝓗 ∂_i - ∂_i𝓗 ∂^i at q.
VerticalTangent hamilton_rhs(const HamiltonianForm& h, const VerticalPhasePoint& q);

Trajectory integrate_hamilton(const HamiltonianForm& h, const VerticalPhasePoint& q0,
                              double t_end, double dt);

/// v = ∂𝓗/∂p at q.
JetPoint hamiltonian_map(const HamiltonianForm& h, const VerticalPhasePoint& q);

/// (y, p) -> (y'(t,y,p), p'(t,y,p)).
class CanonicalTransform {
 public:
  CanonicalTransform(std::vector<Expression> y_map, std::vector<Expression> p_map);
  static CanonicalTransform parse(const std::vector<std::string>& y_map,
                                  const std::vector<std::string>& p_map);
  static CanonicalTransform identity(int n);

  int n() const { return static_cast<int>(y_map_.size()); }
  const std::vector<Expression>& y_map() const { return y_map_; }
  const std::vector<Expression>& p_map() const { return p_map_; }

  VerticalPhasePoint apply(const VerticalPhasePoint& q) const;
  PhaseJacobian jacobian(const VerticalPhasePoint& q) const;

 private:
  std::vector<Expression> y_map_;
  std::vector<Expression> p_map_;
};

/// Largest absolute entry of each of the three bracket relations
///   ∂p'_i/∂p_j ∂y'^i/∂p_k - ∂p'_i/∂p_k ∂y'^i/∂p_j = 0,
///   ∂p'_i/∂y^j ∂y'^i/∂y^k - ∂p'_i/∂y^k ∂y'^i/∂y^j = 0,
///   ∂p'_i/∂p_j ∂y'^i/∂y^k - ∂p'_i/∂y^j ∂y'^i/∂p_k = δ_jk,
/// with the third measured as its left side minus δ_jk.
struct CanonicalReport {
  double momentum = 0.0;
  double position = 0.0;
  double mixed = 0.0;

  double max_residual() const;
  bool pass(double tolerance = 1e-8) const { return max_residual() <= tolerance; }
};

inline constexpr double kCanonicalTolerance = 1e-8;

CanonicalReport canonical_residuals(const PhaseJacobian& d);
CanonicalReport canonical_check(const CanonicalTransform& tr,
                                const std::vector<VerticalPhasePoint>& points);

/// Residuals of
///   ∂_i S = ρ_j ∂_i ρ^j - p_i,  ∂^i S = ρ_j ∂^i ρ^j,  𝓗' - 𝓗 = ρ_i ∂_t ρ^i - ∂_t S,
/// where ρ^i = y'^i and ρ_i = p'_i. 𝓗 and 𝓗' are both evaluated at the
/// source point q, i.e. 𝓗' is the transformed Hamiltonian expressed in the
/// original coordinates.
struct GeneratingReport {
  double position = 0.0;
  double momentum = 0.0;
  double time = 0.0;

  double max_residual() const;
};

GeneratingReport generating_function_residual(const CanonicalTransform& tr, const Expression& s,
                                              const HamiltonianForm& h,
                                              const HamiltonianForm& h_new,
                                              const std::vector<VerticalPhasePoint>& points);

/// p_i v^i - 𝓗 as a Lagrangian on a bundle of fibre dimension 2n: the
/// coordinates are y1..yn followed by y_{n+i} = p_i, with velocities
/// v1..vn = y_t and v_{n+i} = p_t.
Lagrangian lagrangian_L_H(const HamiltonianForm& h);

/// Hamilton operator (y_t - ∂^i𝓗, p_t + ∂_i𝓗) at a phase point with given velocities.
std::pair<Vector, Vector> hamilton_operator(const HamiltonianForm& h, const VerticalPhasePoint& q,
                                            const Vector& y_t, const Vector& p_t);

}  // namespace jetmech
