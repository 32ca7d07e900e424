#pragma once

// Degenerate Lagrangians: association of Hamiltonian forms, the Lagrangian
// constraint space Q = L̂(J1Y) and the constrained Hamilton equations on it.

#include <algorithm>
#include <vector>

#include "jetmech/bundle.hpp"
#include "jetmech/systems.hpp"
#include "jetmech/trajectory.hpp"
#include "jetmech/variational.hpp"

namespace jetmech {

/// Residuals of L̂∘Ĥ∘L̂ = L̂ over jets and of p ∂^i𝓗 - 𝓗 = 𝓛∘Ĥ over phase points.
struct AssociationReport {
  double legendre = 0.0;
  double energy = 0.0;

  double max_residual() const { return std::max(legendre, energy); }
  bool pass(double tolerance = 1e-8) const { return max_residual() <= tolerance; }
};

inline constexpr double kAssociationTolerance = 1e-8;

AssociationReport association_check(const Lagrangian& l, const HamiltonianForm& h,
                                    const std::vector<JetPoint>& jets,
                                    const std::vector<VerticalPhasePoint>& phases);

/// c_i(t, y, p) = p_i - π_i(t, y, ∂^j𝓗(t, y, p)); Q is its zero set.
class ConstraintSpace {
 public:
  ConstraintSpace(Lagrangian l, HamiltonianForm h);

  int n() const { return l_.n(); }
  const Lagrangian& lagrangian() const { return l_; }
  const HamiltonianForm& hamiltonian() const { return h_; }

  Vector residual(const VerticalPhasePoint& q) const;

  struct Gradient {
    Vector dt;  // ∂_t c
    Matrix dy;  // ∂c_i/∂y^k
    Matrix dp;  // ∂c_i/∂p_k
  };
  Gradient gradient(const VerticalPhasePoint& q) const;

 private:
  Lagrangian l_;
  HamiltonianForm h_;
};

Vector constraint_residual(const Lagrangian& l, const HamiltonianForm& h,
                           const VerticalPhasePoint& q);

/// γ_H applied to each constraint function.
Vector tangency_residual(const Lagrangian& l, const HamiltonianForm& h,
                         const VerticalPhasePoint& q);

struct ConstrainedReport {
  double max_residual = 0.0;
  /// Dimension of the admissible vertical directions at the worst sample.
  int directions = 0;
};

inline constexpr double kOnConstraintTolerance = 1e-6;

/// max over samples and over a basis (δy, δp) of the kernel of ∇c of
///   |δp·(ẏ - ∂_p𝓗) - δy·(ṗ + ∂_y𝓗)|
/// with ẏ, ṗ from sampled differences. Throws PreconditionError when a sample
/// is further than 1e-6 from Q.
ConstrainedReport constrained_hamilton_residual(const HamiltonianForm& h,
                                                const ConstraintSpace& c, const Trajectory& traj);

/// Same with no constraints: every vertical direction is admissible.
ConstrainedReport constrained_hamilton_residual(const HamiltonianForm& h, const Trajectory& traj);

/// Pull-back of the Hamilton operator by the prolonged Legendre map: p = π,
/// y_t = ŷ_t, p_t = d̂_t π. Blocks are the coefficients of dy_t and dy, in
/// the layout of cartan_residual.
CartanResidual pulled_back_hamilton_operator(const Lagrangian& l, const HamiltonianForm& h,
                                             const RepeatedJetPoint& r);

}  // namespace jetmech
