#pragma once

// Legendre map, Euler-Lagrange and Cartan operators, the dynamic equation of
// a regular Lagrangian, the Poincare-Cartan form and the first variational
// formula.

#include <optional>

#include "jetmech/bundle.hpp"
#include "jetmech/systems.hpp"
#include "jetmech/trajectory.hpp"

namespace jetmech {

/// p = π(t, y, v).
VerticalPhasePoint legendre_map(const Lagrangian& l, const JetPoint& j);

inline constexpr int kLegendreMaxIterations = 50;
inline constexpr double kLegendreTolerance = 1e-12;

/// Newton iteration on π(t, y, v) = p starting from `guess` (default v = p).
///
/// Stops once max|π - p| <= 1e-12 * max(1, max|p|). Throws SingularLagrangian
/// if π_ij is singular along the way and NoConvergence after 50 iterations.
JetPoint legendre_invert(const Lagrangian& l, const VerticalPhasePoint& q,
                         const std::optional<Vector>& guess = std::nullopt);

/// d_t π_i = ∂_t π_i + vel^j ∂_j π_i + acc^j π_ij.
Vector total_derivative_of_momentum(const LagrangianJet& d, const Vector& vel, const Vector& acc);

/// ∂_i 𝓛 - d_t π_i.
Vector euler_lagrange_residual(const Lagrangian& l, const SecondJetPoint& s);

/// The acceleration of the unique holonomic Lagrangian connection.
/// Throws SingularLagrangian when π_ij is not invertible.
Vector dynamic_rhs(const Lagrangian& l, const JetPoint& j);

/// RK4 on (y' = v, v' = dynamic_rhs); a jet trajectory.
Trajectory integrate_lagrange(const Lagrangian& l, const JetPoint& j0, double t_end, double dt);

/// Both blocks of the Cartan equations at a point of the repeated jet manifold:
///   first_i  = π_ij (ŷ^j - y^j_t)
///   second_i = ∂_i 𝓛 - d̂_t π_i + (ŷ^j - y^j_t) ∂_i π_j
/// with d̂_t = ∂_t + ŷ^j ∂_j + y^j_tt ∂^t_j.
struct CartanResidual {
  Vector first;
  Vector second;
};

CartanResidual cartan_residual(const Lagrangian& l, const RepeatedJetPoint& r);

/// H_L = a_i dy^i - b dt with a = π and b = π v - 𝓛.
struct PoincareCartan {
  Vector a;
  double b = 0.0;
};

PoincareCartan poincare_cartan(const Lagrangian& l, const JetPoint& j);

/// The two sides of J1u⌋d𝓛 = (u^i - u^t y^i_t) 𝓔_i + d_t(u⌋H_L).
struct FirstVariation {
  double lhs = 0.0;
  double el_term = 0.0;
  double boundary_term = 0.0;

  double residual() const { return lhs - el_term - boundary_term; }
};

/// (u^t ∂_t + u^i ∂_i + d_t u^i ∂^t_i) 𝓛.
double prolonged_derivative(const Lagrangian& l, const EventVectorField& u, const JetPoint& j);

FirstVariation first_variation(const Lagrangian& l, const EventVectorField& u,
                               const SecondJetPoint& s);

}  // namespace jetmech
