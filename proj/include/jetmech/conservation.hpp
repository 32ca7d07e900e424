#pragma once

// Currents of event-space vector fields u = u^t ∂_t + u^i ∂_i and the weak
// conservation law they satisfy on shell.

#include <vector>

#include "jetmech/bundle.hpp"
#include "jetmech/systems.hpp"
#include "jetmech/trajectory.hpp"

namespace jetmech {

/// 𝒯 = π_i (u^t y^i_t - u^i) - u^t 𝓛.
double symmetry_current(const Lagrangian& l, const EventVectorField& u, const JetPoint& j);

/// 𝒯_Γ = π_i (y^i_t - Γ^i) - 𝓛.
double energy_function(const Lagrangian& l, const ReferenceFrame& frame, const JetPoint& j);

/// (u^t ∂_t + u^i ∂_i + d_t u^i ∂^t_i) 𝓛.
double lie_derivative_L(const Lagrangian& l, const EventVectorField& u, const JetPoint& j);

/// 𝒯̃ = -p_i u^i + u^t 𝓗.
double hamiltonian_current(const HamiltonianForm& h, const EventVectorField& u,
                           const VerticalPhasePoint& q);

struct CurrentReport {
  std::vector<double> values;       // 𝒯 at each sample
  double max_drift = 0.0;           // max |𝒯 - 𝒯(start)|
  double lie_derivative_max = 0.0;  // max |J1u⌋d𝓛|
  double weak_identity_max = 0.0;   // max |J1u⌋d𝓛 + d𝒯/dt|
  double euler_lagrange_max = 0.0;  // on-shell certificate
};

/// A jet trajectory counts as on shell when its Euler-Lagrange residual, with
/// accelerations from sampled differences of v, stays below this.
inline constexpr double kOnShellTolerance = 1e-5;

/// Throws PreconditionError for an off-shell trajectory.
CurrentReport weak_identity_residual(const Lagrangian& l, const EventVectorField& u,
                                     const Trajectory& traj);

/// 𝒯̃ along a phase trajectory.
std::vector<double> hamiltonian_current_series(const HamiltonianForm& h, const EventVectorField& u,
                                               const Trajectory& traj);

/// max |x_k - x_0|.
double max_drift(const std::vector<double>& values);

}  // namespace jetmech
