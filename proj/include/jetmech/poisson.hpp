#pragma once

// Poisson brackets on T*Y, V*Y and J1Y, Hamiltonian vector fields and the
// Hamilton evolution derivative.
//
// Orientation: {f,g}_V = ∂^i f ∂_i g - ∂^i g ∂_i f, so {p1, y1}_V = 1 and
// {y1, p1}_V = -1. The homogeneous bracket adds ∂^p f ∂_t g - ∂^p g ∂_t f with
// p = p0, so {p0, t} = 1.

#include <functional>

#include "jetmech/bundle.hpp"
#include "jetmech/expr.hpp"
#include "jetmech/systems.hpp"

namespace jetmech {

double bracket_homogeneous(const Expression& f, const Expression& g,
                           const HomogeneousPhasePoint& q);

/// Throws InputError if f or g depends on p0.
double bracket_vertical(const Expression& f, const Expression& g, const VerticalPhasePoint& q);

/// Throws SingularLagrangian when π_ij is not invertible at j.
double bracket_lagrangian(const Expression& f, const Expression& g, const Lagrangian& l,
                          const JetPoint& j);

/// ϑ_f = ∂^i f ∂_i - ∂_i f ∂^i.
VerticalTangent hamiltonian_vector_field(const Expression& f, const VerticalPhasePoint& q);

/// Vertical tangent to J1Y: components along ∂_i and ∂^t_i.
struct JetTangent {
  Vector dy;
  Vector dv;
};

/// ϑ_f on J1Y, fixed by {g,f}_L = ϑ_f⌋dg.
JetTangent lagrangian_hamiltonian_vector_field(const Expression& f, const Lagrangian& l,
                                               const JetPoint& j);

/// (∂_t + ∂^i𝓗 ∂_i - ∂_i𝓗 ∂^i) f.
double evolution_derivative(const HamiltonianForm& h, const Expression& f,
                            const VerticalPhasePoint& q);

/// ∂_t f + (Γ^i ∂_i - ∂_i Γ^j p_j ∂^i) f + {𝓗 - p Γ, f}_V.
double evolution_derivative_split(const HamiltonianForm& h, const ReferenceFrame& frame,
                                  const Expression& f, const VerticalPhasePoint& q);

// Brackets of functions known only numerically, such as an inner bracket in
// the Jacobi identity. Their partials come from central differences with step
// h * max(1, |x|).

inline constexpr double kNestedBracketStep = 1e-5;

using PhaseFunction = std::function<double(const VerticalPhasePoint&)>;
using HomogeneousFunction = std::function<double(const HomogeneousPhasePoint&)>;
using JetFunction = std::function<double(const JetPoint&)>;

double bracket_vertical(const Expression& f, const PhaseFunction& g, const VerticalPhasePoint& q,
                        double h = kNestedBracketStep);
double bracket_homogeneous(const Expression& f, const HomogeneousFunction& g,
                           const HomogeneousPhasePoint& q, double h = kNestedBracketStep);
double bracket_lagrangian(const Expression& f, const JetFunction& g, const Lagrangian& l,
                          const JetPoint& j, double h = kNestedBracketStep);

/// {f,{g,k}} + {g,{k,f}} + {k,{f,g}}.
double jacobi_vertical(const Expression& f, const Expression& g, const Expression& k,
                       const VerticalPhasePoint& q, double h = kNestedBracketStep);
double jacobi_homogeneous(const Expression& f, const Expression& g, const Expression& k,
                          const HomogeneousPhasePoint& q, double h = kNestedBracketStep);
double jacobi_lagrangian(const Expression& f, const Expression& g, const Expression& k,
                         const Lagrangian& l, const JetPoint& j, double h = kNestedBracketStep);

}  // namespace jetmech
