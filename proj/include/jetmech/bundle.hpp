#pragma once

// Coordinates on the event bundle Y -> R and on its jet and phase bundles,
// reference frames, and the holonomic transformations they induce.
//
// Coordinate names are fixed: t for time, y1..yn for the fibre, p1..pn for
// momenta, v1..vn for velocities.

#include <string>
#include <vector>

#include "jetmech/expr.hpp"
#include "jetmech/linalg.hpp"

namespace jetmech {

std::string y_name(int i);  // 0-based index -> "y1", ...
std::string p_name(int i);
std::string v_name(int i);
inline const std::string kTimeName = "t";
/// Momentum conjugate to time on the homogeneous phase space T*Y.
inline const std::string kTimeMomentumName = "p0";

/// Fibre dimension of Y -> R together with the derived coordinate names.
class BundleSpec {
 public:
  explicit BundleSpec(int n);

  int n() const { return n_; }
  std::vector<std::string> y_names() const;
  std::vector<std::string> p_names() const;
  std::vector<std::string> v_names() const;
  std::vector<std::string> event_names() const;   // t, y
  std::vector<std::string> phase_names() const;   // t, y, p
  std::vector<std::string> jet_names() const;     // t, y, v
  std::vector<std::string> homogeneous_names() const;  // t, y, p, p0

 private:
  int n_;
};

struct EventPoint {
  double t = 0.0;
  Vector y;
};

/// Point of J1Y.
struct JetPoint {
  double t = 0.0;
  Vector y;
  Vector v;
};

/// Point of J2Y.
struct SecondJetPoint {
  double t = 0.0;
  Vector y;
  Vector v;
  Vector a;
};

/// Point of the repeated jet manifold J1J1Y: (t, y, y_t, ŷ_t, y_tt).
struct RepeatedJetPoint {
  double t = 0.0;
  Vector y;
  Vector v;
  Vector vhat;
  Vector a;
};

/// Point of the Legendre bundle V*Y.
struct VerticalPhasePoint {
  double t = 0.0;
  Vector y;
  Vector p;
};

/// Point of the homogeneous Legendre bundle T*Y.
struct HomogeneousPhasePoint {
  double t = 0.0;
  Vector y;
  Vector p;
  double p0 = 0.0;
};

/// Components along ∂_t, ∂_{y^i}, ∂^i = ∂/∂p_i.
struct VerticalTangent {
  int dt = 0;
  Vector dy;
  Vector dp;
};

Bindings to_bindings(const EventPoint& e);
Bindings to_bindings(const JetPoint& j);
Bindings to_bindings(const VerticalPhasePoint& q);
Bindings to_bindings(const HomogeneousPhasePoint& q);
/// Bindings of the underlying J1Y point.
Bindings to_bindings(const SecondJetPoint& s);

/// Throws InputError unless every entry is finite and sizes agree.
void check_point(const JetPoint& j);
void check_point(const VerticalPhasePoint& q);

/// n scalar functions of (t, y1..yn).
class EventField {
 public:
  EventField() = default;
  /// Throws InputError when a component uses any other variable.
  explicit EventField(std::vector<Expression> components);
  static EventField parse(const std::vector<std::string>& sources);
  static EventField zero(int n);

  int dimension() const { return static_cast<int>(components_.size()); }
  const std::vector<Expression>& components() const { return components_; }

  Vector values(double t, const Vector& y) const;
  /// ∂u^i/∂y^j.
  Matrix jacobian(double t, const Vector& y) const;
  /// ∂u^i/∂t.
  Vector time_derivative(double t, const Vector& y) const;

 private:
  std::vector<Expression> components_;
};

/// A connection Γ on Y -> R, i.e. a reference frame.
class ReferenceFrame {
 public:
  explicit ReferenceFrame(EventField gamma) : gamma_(std::move(gamma)) {}
  static ReferenceFrame parse(const std::vector<std::string>& sources);
  static ReferenceFrame at_rest(int n) { return ReferenceFrame(EventField::zero(n)); }

  int dimension() const { return gamma_.dimension(); }
  const EventField& gamma() const { return gamma_; }
  Vector at(double t, const Vector& y) const { return gamma_.values(t, y); }

 private:
  EventField gamma_;
};

/// u = u^t ∂_t + u^i(t,y) ∂_i with u^t ∈ {0, 1}.
class EventVectorField {
 public:
  EventVectorField(int u_t, EventField u);

  int time_component() const { return u_t_; }
  const EventField& fibre() const { return u_; }
  int dimension() const { return u_.dimension(); }

  /// u^i + d_t u^i evaluated at a jet: the prolongation component ∂_t u^i + v^j ∂_j u^i.
  Vector total_derivative(const JetPoint& j) const;

 private:
  int u_t_;
  EventField u_;
};

/// A vertical automorphism y' = forward(t, y) of Y with its explicit inverse y = inverse(t, y').
class FibredAutomorphism {
 public:
  FibredAutomorphism(EventField forward, EventField inverse);

  int dimension() const { return forward_.dimension(); }
  const EventField& forward() const { return forward_; }
  const EventField& inverse() const { return inverse_; }

  /// max |inverse(t, forward(t, y)) - y| over the given points.
  double roundtrip_error(const std::vector<EventPoint>& points) const;

 private:
  EventField forward_;
  EventField inverse_;
};

/// Partial derivatives of a phase-space map (y, p) -> (y', p') at one point.
struct PhaseJacobian {
  Matrix dy_dy;  // ∂y'^i/∂y^j
  Matrix dy_dp;  // ∂y'^i/∂p_j
  Matrix dp_dy;  // ∂p'_i/∂y^j
  Matrix dp_dp;  // ∂p'_i/∂p_j
};

/// Covariant differential D_Γ: y_t - Γ(t, y).
Vector relative_velocity(const ReferenceFrame& frame, const JetPoint& j);

/// Fibre coordinate of `e` in the Γ-adapted trivialization anchored at t_ref.
///
/// Flows `e` along the integral curve of ∂_t + Γ^i ∂_i to time t_ref with RK4.
/// The step is `dt` shortened so that an integer number of steps lands on t_ref.
/// Throws IntegrationError on a non-finite state.
Vector adapted_coordinates(const ReferenceFrame& frame, double t_ref, const EventPoint& e,
                           double dt);

/// Canonical lift ũ = u^t ∂_t + u^i ∂_i - ∂_i u^j p_j ∂^i of a field on Y onto V*Y.
class PhaseLift {
 public:
  explicit PhaseLift(EventVectorField u) : u_(std::move(u)) {}
  VerticalTangent at(const VerticalPhasePoint& q) const;
  const EventVectorField& field() const { return u_; }

 private:
  EventVectorField u_;
};

PhaseLift lift_to_phase(const EventVectorField& u);

/// (y, p) -> (y', p'_i = ∂y^j/∂y'^i p_j). Throws SingularMatrix if |det ∂y/∂y'| < 1e-12.
VerticalPhasePoint holonomic_phase_transform(const FibredAutomorphism& a,
                                             const VerticalPhasePoint& q);

/// Jacobian of holonomic_phase_transform at q, exact to rounding.
PhaseJacobian holonomic_phase_jacobian(const FibredAutomorphism& a, const VerticalPhasePoint& q);

}  // namespace jetmech
