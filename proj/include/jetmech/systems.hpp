#pragma once

// Lagrangians L = 𝓛 dt on J1Y and Hamiltonian forms H = p dy - 𝓗 dt on V*Y.

#include <string_view>

#include "jetmech/bundle.hpp"
#include "jetmech/expr.hpp"

namespace jetmech {

/// 𝓛 and its derivatives up to order two at one jet point.
///
/// Index conventions: pi_y(i, j) = ∂_j π_i = ∂²𝓛/∂v^i∂y^j, pi_v(i, j) = π_ij.
struct LagrangianJet {
  double value = 0.0;
  double dt = 0.0;  // ∂_t 𝓛
  Vector dy;        // ∂_i 𝓛
  Vector pi;        // π_i = ∂^t_i 𝓛
  Vector pi_t;      // ∂_t π_i
  Matrix pi_y;
  Matrix pi_v;
};

class Lagrangian {
 public:
  /// Throws InputError if `l` uses anything other than t, y1..yn, v1..vn.
  Lagrangian(int n, Expression l);
  static Lagrangian parse(int n, std::string_view source);

  int n() const { return n_; }
  const Expression& expression() const { return l_; }

  double value(const JetPoint& j) const;
  Vector momentum(const JetPoint& j) const;
  Matrix velocity_hessian(const JetPoint& j) const;
  LagrangianJet jet(const JetPoint& j) const;

 private:
  int n_;
  Expression l_;
};

/// 𝓗 and its derivatives up to order two at one phase point.
///
/// hess is ordered (y1..yn, p1..pn); d_t_y and d_t_p are ∂_t∂_y 𝓗 and ∂_t∂_p 𝓗.
struct HamiltonianJet {
  double value = 0.0;
  double dt = 0.0;
  Vector dy;
  Vector dp;
  Vector d_t_y;
  Vector d_t_p;
  Matrix hess;
};

class HamiltonianForm {
 public:
  /// Throws InputError if `h` uses anything other than t, y1..yn, p1..pn.
  HamiltonianForm(int n, Expression h);
  static HamiltonianForm parse(int n, std::string_view source);

  int n() const { return n_; }
  const Expression& expression() const { return h_; }

  double value(const VerticalPhasePoint& q) const;
  /// (∂_y 𝓗, ∂_p 𝓗).
  std::pair<Vector, Vector> gradient(const VerticalPhasePoint& q) const;
  HamiltonianJet jet(const VerticalPhasePoint& q) const;

 private:
  int n_;
  Expression h_;
};

/// (π_ij)^-1; throws SingularLagrangian when π_ij is not invertible.
Matrix inverse_velocity_hessian(const Matrix& pi_v);

/// 𝓗 - p_i Γ^i.
Expression frame_splitting(const HamiltonianForm& h, const ReferenceFrame& frame);

/// Throws InputError unless every free variable of `e` is in `allowed`.
void require_vars(const Expression& e, const std::vector<std::string>& allowed,
                  std::string_view what);

}  // namespace jetmech
