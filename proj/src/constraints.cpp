#include "jetmech/constraints.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"
#include "jetmech/hamiltonian.hpp"

namespace jetmech {

namespace {

void require_pair(const Lagrangian& l, const HamiltonianForm& h) {
  if (l.n() != h.n()) {
    throw InputError(
        fmt::format("Lagrangian has dimension {}, Hamiltonian has {}", l.n(), h.n()));
  }
}

}  // namespace

AssociationReport association_check(const Lagrangian& l, const HamiltonianForm& h,
                                    const std::vector<JetPoint>& jets,
                                    const std::vector<VerticalPhasePoint>& phases) {
  require_pair(l, h);
  AssociationReport out;
  for (const auto& j : jets) {
    const VerticalPhasePoint q = legendre_map(l, j);
    const VerticalPhasePoint back = legendre_map(l, hamiltonian_map(h, q));
    out.legendre = std::max(out.legendre, (back.p - q.p).cwiseAbs().maxCoeff());
  }
  for (const auto& q : phases) {
    const JetPoint j = hamiltonian_map(h, q);
    const double lhs = q.p.dot(j.v) - h.value(q);
    out.energy = std::max(out.energy, std::abs(lhs - l.value(j)));
  }
  return out;
}

ConstraintSpace::ConstraintSpace(Lagrangian l, HamiltonianForm h)
    : l_(std::move(l)), h_(std::move(h)) {
  require_pair(l_, h_);
}

Vector ConstraintSpace::residual(const VerticalPhasePoint& q) const {
  return q.p - l_.momentum(hamiltonian_map(h_, q));
}

ConstraintSpace::Gradient ConstraintSpace::gradient(const VerticalPhasePoint& q) const {
  const int n = this->n();
  const HamiltonianJet dh = h_.jet(q);
  const LagrangianJet dl = l_.jet(JetPoint{q.t, q.y, dh.dp});
  // v = ∂_p𝓗, so ∂v/∂y = 𝓗_py, ∂v/∂p = 𝓗_pp, ∂v/∂t = 𝓗_pt.
  const Matrix h_py = dh.hess.block(n, 0, n, n);
  const Matrix h_pp = dh.hess.block(n, n, n, n);
  return Gradient{-(dl.pi_t + dl.pi_v * dh.d_t_p), -(dl.pi_y + dl.pi_v * h_py),
                  Matrix::Identity(n, n) - dl.pi_v * h_pp};
}

Vector constraint_residual(const Lagrangian& l, const HamiltonianForm& h,
                           const VerticalPhasePoint& q) {
  return ConstraintSpace(l, h).residual(q);
}

Vector tangency_residual(const Lagrangian& l, const HamiltonianForm& h,
                         const VerticalPhasePoint& q) {
  const auto g = ConstraintSpace(l, h).gradient(q);
  const auto [hy, hp] = h.gradient(q);
  return g.dt + g.dy * hp - g.dp * hy;
}

namespace {

ConstrainedReport residual_over(const HamiltonianForm& h, const ConstraintSpace* c,
                                const Trajectory& traj) {
  if (traj.kind() != TrajectoryKind::kPhase) {
    throw InputError("constrained Hamilton residual needs a phase-space trajectory");
  }
  if (traj.n() != h.n()) throw InputError("trajectory and Hamiltonian dimensions differ");
  const int n = h.n();
  const auto rates = sampled_derivative(traj.states(), traj.dt());
  ConstrainedReport out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const VerticalPhasePoint q = traj.phase(k);
    Matrix basis = Matrix::Identity(2 * n, 2 * n);
    if (c != nullptr) {
      const double off = c->residual(q).cwiseAbs().maxCoeff();
      if (!(off <= kOnConstraintTolerance)) {
        throw PreconditionError(fmt::format(
            "sample {} at t = {} is off the constraint space (|c| = {:.3g})", k, q.t, off));
      }
      const auto g = c->gradient(q);
      Matrix grad(n, 2 * n);
      grad << g.dy, g.dp;
      basis = null_space(grad);
    }
    const auto [hy, hp] = h.gradient(q);
    const Vector y_rate = rates[k].head(n);
    const Vector p_rate = rates[k].tail(n);
    for (Eigen::Index col = 0; col < basis.cols(); ++col) {
      const Vector dy = basis.col(col).head(n);
      const Vector dp = basis.col(col).tail(n);
      const double r = std::abs(dp.dot(y_rate - hp) - dy.dot(p_rate + hy));
      out.max_residual = std::max(out.max_residual, r);
    }
    out.directions = std::max(out.directions, static_cast<int>(basis.cols()));
  }
  return out;
}

}  // namespace

ConstrainedReport constrained_hamilton_residual(const HamiltonianForm& h,
                                                const ConstraintSpace& c, const Trajectory& traj) {
  return residual_over(h, &c, traj);
}

ConstrainedReport constrained_hamilton_residual(const HamiltonianForm& h, const Trajectory& traj) {
  return residual_over(h, nullptr, traj);
}

CartanResidual pulled_back_hamilton_operator(const Lagrangian& l, const HamiltonianForm& h,
                                             const RepeatedJetPoint& r) {
  require_pair(l, h);
  const LagrangianJet d = l.jet(JetPoint{r.t, r.y, r.v});
  const VerticalPhasePoint q{r.t, r.y, d.pi};
  const Vector p_t = total_derivative_of_momentum(d, r.vhat, r.a);
  const auto [y_part, p_part] = hamilton_operator(h, q, r.vhat, p_t);
  // dp_i = ∂_j π_i dy^j + π_ij dy_t^j modulo dt.
  return CartanResidual{d.pi_v * y_part, d.pi_y.transpose() * y_part - p_part};
}

}  // namespace jetmech
