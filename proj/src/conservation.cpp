#include "jetmech/conservation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"
#include "jetmech/variational.hpp"

namespace jetmech {

double symmetry_current(const Lagrangian& l, const EventVectorField& u, const JetPoint& j) {
  if (u.dimension() != l.n()) throw InputError("vector field and Lagrangian dimensions differ");
  const double ut = u.time_component();
  const Vector pi = l.momentum(j);
  return pi.dot(ut * j.v - u.fibre().values(j.t, j.y)) - ut * l.value(j);
}

double energy_function(const Lagrangian& l, const ReferenceFrame& frame, const JetPoint& j) {
  if (frame.dimension() != l.n()) throw InputError("frame and Lagrangian dimensions differ");
  return l.momentum(j).dot(j.v - frame.at(j.t, j.y)) - l.value(j);
}

double lie_derivative_L(const Lagrangian& l, const EventVectorField& u, const JetPoint& j) {
  return prolonged_derivative(l, u, j);
}

double hamiltonian_current(const HamiltonianForm& h, const EventVectorField& u,
                           const VerticalPhasePoint& q) {
  if (u.dimension() != h.n()) throw InputError("vector field and Hamiltonian dimensions differ");
  return -q.p.dot(u.fibre().values(q.t, q.y)) + u.time_component() * h.value(q);
}

double max_drift(const std::vector<double>& values) {
  double worst = 0.0;
  for (double x : values) worst = std::max(worst, std::abs(x - values.front()));
  return worst;
}

CurrentReport weak_identity_residual(const Lagrangian& l, const EventVectorField& u,
                                     const Trajectory& traj) {
  if (traj.kind() != TrajectoryKind::kJet) {
    throw InputError("weak identity needs a jet trajectory");
  }
  const int n = l.n();
  const auto rates = sampled_derivative(traj.states(), traj.dt());

  CurrentReport out;
  std::vector<double> lie;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const JetPoint j = traj.jet(k);
    const Vector a = rates[k].tail(n);
    const Vector el = euler_lagrange_residual(l, SecondJetPoint{j.t, j.y, j.v, a});
    out.euler_lagrange_max = std::max(out.euler_lagrange_max, el.cwiseAbs().maxCoeff());
    out.values.push_back(symmetry_current(l, u, j));
    lie.push_back(lie_derivative_L(l, u, j));
  }
  if (!(out.euler_lagrange_max <= kOnShellTolerance)) {
    throw PreconditionError(fmt::format(
        "trajectory is off shell (Euler-Lagrange residual {:.3g})", out.euler_lagrange_max));
  }
  const auto current_rate = sampled_derivative(out.values, traj.dt());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.lie_derivative_max = std::max(out.lie_derivative_max, std::abs(lie[k]));
    out.weak_identity_max = std::max(out.weak_identity_max, std::abs(lie[k] + current_rate[k]));
  }
  out.max_drift = max_drift(out.values);
  return out;
}

std::vector<double> hamiltonian_current_series(const HamiltonianForm& h, const EventVectorField& u,
                                               const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) out.push_back(hamiltonian_current(h, u, traj.phase(k)));
  return out;
}

}  // namespace jetmech
