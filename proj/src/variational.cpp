#include "jetmech/variational.hpp"

#include <fmt/format.h>

#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

namespace {

void require_dimension(const Lagrangian& l, Eigen::Index n, const char* what) {
  if (n != l.n()) {
    throw InputError(fmt::format("{} has dimension {}, Lagrangian has {}", what, n, l.n()));
  }
}

}  // namespace

VerticalPhasePoint legendre_map(const Lagrangian& l, const JetPoint& j) {
  require_dimension(l, j.y.size(), "jet point");
  return VerticalPhasePoint{j.t, j.y, l.momentum(j)};
}

JetPoint legendre_invert(const Lagrangian& l, const VerticalPhasePoint& q,
                         const std::optional<Vector>& guess) {
  check_point(q);
  require_dimension(l, q.y.size(), "phase point");
  JetPoint j{q.t, q.y, guess.value_or(q.p)};
  require_dimension(l, j.v.size(), "initial guess");
  const double tol = kLegendreTolerance * std::max(1.0, q.p.cwiseAbs().maxCoeff());
  for (int it = 0; it <= kLegendreMaxIterations; ++it) {
    const LagrangianJet d = l.jet(j);
    const Vector r = d.pi - q.p;
    if (r.cwiseAbs().maxCoeff() <= tol) return j;
    if (it == kLegendreMaxIterations) break;
    j.v -= inverse_velocity_hessian(d.pi_v) * r;
    if (!j.v.allFinite()) break;
  }
  throw NoConvergence(fmt::format("Legendre inversion did not converge in {} iterations",
                                  kLegendreMaxIterations));
}

Vector total_derivative_of_momentum(const LagrangianJet& d, const Vector& vel, const Vector& acc) {
  return d.pi_t + d.pi_y * vel + d.pi_v * acc;
}

Vector euler_lagrange_residual(const Lagrangian& l, const SecondJetPoint& s) {
  require_dimension(l, s.a.size(), "acceleration");
  const LagrangianJet d = l.jet(JetPoint{s.t, s.y, s.v});
  return d.dy - total_derivative_of_momentum(d, s.v, s.a);
}

Vector dynamic_rhs(const Lagrangian& l, const JetPoint& j) {
  const LagrangianJet d = l.jet(j);
  const Vector force = d.dy - d.pi_t - d.pi_y * j.v;
  return inverse_velocity_hessian(d.pi_v) * force;
}

Trajectory integrate_lagrange(const Lagrangian& l, const JetPoint& j0, double t_end, double dt) {
  check_point(j0);
  require_dimension(l, j0.y.size(), "initial state");
  const int n = l.n();
  const StepPlan plan = plan_steps(j0.t, t_end, dt);
  auto rhs = [&](double t, const Vector& x) {
    const Vector v = x.tail(n);
    Vector dx(2 * n);
    dx << v, dynamic_rhs(l, JetPoint{t, x.head(n), v});
    return dx;
  };
  Vector x0(2 * n);
  x0 << j0.y, j0.v;
  return Trajectory(TrajectoryKind::kJet, n, j0.t, plan.h, integrate_rk4(rhs, j0.t, x0, plan));
}

CartanResidual cartan_residual(const Lagrangian& l, const RepeatedJetPoint& r) {
  require_dimension(l, r.vhat.size(), "ŷ_t");
  require_dimension(l, r.a.size(), "y_tt");
  const LagrangianJet d = l.jet(JetPoint{r.t, r.y, r.v});
  const Vector slip = r.vhat - r.v;
  return CartanResidual{
      d.pi_v * slip,
      d.dy - total_derivative_of_momentum(d, r.vhat, r.a) + d.pi_y.transpose() * slip};
}

PoincareCartan poincare_cartan(const Lagrangian& l, const JetPoint& j) {
  const LagrangianJet d = l.jet(j);
  return PoincareCartan{d.pi, d.pi.dot(j.v) - d.value};
}

double prolonged_derivative(const Lagrangian& l, const EventVectorField& u, const JetPoint& j) {
  require_dimension(l, u.dimension(), "vector field");
  const LagrangianJet d = l.jet(j);
  const Vector uy = u.fibre().values(j.t, j.y);
  return u.time_component() * d.dt + uy.dot(d.dy) + u.total_derivative(j).dot(d.pi);
}

FirstVariation first_variation(const Lagrangian& l, const EventVectorField& u,
                               const SecondJetPoint& s) {
  require_dimension(l, u.dimension(), "vector field");
  const JetPoint j{s.t, s.y, s.v};
  const LagrangianJet d = l.jet(j);
  const double ut = u.time_component();
  const Vector uy = u.fibre().values(s.t, s.y);
  const Vector du = u.total_derivative(j);
  const Vector dpi = total_derivative_of_momentum(d, s.v, s.a);
  const Vector euler = d.dy - dpi;

  FirstVariation out;
  out.lhs = ut * d.dt + uy.dot(d.dy) + du.dot(d.pi);
  out.el_term = (uy - ut * s.v).dot(euler);
  out.boundary_term = dpi.dot(uy) + d.pi.dot(du) - ut * (dpi.dot(s.v) - d.dt - s.v.dot(d.dy));
  return out;
}

}  // namespace jetmech
