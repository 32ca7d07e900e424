#include "jetmech/hamiltonian.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

VerticalTangent hamilton_rhs(const HamiltonianForm& h, const VerticalPhasePoint& q) {
  auto [hy, hp] = h.gradient(q);
  return VerticalTangent{1, std::move(hp), -hy};
}

Trajectory integrate_hamilton(const HamiltonianForm& h, const VerticalPhasePoint& q0,
                              double t_end, double dt) {
  check_point(q0);
  const int n = h.n();
  if (q0.y.size() != n) {
    throw InputError(fmt::format("initial state has dimension {}, Hamiltonian has {}",
                                 q0.y.size(), n));
  }
  const StepPlan plan = plan_steps(q0.t, t_end, dt);
  auto rhs = [&](double t, const Vector& x) {
    const auto [hy, hp] = h.gradient(VerticalPhasePoint{t, x.head(n), x.tail(n)});
    Vector dx(2 * n);
    dx << hp, -hy;
    return dx;
  };
  Vector x0(2 * n);
  x0 << q0.y, q0.p;
  return Trajectory(TrajectoryKind::kPhase, n, q0.t, plan.h, integrate_rk4(rhs, q0.t, x0, plan));
}

JetPoint hamiltonian_map(const HamiltonianForm& h, const VerticalPhasePoint& q) {
  return JetPoint{q.t, q.y, h.gradient(q).second};
}

CanonicalTransform::CanonicalTransform(std::vector<Expression> y_map,
                                       std::vector<Expression> p_map)
    : y_map_(std::move(y_map)), p_map_(std::move(p_map)) {
  if (y_map_.size() != p_map_.size()) {
    throw InputError(fmt::format("transform has {} position and {} momentum components",
                                 y_map_.size(), p_map_.size()));
  }
  const auto allowed = BundleSpec(n()).phase_names();
  for (std::size_t i = 0; i < y_map_.size(); ++i) {
    require_vars(y_map_[i], allowed, fmt::format("y'{}", i + 1));
    require_vars(p_map_[i], allowed, fmt::format("p'{}", i + 1));
  }
}

CanonicalTransform CanonicalTransform::parse(const std::vector<std::string>& y_map,
                                             const std::vector<std::string>& p_map) {
  return CanonicalTransform(parse_all(y_map), parse_all(p_map));
}

CanonicalTransform CanonicalTransform::identity(int n) {
  std::vector<Expression> y;
  std::vector<Expression> p;
  for (int i = 0; i < n; ++i) {
    y.push_back(Expression::variable(y_name(i)));
    p.push_back(Expression::variable(p_name(i)));
  }
  return CanonicalTransform(std::move(y), std::move(p));
}

VerticalPhasePoint CanonicalTransform::apply(const VerticalPhasePoint& q) const {
  const Bindings b = to_bindings(q);
  VerticalPhasePoint out{q.t, Vector(n()), Vector(n())};
  for (int i = 0; i < n(); ++i) {
    out.y[i] = y_map_[static_cast<std::size_t>(i)].evaluate(b);
    out.p[i] = p_map_[static_cast<std::size_t>(i)].evaluate(b);
  }
  return out;
}

PhaseJacobian CanonicalTransform::jacobian(const VerticalPhasePoint& q) const {
  const BundleSpec spec(n());
  auto names = spec.y_names();
  for (auto& p : spec.p_names()) names.push_back(p);
  const Bindings b = to_bindings(q);
  Matrix jy(n(), 2 * n());
  Matrix jp(n(), 2 * n());
  for (int i = 0; i < n(); ++i) {
    jy.row(i) = y_map_[static_cast<std::size_t>(i)].gradient(names, b).transpose();
    jp.row(i) = p_map_[static_cast<std::size_t>(i)].gradient(names, b).transpose();
  }
  return PhaseJacobian{jy.leftCols(n()), jy.rightCols(n()), jp.leftCols(n()), jp.rightCols(n())};
}

double CanonicalReport::max_residual() const { return std::max({momentum, position, mixed}); }

CanonicalReport canonical_residuals(const PhaseJacobian& d) {
  const auto n = d.dy_dy.rows();
  const Matrix r1 = d.dp_dp.transpose() * d.dy_dp - d.dy_dp.transpose() * d.dp_dp;
  const Matrix r2 = d.dp_dy.transpose() * d.dy_dy - d.dy_dy.transpose() * d.dp_dy;
  const Matrix r3 =
      d.dp_dp.transpose() * d.dy_dy - d.dp_dy.transpose() * d.dy_dp - Matrix::Identity(n, n);
  return CanonicalReport{r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff(),
                         r3.cwiseAbs().maxCoeff()};
}

CanonicalReport canonical_check(const CanonicalTransform& tr,
                                const std::vector<VerticalPhasePoint>& points) {
  CanonicalReport worst;
  for (const auto& q : points) {
    const auto r = canonical_residuals(tr.jacobian(q));
    worst.momentum = std::max(worst.momentum, r.momentum);
    worst.position = std::max(worst.position, r.position);
    worst.mixed = std::max(worst.mixed, r.mixed);
  }
  return worst;
}

double GeneratingReport::max_residual() const { return std::max({position, momentum, time}); }

GeneratingReport generating_function_residual(const CanonicalTransform& tr, const Expression& s,
                                              const HamiltonianForm& h,
                                              const HamiltonianForm& h_new,
                                              const std::vector<VerticalPhasePoint>& points) {
  const int n = tr.n();
  const auto names = BundleSpec(n).phase_names();  // t, y, p
  require_vars(s, names, "generating function");
  GeneratingReport worst;
  for (const auto& q : points) {
    const Bindings b = to_bindings(q);
    const VerticalPhasePoint image = tr.apply(q);
    // Row j: gradient of ρ^j in (t, y, p).
    Matrix drho(n, 2 * n + 1);
    for (int j = 0; j < n; ++j) {
      drho.row(j) = tr.y_map()[static_cast<std::size_t>(j)].gradient(names, b).transpose();
    }
    const Vector ds = s.gradient(names, b);
    const Vector pulled = drho.transpose() * image.p;  // ρ_j ∂ρ^j
    const Vector r_pos = ds.segment(1, n) - (pulled.segment(1, n) - q.p);
    const Vector r_mom = ds.segment(n + 1, n) - pulled.segment(n + 1, n);
    const double r_time = (h_new.value(q) - h.value(q)) - (pulled[0] - ds[0]);
    worst.position = std::max(worst.position, r_pos.cwiseAbs().maxCoeff());
    worst.momentum = std::max(worst.momentum, r_mom.cwiseAbs().maxCoeff());
    worst.time = std::max(worst.time, std::abs(r_time));
  }
  return worst;
}

Lagrangian lagrangian_L_H(const HamiltonianForm& h) {
  const int n = h.n();
  std::map<std::string, std::string, std::less<>> rename;
  for (int i = 0; i < n; ++i) rename[p_name(i)] = y_name(n + i);
  Expression l = -h.expression().rename(rename);
  for (int i = 0; i < n; ++i) {
    l = l + Expression::variable(y_name(n + i)) * Expression::variable(v_name(i));
  }
  return Lagrangian(2 * n, l);
}

std::pair<Vector, Vector> hamilton_operator(const HamiltonianForm& h, const VerticalPhasePoint& q,
                                            const Vector& y_t, const Vector& p_t) {
  const auto [hy, hp] = h.gradient(q);
  return {y_t - hp, p_t + hy};
}

}  // namespace jetmech
