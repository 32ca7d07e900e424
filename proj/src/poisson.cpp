#include "jetmech/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

namespace {

struct PhaseGradient {
  double t = 0.0;
  Vector y;
  Vector p;
  double p0 = 0.0;
};

PhaseGradient gradient_at(const Expression& f, const HomogeneousPhasePoint& q) {
  const BundleSpec spec(static_cast<int>(q.y.size()));
  const auto names = spec.homogeneous_names();
  const Vector g = f.gradient(names, to_bindings(q));
  const auto n = q.y.size();
  return PhaseGradient{g[0], g.segment(1, n), g.segment(n + 1, n), g[2 * n + 1]};
}

PhaseGradient gradient_at(const Expression& f, const VerticalPhasePoint& q) {
  const BundleSpec spec(static_cast<int>(q.y.size()));
  const auto names = spec.phase_names();
  const Vector g = f.gradient(names, to_bindings(q));
  const auto n = q.y.size();
  return PhaseGradient{g[0], g.segment(1, n), g.segment(n + 1, n), 0.0};
}

double central(const std::function<double(double)>& along, double x0, double rel_step) {
  const double h = rel_step * std::max(1.0, std::abs(x0));
  return (along(x0 + h) - along(x0 - h)) / (2.0 * h);
}

template <class Point, class Fn>
Vector numeric_partials(const Fn& f, const Point& q, Vector Point::*member, double rel_step) {
  const Vector& base = q.*member;
  Vector out(base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    out[i] = central(
        [&](double x) {
          Point moved = q;
          (moved.*member)[i] = x;
          return f(moved);
        },
        base[i], rel_step);
  }
  return out;
}

template <class Point, class Fn>
double numeric_partial(const Fn& f, const Point& q, double Point::*member, double rel_step) {
  return central(
      [&](double x) {
        Point moved = q;
        moved.*member = x;
        return f(moved);
      },
      q.*member, rel_step);
}

double vertical_core(const PhaseGradient& f, const PhaseGradient& g) {
  return f.p.dot(g.y) - g.p.dot(f.y);
}

double homogeneous_core(const PhaseGradient& f, const PhaseGradient& g) {
  return f.p0 * g.t - g.p0 * f.t + vertical_core(f, g);
}

void require_vertical(const Expression& e) {
  if (e.depends_on(kTimeMomentumName)) {
    throw InputError("vertical bracket arguments may not depend on p0");
  }
}

// Everything the Lagrangian bracket needs about 𝓛 at one jet.
struct LagrangianFrame {
  Matrix inv;   // (π_ij)^-1
  Matrix curl;  // C_nk = ∂_n π_k - ∂_k π_n
};

LagrangianFrame lagrangian_frame(const Lagrangian& l, const JetPoint& j) {
  const LagrangianJet d = l.jet(j);
  return LagrangianFrame{inverse_velocity_hessian(d.pi_v), d.pi_y.transpose() - d.pi_y};
}

std::pair<Vector, Vector> jet_gradient(const Expression& f, const JetPoint& j) {
  const BundleSpec spec(static_cast<int>(j.y.size()));
  auto names = spec.y_names();
  for (auto& v : spec.v_names()) names.push_back(v);
  const Vector g = f.gradient(names, to_bindings(j));
  return {g.head(j.y.size()), g.tail(j.y.size())};
}

double lagrangian_core(const LagrangianFrame& fr, const Vector& fy, const Vector& fv,
                       const Vector& gy, const Vector& gv) {
  const Vector pf = fr.inv * fv;
  const Vector pg = fr.inv * gv;
  return pf.dot(gy) - pg.dot(fy) + pg.dot(fr.curl * pf);
}

}  // namespace

double bracket_homogeneous(const Expression& f, const Expression& g,
                           const HomogeneousPhasePoint& q) {
  return homogeneous_core(gradient_at(f, q), gradient_at(g, q));
}

double bracket_vertical(const Expression& f, const Expression& g, const VerticalPhasePoint& q) {
  require_vertical(f);
  require_vertical(g);
  return vertical_core(gradient_at(f, q), gradient_at(g, q));
}

double bracket_lagrangian(const Expression& f, const Expression& g, const Lagrangian& l,
                          const JetPoint& j) {
  const auto fr = lagrangian_frame(l, j);
  const auto [fy, fv] = jet_gradient(f, j);
  const auto [gy, gv] = jet_gradient(g, j);
  return lagrangian_core(fr, fy, fv, gy, gv);
}

VerticalTangent hamiltonian_vector_field(const Expression& f, const VerticalPhasePoint& q) {
  require_vertical(f);
  const auto d = gradient_at(f, q);
  return VerticalTangent{0, d.p, -d.y};
}

JetTangent lagrangian_hamiltonian_vector_field(const Expression& f, const Lagrangian& l,
                                               const JetPoint& j) {
  const auto fr = lagrangian_frame(l, j);
  const auto [fy, fv] = jet_gradient(f, j);
  const Vector pf = fr.inv * fv;
  // ∂_k π_i - ∂_i π_k is the transpose of the curl matrix.
  return JetTangent{-pf, fr.inv * (fy + fr.curl.transpose() * pf)};
}

double evolution_derivative(const HamiltonianForm& h, const Expression& f,
                            const VerticalPhasePoint& q) {
  const auto [hy, hp] = h.gradient(q);
  const auto d = gradient_at(f, q);
  return d.t + hp.dot(d.y) - hy.dot(d.p);
}

double evolution_derivative_split(const HamiltonianForm& h, const ReferenceFrame& frame,
                                  const Expression& f, const VerticalPhasePoint& q) {
  const Expression residual = frame_splitting(h, frame);
  const auto d = gradient_at(f, q);
  const Vector gamma = frame.at(q.t, q.y);
  const Matrix dgamma = frame.gamma().jacobian(q.t, q.y);
  const double frame_part = gamma.dot(d.y) - (dgamma.transpose() * q.p).dot(d.p);
  return d.t + frame_part + bracket_vertical(residual, f, q);
}

double bracket_vertical(const Expression& f, const PhaseFunction& g, const VerticalPhasePoint& q,
                        double h) {
  require_vertical(f);
  PhaseGradient dg;
  dg.y = numeric_partials(g, q, &VerticalPhasePoint::y, h);
  dg.p = numeric_partials(g, q, &VerticalPhasePoint::p, h);
  return vertical_core(gradient_at(f, q), dg);
}

double bracket_homogeneous(const Expression& f, const HomogeneousFunction& g,
                           const HomogeneousPhasePoint& q, double h) {
  PhaseGradient dg;
  dg.t = numeric_partial(g, q, &HomogeneousPhasePoint::t, h);
  dg.y = numeric_partials(g, q, &HomogeneousPhasePoint::y, h);
  dg.p = numeric_partials(g, q, &HomogeneousPhasePoint::p, h);
  dg.p0 = numeric_partial(g, q, &HomogeneousPhasePoint::p0, h);
  return homogeneous_core(gradient_at(f, q), dg);
}

double bracket_lagrangian(const Expression& f, const JetFunction& g, const Lagrangian& l,
                          const JetPoint& j, double h) {
  const auto fr = lagrangian_frame(l, j);
  const auto [fy, fv] = jet_gradient(f, j);
  const Vector gy = numeric_partials(g, j, &JetPoint::y, h);
  const Vector gv = numeric_partials(g, j, &JetPoint::v, h);
  return lagrangian_core(fr, fy, fv, gy, gv);
}

double jacobi_vertical(const Expression& f, const Expression& g, const Expression& k,
                       const VerticalPhasePoint& q, double h) {
  auto nested = [&](const Expression& a, const Expression& b, const Expression& c) {
    return bracket_vertical(
        a, [&](const VerticalPhasePoint& x) { return bracket_vertical(b, c, x); }, q, h);
  };
  return nested(f, g, k) + nested(g, k, f) + nested(k, f, g);
}

double jacobi_homogeneous(const Expression& f, const Expression& g, const Expression& k,
                          const HomogeneousPhasePoint& q, double h) {
  auto nested = [&](const Expression& a, const Expression& b, const Expression& c) {
    return bracket_homogeneous(
        a, [&](const HomogeneousPhasePoint& x) { return bracket_homogeneous(b, c, x); }, q, h);
  };
  return nested(f, g, k) + nested(g, k, f) + nested(k, f, g);
}

double jacobi_lagrangian(const Expression& f, const Expression& g, const Expression& k,
                         const Lagrangian& l, const JetPoint& j, double h) {
  auto nested = [&](const Expression& a, const Expression& b, const Expression& c) {
    return bracket_lagrangian(
        a, [&](const JetPoint& x) { return bracket_lagrangian(b, c, l, x); }, l, j, h);
  };
  return nested(f, g, k) + nested(g, k, f) + nested(k, f, g);
}

}  // namespace jetmech
