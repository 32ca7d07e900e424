#include "jetmech/systems.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "jetmech/error.hpp"

namespace jetmech {

void require_vars(const Expression& e, const std::vector<std::string>& allowed,
                  std::string_view what) {
  for (const auto& name : e.free_vars()) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw InputError(fmt::format("{} may not depend on '{}'", what, name));
    }
  }
}

Lagrangian::Lagrangian(int n, Expression l) : n_(BundleSpec(n).n()), l_(std::move(l)) {
  require_vars(l_, BundleSpec(n).jet_names(), "Lagrangian");
}

Lagrangian Lagrangian::parse(int n, std::string_view source) {
  return Lagrangian(n, Expression::parse(source));
}

double Lagrangian::value(const JetPoint& j) const { return l_.evaluate(to_bindings(j)); }

Vector Lagrangian::momentum(const JetPoint& j) const {
  return l_.gradient(BundleSpec(n_).v_names(), to_bindings(j));
}

Matrix Lagrangian::velocity_hessian(const JetPoint& j) const {
  return l_.hessian(BundleSpec(n_).v_names(), to_bindings(j));
}

LagrangianJet Lagrangian::jet(const JetPoint& j) const {
  check_point(j);
  const auto d = l_.derivatives(BundleSpec(n_).jet_names(), to_bindings(j));
  const int n = n_;
  // Layout: 0 -> t, 1..n -> y, n+1..2n -> v.
  return LagrangianJet{d.value,
                       d.gradient[0],
                       d.gradient.segment(1, n),
                       d.gradient.segment(n + 1, n),
                       d.hessian.block(n + 1, 0, n, 1),
                       d.hessian.block(n + 1, 1, n, n),
                       d.hessian.block(n + 1, n + 1, n, n)};
}

HamiltonianForm::HamiltonianForm(int n, Expression h) : n_(BundleSpec(n).n()), h_(std::move(h)) {
  require_vars(h_, BundleSpec(n).phase_names(), "Hamiltonian");
}

HamiltonianForm HamiltonianForm::parse(int n, std::string_view source) {
  return HamiltonianForm(n, Expression::parse(source));
}

double HamiltonianForm::value(const VerticalPhasePoint& q) const {
  return h_.evaluate(to_bindings(q));
}

std::pair<Vector, Vector> HamiltonianForm::gradient(const VerticalPhasePoint& q) const {
  const BundleSpec spec(n_);
  auto names = spec.y_names();
  for (auto& p : spec.p_names()) names.push_back(p);
  const Vector g = h_.gradient(names, to_bindings(q));
  return {g.head(n_), g.tail(n_)};
}

HamiltonianJet HamiltonianForm::jet(const VerticalPhasePoint& q) const {
  check_point(q);
  const auto d = h_.derivatives(BundleSpec(n_).phase_names(), to_bindings(q));
  const int n = n_;
  return HamiltonianJet{d.value,
                        d.gradient[0],
                        d.gradient.segment(1, n),
                        d.gradient.segment(n + 1, n),
                        d.hessian.block(1, 0, n, 1),
                        d.hessian.block(n + 1, 0, n, 1),
                        d.hessian.block(1, 1, 2 * n, 2 * n)};
}

Matrix inverse_velocity_hessian(const Matrix& pi_v) {
  try {
    return invert_regular(pi_v);
  } catch (const SingularMatrix& e) {
    throw SingularLagrangian(fmt::format("Lagrangian is degenerate here: {}", e.what()));
  }
}

Expression frame_splitting(const HamiltonianForm& h, const ReferenceFrame& frame) {
  if (frame.dimension() != h.n()) {
    throw InputError(fmt::format("frame has {} components, Hamiltonian expects {}",
                                 frame.dimension(), h.n()));
  }
  Expression out = h.expression();
  for (int i = 0; i < h.n(); ++i) {
    out = out - Expression::variable(p_name(i)) *
                    frame.gamma().components()[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace jetmech
