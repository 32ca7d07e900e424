#include "jetmech/bundle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

std::string y_name(int i) { return fmt::format("y{}", i + 1); }
std::string p_name(int i) { return fmt::format("p{}", i + 1); }
std::string v_name(int i) { return fmt::format("v{}", i + 1); }

namespace {

std::vector<std::string> indexed(int n, std::string (*name)(int)) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(name(i));
  return out;
}

void bind(Bindings& b, const Vector& x, std::string (*name)(int)) {
  for (Eigen::Index i = 0; i < x.size(); ++i) b[name(static_cast<int>(i))] = x[i];
}

bool finite(const Vector& x) { return x.allFinite(); }

}  // namespace

BundleSpec::BundleSpec(int n) : n_(n) {
  if (n < 1) throw InputError(fmt::format("fibre dimension must be at least 1, got {}", n));
}

std::vector<std::string> BundleSpec::y_names() const { return indexed(n_, y_name); }
std::vector<std::string> BundleSpec::p_names() const { return indexed(n_, p_name); }
std::vector<std::string> BundleSpec::v_names() const { return indexed(n_, v_name); }

std::vector<std::string> BundleSpec::event_names() const {
  std::vector<std::string> out{kTimeName};
  for (auto& s : y_names()) out.push_back(s);
  return out;
}

std::vector<std::string> BundleSpec::phase_names() const {
  auto out = event_names();
  for (auto& s : p_names()) out.push_back(s);
  return out;
}

std::vector<std::string> BundleSpec::jet_names() const {
  auto out = event_names();
  for (auto& s : v_names()) out.push_back(s);
  return out;
}

std::vector<std::string> BundleSpec::homogeneous_names() const {
  auto out = phase_names();
  out.push_back(kTimeMomentumName);
  return out;
}

Bindings to_bindings(const EventPoint& e) {
  Bindings b{{kTimeName, e.t}};
  bind(b, e.y, y_name);
  return b;
}

Bindings to_bindings(const JetPoint& j) {
  Bindings b{{kTimeName, j.t}};
  bind(b, j.y, y_name);
  bind(b, j.v, v_name);
  return b;
}

Bindings to_bindings(const VerticalPhasePoint& q) {
  Bindings b{{kTimeName, q.t}};
  bind(b, q.y, y_name);
  bind(b, q.p, p_name);
  return b;
}

Bindings to_bindings(const HomogeneousPhasePoint& q) {
  Bindings b{{kTimeName, q.t}, {kTimeMomentumName, q.p0}};
  bind(b, q.y, y_name);
  bind(b, q.p, p_name);
  return b;
}

Bindings to_bindings(const SecondJetPoint& s) { return to_bindings(JetPoint{s.t, s.y, s.v}); }

void check_point(const JetPoint& j) {
  if (j.y.size() != j.v.size()) {
    throw InputError(fmt::format("jet point: y has {} entries, v has {}", j.y.size(), j.v.size()));
  }
  if (!std::isfinite(j.t) || !finite(j.y) || !finite(j.v)) {
    throw InputError("jet point has non-finite entries");
  }
}

void check_point(const VerticalPhasePoint& q) {
  if (q.y.size() != q.p.size()) {
    throw InputError(
        fmt::format("phase point: y has {} entries, p has {}", q.y.size(), q.p.size()));
  }
  if (!std::isfinite(q.t) || !finite(q.y) || !finite(q.p)) {
    throw InputError("phase point has non-finite entries");
  }
}

EventField::EventField(std::vector<Expression> components) : components_(std::move(components)) {
  const BundleSpec spec(static_cast<int>(components_.size()));
  const auto allowed = spec.event_names();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (const auto& name : components_[i].free_vars()) {
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        throw InputError(fmt::format(
            "component {} may only depend on t and y1..y{}, found '{}'", i + 1, spec.n(), name));
      }
    }
  }
}

EventField EventField::parse(const std::vector<std::string>& sources) {
  return EventField(parse_all(sources));
}

EventField EventField::zero(int n) {
  return EventField(std::vector<Expression>(static_cast<std::size_t>(n)));
}

Vector EventField::values(double t, const Vector& y) const {
  const Bindings b = to_bindings(EventPoint{t, y});
  Vector out(dimension());
  for (int i = 0; i < dimension(); ++i) out[i] = components_[static_cast<std::size_t>(i)].evaluate(b);
  return out;
}

Matrix EventField::jacobian(double t, const Vector& y) const {
  const Bindings b = to_bindings(EventPoint{t, y});
  const auto names = indexed(dimension(), y_name);
  Matrix out(dimension(), dimension());
  for (int i = 0; i < dimension(); ++i) {
    out.row(i) = components_[static_cast<std::size_t>(i)].gradient(names, b).transpose();
  }
  return out;
}

Vector EventField::time_derivative(double t, const Vector& y) const {
  const Bindings b = to_bindings(EventPoint{t, y});
  const std::string vars[] = {kTimeName};
  Vector out(dimension());
  for (int i = 0; i < dimension(); ++i) {
    out[i] = components_[static_cast<std::size_t>(i)].gradient(vars, b)[0];
  }
  return out;
}

ReferenceFrame ReferenceFrame::parse(const std::vector<std::string>& sources) {
  return ReferenceFrame(EventField::parse(sources));
}

EventVectorField::EventVectorField(int u_t, EventField u) : u_t_(u_t), u_(std::move(u)) {
  if (u_t != 0 && u_t != 1) {
    throw InputError(fmt::format("time component of a symmetry must be 0 or 1, got {}", u_t));
  }
}

Vector EventVectorField::total_derivative(const JetPoint& j) const {
  return u_.time_derivative(j.t, j.y) + u_.jacobian(j.t, j.y) * j.v;
}

FibredAutomorphism::FibredAutomorphism(EventField forward, EventField inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  if (forward_.dimension() != inverse_.dimension()) {
    throw InputError(fmt::format("automorphism: forward has {} components, inverse has {}",
                                 forward_.dimension(), inverse_.dimension()));
  }
}

double FibredAutomorphism::roundtrip_error(const std::vector<EventPoint>& points) const {
  double worst = 0.0;
  for (const auto& e : points) {
    const Vector back = inverse_.values(e.t, forward_.values(e.t, e.y));
    worst = std::max(worst, (back - e.y).cwiseAbs().maxCoeff());
  }
  return worst;
}

Vector relative_velocity(const ReferenceFrame& frame, const JetPoint& j) {
  return j.v - frame.at(j.t, j.y);
}

Vector adapted_coordinates(const ReferenceFrame& frame, double t_ref, const EventPoint& e,
                           double dt) {
  if (!(dt > 0.0)) throw InputError("adapted_coordinates: dt must be positive");
  const double span = t_ref - e.t;
  Vector y = e.y;
  if (span == 0.0) return y;
  const auto steps = static_cast<long>(std::max(1.0, std::ceil(std::abs(span) / dt - 1e-9)));
  const double h = span / static_cast<double>(steps);
  const auto& g = frame.gamma();
  double s = e.t;
  for (long k = 0; k < steps; ++k) {
    const Vector k1 = g.values(s, y);
    const Vector k2 = g.values(s + 0.5 * h, y + 0.5 * h * k1);
    const Vector k3 = g.values(s + 0.5 * h, y + 0.5 * h * k2);
    const Vector k4 = g.values(s + h, y + h * k3);
    Vector next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw IntegrationError("frame flow left the finite range", s);
    }
    y = std::move(next);
    s = e.t + static_cast<double>(k + 1) * h;
  }
  return y;
}

VerticalTangent PhaseLift::at(const VerticalPhasePoint& q) const {
  const auto& u = u_.fibre();
  return VerticalTangent{u_.time_component(), u.values(q.t, q.y),
                         -(u.jacobian(q.t, q.y).transpose() * q.p)};
}

PhaseLift lift_to_phase(const EventVectorField& u) { return PhaseLift(u); }

namespace {

// ∂y/∂y' at y', checked for invertibility.
Matrix inverse_jacobian(const FibredAutomorphism& a, double t, const Vector& y_new) {
  Matrix jinv = a.inverse().jacobian(t, y_new);
  const double det = jinv.determinant();
  if (!(std::abs(det) >= 1e-12)) {
    throw SingularMatrix(fmt::format("automorphism Jacobian is singular (det {:.3g})", det));
  }
  return jinv;
}

}  // namespace

VerticalPhasePoint holonomic_phase_transform(const FibredAutomorphism& a,
                                             const VerticalPhasePoint& q) {
  check_point(q);
  if (q.y.size() != a.dimension()) {
    throw InputError("holonomic_phase_transform: point and automorphism dimensions differ");
  }
  const Vector y_new = a.forward().values(q.t, q.y);
  const Matrix jinv = inverse_jacobian(a, q.t, y_new);
  return VerticalPhasePoint{q.t, y_new, jinv.transpose() * q.p};
}

PhaseJacobian holonomic_phase_jacobian(const FibredAutomorphism& a, const VerticalPhasePoint& q) {
  const int n = a.dimension();
  const Vector y_new = a.forward().values(q.t, q.y);
  const Matrix jfwd = a.forward().jacobian(q.t, q.y);
  const Matrix jinv = inverse_jacobian(a, q.t, y_new);

  // ∂p'_i/∂y'^l = Σ_j ∂²y^j/∂y'^i∂y'^l p_j, then chain through ∂y'/∂y.
  const Bindings b = to_bindings(EventPoint{q.t, y_new});
  const auto names = indexed(n, y_name);
  Matrix dp_dynew = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    dp_dynew += q.p[j] * a.inverse().components()[static_cast<std::size_t>(j)].hessian(names, b);
  }
  return PhaseJacobian{jfwd, Matrix::Zero(n, n), dp_dynew * jfwd, jinv.transpose()};
}

}  // namespace jetmech
