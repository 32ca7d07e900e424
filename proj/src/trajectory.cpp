#include "jetmech/trajectory.hpp"

#include <fmt/format.h>

#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

StepPlan plan_steps(double t0, double t_end, double dt) {
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !std::isfinite(dt)) {
    throw InputError("integration window must be finite");
  }
  if (!(dt > 0.0)) throw InputError(fmt::format("dt must be positive, got {}", dt));
  if (!(t_end > t0)) {
    throw InputError(fmt::format("t_end ({}) must exceed t0 ({})", t_end, t0));
  }
  const double span = t_end - t0;
  const auto steps = static_cast<long>(std::floor(span / dt + 1e-9));
  if (steps < 1) {
    throw InputError(fmt::format("dt ({}) exceeds the integration window ({})", dt, span));
  }
  return StepPlan{steps, span / static_cast<double>(steps)};
}

Trajectory::Trajectory(TrajectoryKind kind, int n, double t0, double h, std::vector<Vector> states)
    : kind_(kind), n_(n), t0_(t0), h_(h), states_(std::move(states)) {
  for (const auto& x : states_) {
    if (x.size() != 2 * n) {
      throw InputError(fmt::format("trajectory state has {} entries, expected {}", x.size(), 2 * n));
    }
  }
}

double Trajectory::time(std::size_t k) const { return t0_ + static_cast<double>(k) * h_; }

VerticalPhasePoint Trajectory::phase(std::size_t k) const {
  if (kind_ != TrajectoryKind::kPhase) throw InputError("not a phase-space trajectory");
  const Vector& x = state(k);
  return VerticalPhasePoint{time(k), x.head(n_), x.tail(n_)};
}

JetPoint Trajectory::jet(std::size_t k) const {
  if (kind_ != TrajectoryKind::kJet) throw InputError("not a jet trajectory");
  const Vector& x = state(k);
  return JetPoint{time(k), x.head(n_), x.tail(n_)};
}

std::vector<std::string> Trajectory::column_names() const {
  const BundleSpec spec(n_);
  auto out = spec.event_names();
  for (auto& s : kind_ == TrajectoryKind::kPhase ? spec.p_names() : spec.v_names()) {
    out.push_back(s);
  }
  return out;
}

std::vector<Vector> integrate_rk4(const OdeRhs& rhs, double t0, const Vector& x0,
                                  const StepPlan& plan) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(plan.steps) + 1);
  out.push_back(x0);
  const double h = plan.h;
  for (long k = 0; k < plan.steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const Vector& x = out.back();
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw IntegrationError(fmt::format("state became non-finite after t = {}", t), t);
    }
    out.push_back(std::move(next));
  }
  return out;
}

namespace {

template <class T>
std::vector<T> differentiate(const std::vector<T>& x, double h) {
  const std::size_t n = x.size();
  if (n < 3) throw InputError("need at least three samples to differentiate");
  std::vector<T> d;
  d.reserve(n);
  d.push_back((-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h));
  for (std::size_t k = 1; k + 1 < n; ++k) d.push_back((x[k + 1] - x[k - 1]) / (2.0 * h));
  d.push_back((3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * h));
  return d;
}

template <class T>
std::vector<T> differentiate_twice(const std::vector<T>& x, double h) {
  const std::size_t n = x.size();
  if (n < 4) throw InputError("need at least four samples for a second derivative");
  const double h2 = h * h;
  std::vector<T> d;
  d.reserve(n);
  d.push_back((2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / h2);
  for (std::size_t k = 1; k + 1 < n; ++k) d.push_back((x[k + 1] - 2.0 * x[k] + x[k - 1]) / h2);
  d.push_back((2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) / h2);
  return d;
}

}  // namespace

std::vector<double> sampled_derivative(const std::vector<double>& values, double h) {
  return differentiate(values, h);
}

std::vector<Vector> sampled_derivative(const std::vector<Vector>& values, double h) {
  return differentiate(values, h);
}

std::vector<Vector> sampled_second_derivative(const std::vector<Vector>& values, double h) {
  return differentiate_twice(values, h);
}

}  // namespace jetmech
