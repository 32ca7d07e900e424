#pragma once

// Fixed-step RK4 integration and the sampled curves it produces.

#include <functional>
#include <string>
#include <vector>

#include "jetmech/bundle.hpp"

namespace jetmech {

/// Number of steps and the step actually used for [t0, t_end].
///
/// steps = floor((t_end - t0)/dt) (with a 1e-9 guard against representation
/// error in the quotient), h = (t_end - t0)/steps, so the last sample lands on
/// t_end up to rounding and a trajectory holds steps + 1 samples.
struct StepPlan {
  long steps = 0;
  double h = 0.0;
};

/// Throws InputError unless dt > 0 and t_end > t0.
StepPlan plan_steps(double t0, double t_end, double dt);

enum class TrajectoryKind { kPhase, kJet };

/// Samples (t_k, x_k) with t_k = t0 + k h. The state is (y, p) for a phase
/// trajectory and (y, v) for a jet trajectory.
class Trajectory {
 public:
  Trajectory(TrajectoryKind kind, int n, double t0, double h, std::vector<Vector> states);

  TrajectoryKind kind() const { return kind_; }
  int n() const { return n_; }
  double dt() const { return h_; }
  std::size_t size() const { return states_.size(); }
  double time(std::size_t k) const;
  const Vector& state(std::size_t k) const { return states_.at(k); }
  const std::vector<Vector>& states() const { return states_; }

  /// Throw InputError when the trajectory is of the other kind.
  VerticalPhasePoint phase(std::size_t k) const;
  JetPoint jet(std::size_t k) const;

  /// t, y1..yn, then p1..pn or v1..vn.
  std::vector<std::string> column_names() const;

 private:
  TrajectoryKind kind_;
  int n_;
  double t0_;
  double h_;
  std::vector<Vector> states_;
};

using OdeRhs = std::function<Vector(double, const Vector&)>;

/// Classical RK4 with the given plan; returns every state including x0.
/// Throws IntegrationError on a non-finite state.
std::vector<Vector> integrate_rk4(const OdeRhs& rhs, double t0, const Vector& x0,
                                  const StepPlan& plan);

/// d/dt of uniformly sampled values: centered differences inside, second
/// order one-sided stencils at both ends. Needs at least three samples.
std::vector<double> sampled_derivative(const std::vector<double>& values, double h);
std::vector<Vector> sampled_derivative(const std::vector<Vector>& values, double h);

/// d²/dt² with the three-point stencil inside and second order four-point
/// stencils at the ends. Needs at least four samples.
std::vector<Vector> sampled_second_derivative(const std::vector<Vector>& values, double h);

}  // namespace jetmech
