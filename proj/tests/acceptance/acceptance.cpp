// Acceptance checks. `acceptance` runs all ten; `acceptance 3 7` runs a
// subset. One line per criterion; the exit status is 0 only if all pass.

#include <fmt/format.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "jetmech/conservation.hpp"
#include "jetmech/constraints.hpp"
#include "jetmech/finite_difference.hpp"
#include "jetmech/hamiltonian.hpp"
#include "jetmech/poisson.hpp"
#include "jetmech/relativistic.hpp"
#include "jetmech/sampling.hpp"
#include "jetmech/variational.hpp"
#include "support/automorphisms.hpp"
#include "support/random_expr.hpp"

using namespace jetmech;

namespace {

/// One measured quantity against its bound: value <= bound, or value > bound
/// for clauses that demand a detection.
struct Clause {
  std::string name;
  double value;
  double bound;
  bool above = false;
  bool pass() const { return above ? value > bound : value <= bound; }
};

Clause at_most(std::string name, double value, double bound) { return {std::move(name), value, bound}; }
Clause above(std::string name, double value, double bound) { return {std::move(name), value, bound, true}; }

struct Outcome {
  std::vector<Clause> clauses;
  bool pass() const {
    for (const auto& c : clauses)
      if (!c.pass()) return false;
    return true;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

constexpr int kPoints = 100;

Outcome bracket_axioms() {
  Stopwatch clock;
  const int n = 2;
  const BundleSpec s(n);
  testing::ExpressionGenerator vertical(1001, s.phase_names());
  testing::ExpressionGenerator homogeneous(1002, s.homogeneous_names());
  SampleBox box(1003, -1.0, 1.0);
  double anti = 0.0, leibniz = 0.0, jacobi = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const Expression f = vertical.smooth(3), g = vertical.smooth(3), h = vertical.smooth(3);
    const VerticalPhasePoint q = box.phase(n);
    const Bindings b = to_bindings(q);
    anti = std::max(anti, std::abs(bracket_vertical(f, g, q) + bracket_vertical(g, f, q)));
    leibniz = std::max(leibniz, std::abs(bracket_vertical(f, g * h, q) - bracket_vertical(f, g, q) * h.evaluate(b) -
                                         g.evaluate(b) * bracket_vertical(f, h, q)));
    jacobi = std::max(jacobi, std::abs(jacobi_vertical(f, g, h, q)));

    const Expression u = homogeneous.smooth(3), v = homogeneous.smooth(3), w = homogeneous.smooth(3);
    const HomogeneousPhasePoint r = box.homogeneous(n);
    const Bindings rb = to_bindings(r);
    anti = std::max(anti, std::abs(bracket_homogeneous(u, v, r) + bracket_homogeneous(v, u, r)));
    leibniz = std::max(leibniz, std::abs(bracket_homogeneous(u, v * w, r) -
                                         bracket_homogeneous(u, v, r) * w.evaluate(rb) -
                                         v.evaluate(rb) * bracket_homogeneous(u, w, r)));
    jacobi = std::max(jacobi, std::abs(jacobi_homogeneous(u, v, w, r)));
  }
  // {y^i, p_j}_V against δ^i_j, exactly
  double delta = 0.0;
  SampleBox points(1004, -1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const VerticalPhasePoint q = points.phase(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double value = bracket_vertical(Expression::variable(y_name(i)), Expression::variable(p_name(j)), q);
        delta = std::max(delta, std::abs(value - (i == j ? 1.0 : 0.0)));
      }
  }
  return {{at_most("antisymmetry", anti, 1e-12), at_most("leibniz", leibniz, 1e-9),
           at_most("jacobi", jacobi, 1e-7), at_most("y_p_delta", delta, 0.0),
           at_most("runtime_s", clock.seconds(), 5.0)}};
}

Outcome restriction() {
  const int n = 2;
  testing::ExpressionGenerator gen(2001, BundleSpec(n).phase_names());
  SampleBox box(2002, -1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const Expression f = gen.smooth(3), g = gen.smooth(3);
    const HomogeneousPhasePoint r = box.homogeneous(n);
    worst = std::max(worst, std::abs(bracket_homogeneous(f, g, r) -
                                     bracket_vertical(f, g, VerticalPhasePoint{r.t, r.y, r.p})));
  }
  return {{at_most("max_difference", worst, 0.0)}};
}

Outcome hyperregular_equivalence() {
  Stopwatch clock;
  const Lagrangian l = Lagrangian::parse(1, "v1^2/2 - y1^2/2");
  const HamiltonianForm h = HamiltonianForm::parse(1, "p1^2/2 + y1^2/2");
  const JetPoint j0{0.0, vec({1.0}), vec({0.0})};
  const auto lt = integrate_lagrange(l, j0, 10.0, 1e-3);
  const auto ht = integrate_hamilton(h, legendre_map(l, j0), 10.0, 1e-3);
  double gap = 0.0;
  for (std::size_t k = 0; k < lt.size(); ++k) {
    const VerticalPhasePoint q = legendre_map(l, lt.jet(k));
    gap = std::max({gap, std::abs(q.y[0] - ht.phase(k).y[0]), std::abs(q.p[0] - ht.phase(k).p[0])});
  }
  SampleBox box(3001, -5.0, 5.0);
  double roundtrip = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const JetPoint j = box.jet(1);
    roundtrip = std::max(roundtrip, (legendre_invert(l, legendre_map(l, j)).v - j.v).cwiseAbs().maxCoeff());
  }
  return {{at_most("trajectory_gap", gap, 1e-6), at_most("legendre_roundtrip", roundtrip, 1e-10),
           at_most("runtime_s", clock.seconds(), 10.0)}};
}

Outcome conservation() {
  const EventVectorField time(1, EventField::zero(1));
  const EventVectorField shift(0, EventField::parse({"1"}));
  const Lagrangian osc = Lagrangian::parse(1, "v1^2/2 - y1^2/2");
  const HamiltonianForm hosc = HamiltonianForm::parse(1, "p1^2/2 + y1^2/2");
  const auto ot = integrate_lagrange(osc, JetPoint{0.0, vec({1.0}), vec({0.0})}, 2 * std::numbers::pi, 1e-3);
  const CurrentReport energy = weak_identity_residual(osc, time, ot);
  const CurrentReport force = weak_identity_residual(osc, shift, ot);

  const Lagrangian free = Lagrangian::parse(1, "v1^2/2");
  const auto ft = integrate_lagrange(free, JetPoint{0.0, vec({0.3}), vec({-0.8})}, 2 * std::numbers::pi, 1e-3);
  const CurrentReport momentum = weak_identity_residual(free, shift, ft);

  const auto ht = integrate_hamilton(hosc, VerticalPhasePoint{0.0, vec({1.0}), vec({0.0})}, 2 * std::numbers::pi, 1e-3);
  double equality = 0.0;
  for (std::size_t k = 0; k < ht.size(); ++k) {
    const auto q = ht.phase(k);
    for (const auto* u : {&time, &shift}) {
      equality = std::max(equality, std::abs(hamiltonian_current(hosc, *u, q) -
                                             symmetry_current(osc, *u, hamiltonian_map(hosc, q))));
    }
  }
  return {{at_most("energy_drift", energy.max_drift, 1e-7), at_most("momentum_drift", momentum.max_drift, 1e-10),
           at_most("weak_identity", std::max({energy.weak_identity_max, force.weak_identity_max,
                                               momentum.weak_identity_max}),
                   1e-5),
           at_most("current_equality", equality, 1e-8)}};
}

Outcome frame_covariance() {
  const int n = 2;
  const BundleSpec s(n);
  testing::ExpressionGenerator phase(5001, s.phase_names());
  testing::ExpressionGenerator event(5002, s.event_names());
  SampleBox box(5003, -1.0, 1.0);
  double split = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const HamiltonianForm h(n, phase.smooth(3));
    const ReferenceFrame frame(EventField({event.smooth(3), event.smooth(3)}));
    const Expression f = phase.smooth(3);
    const VerticalPhasePoint q = box.phase(n);
    split = std::max(split, std::abs(evolution_derivative_split(h, frame, f, q) - evolution_derivative(h, f, q)));
  }
  const Lagrangian free = Lagrangian::parse(1, "v1^2/2");
  const auto ft = integrate_lagrange(free, JetPoint{0.0, vec({0.3}), vec({-0.8})}, 10.0, 1e-3);
  const ReferenceFrame moving = ReferenceFrame::parse({"0.6"});
  std::vector<double> values;
  for (std::size_t k = 0; k < ft.size(); ++k) values.push_back(energy_function(free, moving, ft.jet(k)));
  return {{at_most("split_vs_raw", split, 1e-9), at_most("moving_frame_energy_drift", max_drift(values), 1e-8)}};
}

Outcome canonical_transformations() {
  SampleBox box(6001, -1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const FibredAutomorphism a = testing::random_automorphism(box);
    for (int s = 0; s < 10; ++s) {
      worst = std::max(worst, canonical_residuals(holonomic_phase_jacobian(a, box.phase(2))).max_residual());
    }
  }
  std::vector<VerticalPhasePoint> points;
  for (int k = 0; k < kPoints; ++k) points.push_back(box.phase(1));
  const CanonicalReport flip = canonical_check(CanonicalTransform::parse({"p1"}, {"y1"}), points);
  return {{at_most("holonomic_residual", worst, 1e-8),
           above("counterexample_residual", flip.max_residual(), kCanonicalTolerance)}};
}

Outcome degenerate_system() {
  const Lagrangian l = Lagrangian::parse(2, "v1^2/2");
  auto family = [](double c) {
    return HamiltonianForm(2, Expression::parse("p1^2/2") + Expression::constant(c) * Expression::parse("p2"));
  };
  SampleBox box(7001, -1.0, 1.0);
  std::vector<JetPoint> jets;
  std::vector<VerticalPhasePoint> phases;
  for (int k = 0; k < kPoints; ++k) jets.push_back(box.jet(2));
  for (int k = 0; k < kPoints; ++k) phases.push_back(box.phase(2));

  double association = 0.0, agreement = 0.0, projected = 0.0, constrained = 0.0, tangency = 0.0, pullback = 0.0;
  for (double c : {-1.0, 0.0, 2.0}) {
    const HamiltonianForm h = family(c);
    association = std::max(association, association_check(l, h, jets, phases).max_residual());
    for (const auto& j : jets) {
      const auto q = legendre_map(l, j);
      agreement = std::max(agreement, std::abs(h.value(q) - family(-1.0).value(q)));
      tangency = std::max(tangency, tangency_residual(l, h, q).cwiseAbs().maxCoeff());
      const RepeatedJetPoint r{j.t, j.y, j.v, box.vector(2), box.vector(2)};
      const auto cartan = cartan_residual(l, r);
      const auto pulled = pulled_back_hamilton_operator(l, h, r);
      pullback = std::max({pullback, (cartan.first - pulled.first).cwiseAbs().maxCoeff(),
                           (cartan.second - pulled.second).cwiseAbs().maxCoeff()});
    }
    const auto tr = integrate_hamilton(h, VerticalPhasePoint{0.0, vec({0.5, -0.25}), vec({1.5, 0.0})}, 3.0, 1e-3);
    constrained = std::max(constrained, constrained_hamilton_residual(h, ConstraintSpace(l, h), tr).max_residual);
    std::vector<Vector> ys;
    for (std::size_t k = 0; k < tr.size(); ++k) ys.push_back(tr.phase(k).y);
    const auto vs = sampled_derivative(ys, tr.dt());
    const auto as = sampled_second_derivative(ys, tr.dt());
    for (std::size_t k = 0; k < tr.size(); ++k) {
      projected = std::max(projected, euler_lagrange_residual(l, SecondJetPoint{tr.time(k), ys[k], vs[k], as[k]})
                                          .cwiseAbs()
                                          .maxCoeff());
    }
  }
  return {{at_most("association", association, kAssociationTolerance),
           at_most("agreement_on_Q", agreement, 1e-8), at_most("constrained_hamilton", constrained, 1e-6),
           at_most("projected_euler_lagrange", projected, 1e-5), at_most("tangency_on_Q", tangency, 0.0),
           at_most("pullback_identity", pullback, 1e-8)}};
}

Outcome relativistic() {
  const double boosted =
      transform_jet(boost_transform(1, 0.5), SubmanifoldJet{0.0, vec({0.0}), vec({0.6})}).v[0];

  SampleBox box(8001, -1.0, 1.0);
  const ChartTransform a = ChartTransform::parse({"z0 + z1^2/4", "z1 + sin(z0)/3", "z2*exp(z0/5)"});
  const ChartTransform b = ChartTransform::parse({"z0*(1 + z2^2/8) - z1/2", "z1 - z0*z2/4", "z2 + z1/3"});
  double functorial = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const SubmanifoldJet j{0.5 * box.next(), 0.5 * box.vector(2), 0.5 * box.vector(2)};
    const auto stepwise = transform_jet(b, transform_jet(a, j));
    const auto direct = transform_jet(compose(b, a), j);
    functorial = std::max({functorial, (stepwise.v - direct.v).cwiseAbs().maxCoeff(),
                           (stepwise.z - direct.z).cwiseAbs().maxCoeff(), std::abs(stepwise.z0 - direct.z0)});
  }

  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + k % 3;
    const SubmanifoldJet j{box.next(), box.vector(m), box.vector(m) / std::sqrt(static_cast<double>(m)) * 0.999};
    if (!velocity_bound_check(j)) continue;
    const ChartTransform composed =
        compose(boost_transform(m, 0.99 * box.next(), 1 + k % m), boost_transform(m, 0.99 * box.next(), 1));
    if (!velocity_bound_check(transform_jet(composed, j))) ++violations;
  }

  double roundtrip = 0.0, residual = 0.0;
  const Metric g = Metric::minkowski(2);
  for (int k = 0; k < kPoints; ++k) {
    const SubmanifoldJet j{box.next(), box.vector(2), 0.7 * box.vector(2)};
    const auto w = normalize_to_hyperboloid(g, j, k % 2 == 0 ? 1 : -1);
    residual = std::max(residual, std::abs(hyperboloid_residual(g, w)));
    roundtrip = std::max(roundtrip, (project_tangent(w).v - j.v).cwiseAbs().maxCoeff());
  }
  return {{at_most("boost_1_7", std::abs(boosted - 1.0 / 7.0), 1e-12), at_most("functoriality", functorial, 1e-10),
           at_most("bound_violations", violations, 0.0), at_most("normalize_project", roundtrip, 1e-12),
           at_most("hyperboloid_residual", residual, 1e-12)}};
}

Outcome ad_integrity() {
  const std::vector<std::string> vars{"t", "y1", "y2", "p1", "v1"};
  testing::ExpressionGenerator gen(9001, vars);
  double grad = 0.0, hess = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const Expression e = gen.smooth(5);
    Bindings b;
    for (const auto& v : vars) b[v] = gen.box().next();
    const SecondOrder d = e.derivatives(vars, b);
    const Vector g = numeric_gradient(e, vars, b);
    const Matrix h = numeric_hessian(e, vars, b);
    for (int i = 0; i < static_cast<int>(vars.size()); ++i) {
      grad = std::max(grad, std::abs(d.gradient[i] - g[i]) / std::max(1.0, std::abs(g[i])));
      for (int j = 0; j < static_cast<int>(vars.size()); ++j)
        hess = std::max(hess, std::abs(d.hessian(i, j) - h(i, j)) / std::max(1.0, std::abs(h(i, j))));
    }
  }
  return {{at_most("gradient_rel_error", grad, 1e-6), at_most("hessian_rel_error", hess, 1e-4)}};
}

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / fmt::format("jetmech_acceptance_{}", ::getpid());
  const std::vector<std::pair<std::string, std::string>> runs{
      {"simulate-hamilton", "oscillator"}, {"simulate-lagrange", "magnetic"},   {"legendre", "oscillator"},
      {"bracket", "bracket"},              {"check-canonical", "canonical"},    {"check-conservation", "oscillator"},
      {"check-association", "degenerate"}, {"check-constraints", "degenerate"}, {"rel-transform", "boost"}};
  int compared = 0, differing = 0, empty_runs = 0;
  for (const auto& [command, config] : runs) {
    std::vector<fs::path> dirs;
    for (int copy = 0; copy < 2; ++copy) {
      const fs::path dir = root / fmt::format("{}_{}_{}", command, config, copy);
      fs::remove_all(dir);
      fs::create_directories(dir);
      const std::string cmd = fmt::format("{} {} --config {}/{}.cfg --out {} > {}/log 2>&1", JETMECH_CLI, command,
                                          JETMECH_CONFIGS, config, dir.string(), dir.string());
      if (std::system(cmd.c_str()) == -1) ++differing;
      dirs.push_back(dir);
    }
    int produced = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto name = entry.path().filename();
      if (name == "log") continue;
      ++compared;
      ++produced;
      if (!fs::exists(dirs[1] / name) || slurp(dirs[0] / name) != slurp(dirs[1] / name)) ++differing;
    }
    if (produced == 0) ++empty_runs;
  }
  fs::remove_all(root);
  return {{at_most("differing_artifacts", differing, 0.0), at_most("runs_without_artifacts", empty_runs, 0.0),
           above("artifacts_compared", compared, 0.0)}};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"bracket axioms", bracket_axioms},
      {"restriction to V*Y", restriction},
      {"hyperregular equivalence", hyperregular_equivalence},
      {"conservation", conservation},
      {"frame covariance", frame_covariance},
      {"canonical transformations", canonical_transformations},
      {"degenerate system", degenerate_system},
      {"relativistic kinematics", relativistic},
      {"AD integrity", ad_integrity},
      {"CLI determinism", cli_determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > static_cast<int>(criteria().size())) {
      fmt::print(stderr, "usage: acceptance [criterion 1-10 ...]\n");
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty())
    for (int c = 1; c <= static_cast<int>(criteria().size()); ++c) selected.push_back(c);

  bool all = true;
  for (int c : selected) {
    const Criterion& crit = criteria()[c - 1];
    Outcome out;
    try {
      out = crit.run();
    } catch (const std::exception& e) {
      out.clauses.push_back(at_most(fmt::format("error: {}", e.what()), NAN, 0.0));
    }
    std::string detail;
    for (const auto& cl : out.clauses) {
      detail += fmt::format("{}{} {:.3g} ({} {:.3g}){}", detail.empty() ? "" : ", ", cl.name, cl.value,
                            cl.above ? ">" : "<=", cl.bound, cl.pass() ? "" : " FAILED");
    }
    fmt::print("c{:02d} {} {}: {}\n", c, out.pass() ? "PASS" : "FAIL", crit.title, detail);
    all = all && out.pass();
  }
  return all ? 0 : 1;
}
