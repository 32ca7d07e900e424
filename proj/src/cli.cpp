#include "jetmech/cli.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

#include "json.hpp"

#include "jetmech/bundle.hpp"
#include "jetmech/conservation.hpp"
#include "jetmech/constraints.hpp"
#include "jetmech/error.hpp"
#include "jetmech/hamiltonian.hpp"
#include "jetmech/poisson.hpp"
#include "jetmech/relativistic.hpp"
#include "jetmech/sampling.hpp"
#include "jetmech/systems.hpp"
#include "jetmech/variational.hpp"

namespace jetmech {

namespace fs = std::filesystem;

namespace {

// Default tolerances per check.
constexpr double kBracketTol = 1e-12;
constexpr double kRoundTripTol = 1e-10;
constexpr double kDriftTol = 1e-7;
constexpr double kWeakIdentityTol = 1e-5;
constexpr double kCurrentEqualityTol = 1e-8;
constexpr double kTangencyTol = 1e-8;
constexpr double kConstrainedTol = 1e-6;
constexpr double kFunctorialityTol = 1e-10;
constexpr double kHyperboloidTol = 1e-12;

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error(fmt::format("cannot write '{}'", path.string()));
    for (std::size_t i = 0; i < header.size(); ++i) {
      out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line.push_back(',');
      line += fmt::format("{:.17g}", values[i]);
    }
    line.push_back('\n');
    out_ << line;
  }

 private:
  std::ofstream out_;
};

class Report {
 public:
  Report(const RunOptions& options, std::ostream& log) : options_(options), log_(log) {}

  double tolerance(double fallback) const { return options_.tolerance.value_or(fallback); }

  /// Records one check; `fallback` is the default tolerance.
  bool check(const std::string& name, double residual, double fallback) {
    const double tol = tolerance(fallback);
    const bool pass = std::isfinite(residual) && residual <= tol;
    record(name, residual, tol, pass);
    return pass;
  }

  void record(const std::string& name, double residual, double tol, bool pass) {
    nlohmann::ordered_json j;
    j["check"] = name;
    if (std::isfinite(residual)) {
      j["max_residual"] = residual;
    } else {
      j["max_residual"] = nullptr;
    }
    j["tolerance"] = tol;
    j["pass"] = pass;
    lines_.push_back(j.dump());
    all_pass_ = all_pass_ && pass;
    log_ << fmt::format("{:<32} {:>12.4g}  (tol {:.0e})  {}\n", name, residual, tol,
                        pass ? "PASS" : "FAIL");
  }

  bool all_pass() const { return all_pass_; }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    for (const auto& line : lines_) out << line << '\n';
  }

 private:
  const RunOptions& options_;
  std::ostream& log_;
  std::vector<std::string> lines_;
  bool all_pass_ = true;
};

std::vector<double> row_of(double t, const Vector& a, const Vector& b) {
  std::vector<double> r{t};
  r.insert(r.end(), a.data(), a.data() + a.size());
  r.insert(r.end(), b.data(), b.data() + b.size());
  return r;
}

Lagrangian require_lagrangian(const SystemConfig& c) {
  if (!c.lagrangian) throw InputError("lagrangian: required by this command");
  return Lagrangian::parse(c.n, *c.lagrangian);
}

HamiltonianForm require_hamiltonian(const SystemConfig& c) {
  if (!c.hamiltonian) throw InputError("hamiltonian: required by this command");
  return HamiltonianForm::parse(c.n, *c.hamiltonian);
}

std::pair<Vector, Vector> require_initial(const SystemConfig& c) {
  if (c.initial.empty()) throw InputError("initial.state: required by this command");
  const Eigen::Map<const Vector> x(c.initial.data(), static_cast<Eigen::Index>(c.initial.size()));
  return {x.head(c.n), x.tail(c.n)};
}

EventVectorField symmetry_of(const SystemConfig& c) {
  const EventField u =
      c.symmetry.u.empty() ? EventField::zero(c.n) : EventField::parse(c.symmetry.u);
  return EventVectorField(c.symmetry.u_t, u);
}

void write_trajectory(const Trajectory& traj, const fs::path& path) {
  CsvWriter csv(path, traj.column_names());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector& x = traj.state(k);
    csv.row(row_of(traj.time(k), x, Vector(0)));
  }
}

int simulate_hamilton(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  const auto h = require_hamiltonian(c);
  const auto [y, p] = require_initial(c);
  const auto traj = integrate_hamilton(h, VerticalPhasePoint{c.integrator.t0, y, p},
                                       c.integrator.t_end, c.integrator.dt);
  write_trajectory(traj, o.out / "trajectory.csv");
  log << fmt::format("wrote {} samples to {}\n", traj.size(), (o.out / "trajectory.csv").string());
  return kExitPass;
}

int simulate_lagrange(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  const auto l = require_lagrangian(c);
  const auto [y, v] = require_initial(c);
  const auto traj =
      integrate_lagrange(l, JetPoint{c.integrator.t0, y, v}, c.integrator.t_end, c.integrator.dt);
  write_trajectory(traj, o.out / "trajectory.csv");
  log << fmt::format("wrote {} samples to {}\n", traj.size(), (o.out / "trajectory.csv").string());
  return kExitPass;
}

int legendre(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  const auto l = require_lagrangian(c);
  std::vector<JetPoint> jets;
  if (!c.initial.empty()) {
    const auto [y, v] = require_initial(c);
    jets.push_back(JetPoint{c.integrator.t0, y, v});
  }
  SampleBox box(c.seed, c.box_lo, c.box_hi);
  for (int k = 0; k < c.samples; ++k) jets.push_back(box.jet(c.n));

  const BundleSpec spec(c.n);
  auto header = spec.jet_names();
  for (auto& p : spec.p_names()) header.push_back(p);
  CsvWriter csv(o.out / "legendre.csv", header);
  double worst = 0.0;
  for (const auto& j : jets) {
    const VerticalPhasePoint q = legendre_map(l, j);
    const JetPoint back = legendre_invert(l, q);
    worst = std::max(worst, (back.v - j.v).cwiseAbs().maxCoeff());
    auto r = row_of(j.t, j.y, j.v);
    r.insert(r.end(), q.p.data(), q.p.data() + q.p.size());
    csv.row(r);
  }
  Report report(o, log);
  report.check("legendre_roundtrip", worst, kRoundTripTol);
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int bracket(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  if (!c.bracket) throw InputError("bracket: section [bracket] is required by this command");
  const auto& b = *c.bracket;
  const Expression f = Expression::parse(b.f);
  const Expression g = Expression::parse(b.g);
  const BundleSpec spec(c.n);
  SampleBox box(c.seed, c.box_lo, c.box_hi);

  std::vector<std::string> names;
  std::function<std::pair<double, double>(std::vector<double>&)> eval;
  if (b.kind == "vertical") {
    names = spec.phase_names();
    eval = [&](std::vector<double>& row) {
      const auto q = box.phase(c.n);
      row = row_of(q.t, q.y, q.p);
      return std::pair{bracket_vertical(f, g, q), bracket_vertical(g, f, q)};
    };
  } else if (b.kind == "homogeneous") {
    names = spec.homogeneous_names();
    eval = [&](std::vector<double>& row) {
      const auto q = box.homogeneous(c.n);
      row = row_of(q.t, q.y, q.p);
      row.push_back(q.p0);
      return std::pair{bracket_homogeneous(f, g, q), bracket_homogeneous(g, f, q)};
    };
  } else {
    names = spec.jet_names();
    const auto l = require_lagrangian(c);
    eval = [&, l](std::vector<double>& row) {
      const auto j = box.jet(c.n);
      row = row_of(j.t, j.y, j.v);
      return std::pair{bracket_lagrangian(f, g, l, j), bracket_lagrangian(g, f, l, j)};
    };
  }
  require_vars(f, names, "bracket.f");
  require_vars(g, names, "bracket.g");

  auto header = names;
  header.push_back("bracket");
  CsvWriter csv(o.out / "bracket.csv", header);
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    std::vector<double> row;
    const auto [fg, gf] = eval(row);
    worst = std::max(worst, std::abs(fg + gf));
    row.push_back(fg);
    csv.row(row);
  }
  Report report(o, log);
  report.check("bracket_antisymmetry", worst, kBracketTol);
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int check_canonical(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  std::vector<VerticalPhasePoint> points;
  SampleBox box(c.seed, c.box_lo, c.box_hi);
  for (int k = 0; k < c.samples; ++k) points.push_back(box.phase(c.n));
  Report report(o, log);
  int count = 0;
  for (const auto& t : c.transforms) {
    if (t.is_chart()) continue;
    ++count;
    const auto r = canonical_check(CanonicalTransform::parse(t.y, t.p), points);
    report.check(fmt::format("canonical[{}].momentum", t.name), r.momentum, kCanonicalTolerance);
    report.check(fmt::format("canonical[{}].position", t.name), r.position, kCanonicalTolerance);
    report.check(fmt::format("canonical[{}].mixed", t.name), r.mixed, kCanonicalTolerance);
  }
  if (count == 0) throw InputError("transform: no [transform NAME] section with y and p lists");
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int check_conservation(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  if (!c.lagrangian && !c.hamiltonian) {
    throw InputError("lagrangian/hamiltonian: at least one is required by this command");
  }
  const auto u = symmetry_of(c);
  const auto [y, w] = require_initial(c);
  Report report(o, log);
  const auto& in = c.integrator;

  if (c.lagrangian) {
    const auto l = require_lagrangian(c);
    const auto traj = integrate_lagrange(l, JetPoint{in.t0, y, w}, in.t_end, in.dt);
    CsvWriter csv(o.out / "current.csv", {"t", "current", "lie_derivative"});
    try {
      const auto r = weak_identity_residual(l, u, traj);
      for (std::size_t k = 0; k < traj.size(); ++k) {
        csv.row({traj.time(k), r.values[k], lie_derivative_L(l, u, traj.jet(k))});
      }
      report.check("current_drift", r.max_drift, kDriftTol);
      report.check("weak_identity", r.weak_identity_max, kWeakIdentityTol);
    } catch (const PreconditionError& e) {
      log << e.what() << '\n';
      report.record("weak_identity", NAN, report.tolerance(kWeakIdentityTol), false);
    }
    if (c.hamiltonian) {
      const auto h = require_hamiltonian(c);
      const auto q0 = legendre_map(l, JetPoint{in.t0, y, w});
      const auto phase = integrate_hamilton(h, q0, in.t_end, in.dt);
      double worst = 0.0;
      for (std::size_t k = 0; k < phase.size(); ++k) {
        const auto q = phase.phase(k);
        worst = std::max(worst, std::abs(hamiltonian_current(h, u, q) -
                                         symmetry_current(l, u, hamiltonian_map(h, q))));
      }
      report.check("current_equality", worst, kCurrentEqualityTol);
    }
  } else {
    const auto h = require_hamiltonian(c);
    const auto traj = integrate_hamilton(h, VerticalPhasePoint{in.t0, y, w}, in.t_end, in.dt);
    const auto values = hamiltonian_current_series(h, u, traj);
    CsvWriter csv(o.out / "current.csv", {"t", "current"});
    for (std::size_t k = 0; k < traj.size(); ++k) csv.row({traj.time(k), values[k]});
    report.check("hamiltonian_current_drift", max_drift(values), kDriftTol);
  }
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int check_association(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  const auto l = require_lagrangian(c);
  const auto h = require_hamiltonian(c);
  SampleBox box(c.seed, c.box_lo, c.box_hi);
  std::vector<JetPoint> jets;
  std::vector<VerticalPhasePoint> phases;
  for (int k = 0; k < c.samples; ++k) jets.push_back(box.jet(c.n));
  for (int k = 0; k < c.samples; ++k) phases.push_back(box.phase(c.n));
  const auto r = association_check(l, h, jets, phases);
  Report report(o, log);
  report.check("association_legendre", r.legendre, kAssociationTolerance);
  report.check("association_energy", r.energy, kAssociationTolerance);
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int check_constraints(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  const auto l = require_lagrangian(c);
  const auto h = require_hamiltonian(c);
  const auto [y, p] = require_initial(c);
  const auto& in = c.integrator;
  const ConstraintSpace space(l, h);
  const auto traj = integrate_hamilton(h, VerticalPhasePoint{in.t0, y, p}, in.t_end, in.dt);
  write_trajectory(traj, o.out / "trajectory.csv");

  Report report(o, log);
  double off = 0.0;
  double tangency = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto q = traj.phase(k);
    off = std::max(off, space.residual(q).cwiseAbs().maxCoeff());
    tangency = std::max(tangency, tangency_residual(l, h, q).cwiseAbs().maxCoeff());
  }
  report.check("constraint", off, kOnConstraintTolerance);
  report.check("tangency", tangency, kTangencyTol);
  try {
    report.check("constrained_hamilton", constrained_hamilton_residual(h, space, traj).max_residual,
                 kConstrainedTol);
  } catch (const PreconditionError& e) {
    log << e.what() << '\n';
    report.record("constrained_hamilton", NAN, report.tolerance(kConstrainedTol), false);
  }

  // Project onto Y and check the Lagrange equations with sampled derivatives.
  std::vector<Vector> ys;
  for (std::size_t k = 0; k < traj.size(); ++k) ys.push_back(traj.state(k).head(c.n));
  const auto vs = sampled_derivative(ys, traj.dt());
  const auto as = sampled_second_derivative(ys, traj.dt());
  double el = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto r = euler_lagrange_residual(l, SecondJetPoint{traj.time(k), ys[k], vs[k], as[k]});
    el = std::max(el, r.cwiseAbs().maxCoeff());
  }
  report.check("projected_euler_lagrange", el, kWeakIdentityTol);
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int rel_transform(const SystemConfig& c, const RunOptions& o, std::ostream& log) {
  if (!c.jet) throw InputError("jet: section [jet] is required by this command");
  std::vector<ChartTransform> charts;
  for (const auto& t : c.transforms) {
    if (t.is_chart()) charts.push_back(ChartTransform::parse(t.z));
  }
  if (charts.empty()) throw InputError("transform: no [transform NAME] section with a z list");
  const auto m = static_cast<Eigen::Index>(c.jet->z.size());
  SubmanifoldJet j{c.jet->z0, Eigen::Map<const Vector>(c.jet->z.data(), m),
                   Eigen::Map<const Vector>(c.jet->v.data(), m)};
  for (const auto& ch : charts) {
    if (ch.m() != m) {
      throw InputError(fmt::format("transform: chart has m = {}, jet has {}", ch.m(), m));
    }
  }

  std::vector<std::string> header{"stage", "z0"};
  for (int i = 1; i <= m; ++i) header.push_back(z_name(i));
  for (int i = 1; i <= m; ++i) header.push_back(fmt::format("v{}", i));
  CsvWriter csv(o.out / "rel.csv", header);
  auto emit = [&](int stage, const SubmanifoldJet& s) {
    auto r = row_of(s.z0, s.z, s.v);
    r.insert(r.begin(), static_cast<double>(stage));
    csv.row(r);
  };

  Report report(o, log);
  const bool inside = velocity_bound_check(j);
  SubmanifoldJet current = j;
  ChartTransform composed = ChartTransform::identity(static_cast<int>(m));
  emit(0, current);
  for (std::size_t k = 0; k < charts.size(); ++k) {
    current = transform_jet(charts[k], current);
    composed = compose(charts[k], composed);
    emit(static_cast<int>(k) + 1, current);
  }
  const SubmanifoldJet direct = transform_jet(composed, j);
  const double functorial = std::max({std::abs(direct.z0 - current.z0),
                                      (direct.z - current.z).cwiseAbs().maxCoeff(),
                                      (direct.v - current.v).cwiseAbs().maxCoeff()});
  report.check("functoriality", functorial, kFunctorialityTol);
  report.record("velocity_bound", current.v.norm(), 1.0, !inside || velocity_bound_check(current));
  if (!c.metric.empty()) {
    const Metric g = Metric::parse(c.metric);
    const auto w = normalize_to_hyperboloid(g, j);
    const auto back = project_tangent(w);
    report.check("hyperboloid_roundtrip",
                 std::max(std::abs(hyperboloid_residual(g, w)),
                          (back.v - j.v).cwiseAbs().maxCoeff()),
                 kHyperboloidTol);
  }
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

int self_test(const SystemConfig&, const RunOptions& o, std::ostream& log) {
  Report report(o, log);
  SampleBox box(12345, -1.0, 1.0);

  {
    const auto f = Expression::parse("y1*p1^2 + sin(y2)");
    const auto g = Expression::parse("exp(p2)*y1 - p1*y2");
    double anti = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto q = box.phase(2);
      anti = std::max(anti, std::abs(bracket_vertical(f, g, q) + bracket_vertical(g, f, q)));
    }
    report.check("self.bracket_antisymmetry", anti, kBracketTol);
  }
  {
    const auto l = Lagrangian::parse(1, "v1^2/2 - y1^2/2");
    const auto traj = integrate_lagrange(l, JetPoint{0.0, Vector::Constant(1, 1.0), Vector::Zero(1)},
                                         2.0 * std::numbers::pi, 1e-3);
    const auto r = weak_identity_residual(l, EventVectorField(1, EventField::zero(1)), traj);
    report.check("self.oscillator_energy_drift", r.max_drift, kDriftTol);
  }
  {
    const SubmanifoldJet j{0.0, Vector::Zero(1), Vector::Constant(1, 0.6)};
    const auto out = transform_jet(boost_transform(1, 0.5), j);
    report.check("self.boost_velocity", std::abs(out.v[0] - 1.0 / 7.0), 1e-12);
  }
  {
    const auto l = Lagrangian::parse(2, "exp(y1)*v1^2/2 + v2^2/2 + v1*v2/4");
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto j = box.jet(2);
      worst = std::max(worst, (legendre_invert(l, legendre_map(l, j)).v - j.v).cwiseAbs().maxCoeff());
    }
    report.check("self.legendre_roundtrip", worst, kRoundTripTol);
  }
  report.write(o.out / "report.jsonl");
  return report.all_pass() ? kExitPass : kExitFail;
}

using Command = int (*)(const SystemConfig&, const RunOptions&, std::ostream&);

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"simulate-lagrange", simulate_lagrange}, {"simulate-hamilton", simulate_hamilton},
      {"legendre", legendre},                   {"bracket", bracket},
      {"check-canonical", check_canonical},     {"check-conservation", check_conservation},
      {"check-association", check_association}, {"check-constraints", check_constraints},
      {"rel-transform", rel_transform},         {"self-test", self_test},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

int run_command(const std::string& command, const SystemConfig& config, const RunOptions& options,
                std::ostream& log) {
  const auto it = commands().find(command);
  if (it == commands().end()) {
    log << fmt::format("error: unknown command '{}'\n", command);
    return kExitInput;
  }
  try {
    std::error_code ec;
    fs::create_directories(options.out, ec);
    if (ec) throw InputError(fmt::format("--out: cannot create '{}'", options.out.string()));
    return it->second(config, options, log);
  } catch (const InputError& e) {
    log << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace jetmech
