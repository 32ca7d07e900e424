#include <cmath>

#include "doctest.h"
#include "jetmech/error.hpp"
#include "jetmech/poisson.hpp"
#include "jetmech/sampling.hpp"
#include "jetmech/variational.hpp"
#include "support/random_expr.hpp"

using namespace jetmech;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Expression ex(std::string_view s) { return Expression::parse(s); }

VerticalPhasePoint phase_point(double t, Vector y, Vector p) { return {t, std::move(y), std::move(p)}; }

double vertical_pairing(const VerticalTangent& x, const Expression& g, const VerticalPhasePoint& q) {
  const int n = static_cast<int>(q.y.size());
  const BundleSpec s(n);
  const Bindings b = to_bindings(q);
  return x.dy.dot(g.gradient(s.y_names(), b)) + x.dp.dot(g.gradient(s.p_names(), b));
}

}  // namespace

TEST_CASE("homogeneous bracket examples") {
  const HomogeneousPhasePoint q{2.0, vec({3.0}), vec({5.0}), 7.0};
  CHECK(bracket_homogeneous(ex("p0"), ex("t"), q) == 1.0);
  CHECK(bracket_homogeneous(ex("p1"), ex("y1"), q) == 1.0);
  CHECK(bracket_homogeneous(ex("y1"), ex("p1"), q) == -1.0);
  // y1 p1 {p0,t} + p0 t {y1,p1} = 15 - 14
  const double expected = 3.0 * 5.0 * 1.0 + 7.0 * 2.0 * -1.0;
  CHECK(bracket_homogeneous(ex("p0*y1"), ex("t*p1"), q) == expected);
}

TEST_CASE("vertical bracket examples") {
  const VerticalPhasePoint q = phase_point(0.3, vec({1.0, 3.0}), vec({5.0, 7.0}));
  CHECK(bracket_vertical(ex("p1"), ex("y1"), q) == 1.0);
  CHECK(bracket_vertical(ex("y1"), ex("p1"), q) == -1.0);
  CHECK(bracket_vertical(ex("y1"), ex("y2"), q) == 0.0);
  CHECK(bracket_vertical(ex("y1"), ex("p2"), q) == 0.0);
  // p1 {y2, p2}
  CHECK(bracket_vertical(ex("p1*y2"), ex("p2"), q) == 5.0 * -1.0);
  CHECK_THROWS_AS(bracket_vertical(ex("p0"), ex("y1"), q), InputError);
}

TEST_CASE("hamiltonian vector field examples") {
  const VerticalPhasePoint q = phase_point(0.0, vec({1.0, 0.0}), vec({2.0, 0.0}));
  auto x = hamiltonian_vector_field(ex("p1"), q);
  CHECK(x.dy == vec({1.0, 0.0}));
  CHECK(x.dp.isZero(0.0));
  CHECK(x.dt == 0);
  x = hamiltonian_vector_field(ex("y1"), q);
  CHECK(x.dy.isZero(0.0));
  CHECK(x.dp == vec({-1.0, 0.0}));

  const VerticalPhasePoint r = phase_point(0.0, vec({1.0}), vec({2.0}));
  x = hamiltonian_vector_field(ex("(p1^2 + y1^2)/2"), r);
  CHECK(x.dy[0] == 2.0);
  CHECK(x.dp[0] == -1.0);
}

TEST_CASE("lagrangian bracket examples") {
  const Lagrangian free2 = Lagrangian::parse(2, "(v1^2 + v2^2)/2");
  const JetPoint j{0.1, vec({0.4, -0.3}), vec({1.5, 2.5})};
  CHECK(bracket_lagrangian(ex("v1"), ex("y1"), free2, j) == 1.0);
  CHECK(bracket_lagrangian(ex("y1"), ex("y2"), free2, j) == 0.0);
  CHECK(bracket_lagrangian(ex("y1"), ex("y2"), Lagrangian::parse(2, "exp(y1)*v1^2/2 + v2^2*(2 + y2^2)"),
                           j) == 0.0);

  const Lagrangian free1 = Lagrangian::parse(1, "v1^2/2");
  const JetPoint j1{0.0, vec({0.2}), vec({0.7})};
  const JetTangent x = lagrangian_hamiltonian_vector_field(ex("v1"), free1, j1);
  CHECK(x.dy[0] == -1.0);
  CHECK(x.dv[0] == 0.0);
  const JetTangent zero = lagrangian_hamiltonian_vector_field(ex("4.5"), free1, j1);
  CHECK(zero.dy[0] == 0.0);
  CHECK(zero.dv[0] == 0.0);

  // curl term: L = |v|²/2 + y1 v2 has ∂_1π_2 - ∂_2π_1 = 1
  const Lagrangian magnetic = Lagrangian::parse(2, "(v1^2 + v2^2)/2 + y1*v2");
  CHECK(bracket_lagrangian(ex("v2"), ex("v1"), magnetic, j) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(bracket_lagrangian(ex("v1"), ex("y1"), Lagrangian::parse(2, "v1^2/2"), j),
                  SingularLagrangian);
}

TEST_CASE("evolution derivative examples") {
  const VerticalPhasePoint q = phase_point(0.5, vec({1.0}), vec({3.0}));
  CHECK(evolution_derivative(HamiltonianForm::parse(1, "p1^2/2"), ex("y1"), q) == 3.0);
  CHECK(evolution_derivative(HamiltonianForm::parse(1, "sin(t*y1)*p1^3"), ex("t"), q) == 1.0);

  const HamiltonianForm osc = HamiltonianForm::parse(1, "(p1^2 + y1^2)/2");
  SampleBox box(3, -2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    CHECK(std::abs(evolution_derivative(osc, osc.expression(), box.phase(1))) <= 1e-15);
  }

  const HamiltonianForm h = HamiltonianForm::parse(1, "p1");
  CHECK(evolution_derivative(h, ex("y1"), q) == 1.0);
  CHECK(evolution_derivative_split(h, ReferenceFrame::parse({"1"}), ex("y1"), q) == 1.0);
  CHECK(evolution_derivative_split(osc, ReferenceFrame::at_rest(1), ex("y1*p1 + t"), q) ==
        doctest::Approx(evolution_derivative(osc, ex("y1*p1 + t"), q)).epsilon(1e-15));
}

TEST_CASE("bracket axioms at random points") {
  const int n = 2;
  const BundleSpec s(n);
  testing::ExpressionGenerator vertical(101, s.phase_names());
  testing::ExpressionGenerator homogeneous(202, s.homogeneous_names());
  SampleBox box(303, -1.0, 1.0);
  double anti = 0.0, leibniz = 0.0, jacobi = 0.0, link = 0.0;
  for (int k = 0; k < 30; ++k) {
    const Expression f = vertical.smooth(3), g = vertical.smooth(3), h = vertical.smooth(3);
    const VerticalPhasePoint q = box.phase(n);
    anti = std::max(anti, std::abs(bracket_vertical(f, g, q) + bracket_vertical(g, f, q)));
    leibniz = std::max(leibniz, std::abs(bracket_vertical(f, g * h, q) -
                                         bracket_vertical(f, g, q) * h.evaluate(to_bindings(q)) -
                                         g.evaluate(to_bindings(q)) * bracket_vertical(f, h, q)));
    jacobi = std::max(jacobi, std::abs(jacobi_vertical(f, g, h, q)));
    link = std::max(link, std::abs(bracket_vertical(f, g, q) -
                                   vertical_pairing(hamiltonian_vector_field(f, q), g, q)));
    CHECK(hamiltonian_vector_field(f, q).dt == 0);

    const Expression a = homogeneous.smooth(3), b = homogeneous.smooth(3), c = homogeneous.smooth(3);
    const HomogeneousPhasePoint r = box.homogeneous(n);
    const Bindings rb = to_bindings(r);
    anti = std::max(anti, std::abs(bracket_homogeneous(a, b, r) + bracket_homogeneous(b, a, r)));
    leibniz = std::max(leibniz, std::abs(bracket_homogeneous(a, b * c, r) -
                                         bracket_homogeneous(a, b, r) * c.evaluate(rb) -
                                         b.evaluate(rb) * bracket_homogeneous(a, c, r)));
    jacobi = std::max(jacobi, std::abs(jacobi_homogeneous(a, b, c, r)));

    // p0-independent functions: both brackets coincide exactly
    CHECK(bracket_homogeneous(f, g, HomogeneousPhasePoint{q.t, q.y, q.p, box.next()}) ==
          bracket_vertical(f, g, q));
  }
  CHECK(anti <= 1e-12);
  CHECK(leibniz <= 1e-9);
  CHECK(jacobi <= 1e-7);
  CHECK(link <= 1e-12);
}

TEST_CASE("lagrangian bracket matches the vertical bracket through the Legendre map") {
  const JetPoint j{0.3, vec({0.4, -0.6}), vec({0.2, 0.9})};
  // L = |v|²/2 + y1 v2: π = (v1, v2 + y1), so v = (p1, p2 - y1)
  const Lagrangian magnetic = Lagrangian::parse(2, "(v1^2 + v2^2)/2 + y1*v2");
  const std::map<std::string, Expression, std::less<>> v_of_p{{"v1", ex("p1")}, {"v2", ex("p2 - y1")}};
  const Lagrangian free2 = Lagrangian::parse(2, "(v1^2 + v2^2)/2");
  const std::map<std::string, Expression, std::less<>> v_free{{"v1", ex("p1")}, {"v2", ex("p2")}};

  testing::ExpressionGenerator gen(77, BundleSpec(2).jet_names());
  SampleBox box(78, -1.0, 1.0);
  double worst = 0.0, pairing = 0.0, anti = 0.0, jacobi = 0.0;
  for (int k = 0; k < 25; ++k) {
    const Expression f = gen.smooth(3), g = gen.smooth(3), h = gen.smooth(3);
    const JetPoint x = box.jet(2);
    for (const auto& [l, sub] : {std::pair{&magnetic, &v_of_p}, std::pair{&free2, &v_free}}) {
      const double lb = bracket_lagrangian(f, g, *l, x);
      const double vb = bracket_vertical(f.substitute(*sub), g.substitute(*sub), legendre_map(*l, x));
      worst = std::max(worst, std::abs(lb - vb));

      const JetTangent th = lagrangian_hamiltonian_vector_field(g, *l, x);
      const Bindings b = to_bindings(x);
      const double df = th.dy.dot(f.gradient(BundleSpec(2).y_names(), b)) +
                        th.dv.dot(f.gradient(BundleSpec(2).v_names(), b));
      pairing = std::max(pairing, std::abs(lb - df));
      anti = std::max(anti, std::abs(lb + bracket_lagrangian(g, f, *l, x)));
      jacobi = std::max(jacobi, std::abs(jacobi_lagrangian(f, g, h, *l, x)));
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(pairing <= 1e-9);
  CHECK(anti <= 1e-12);
  CHECK(jacobi <= 1e-7);
}

TEST_CASE("frame split evolution derivative equals the raw one") {
  const int n = 2;
  const BundleSpec s(n);
  testing::ExpressionGenerator phase(9, s.phase_names());
  testing::ExpressionGenerator event(10, s.event_names());
  SampleBox box(11, -1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const HamiltonianForm h(n, phase.smooth(3));
    const ReferenceFrame frame(EventField({event.smooth(3), event.smooth(3)}));
    const Expression f = phase.smooth(3);
    const VerticalPhasePoint q = box.phase(n);
    worst = std::max(worst, std::abs(evolution_derivative_split(h, frame, f, q) -
                                     evolution_derivative(h, f, q)));
  }
  CHECK(worst <= 1e-9);
}
