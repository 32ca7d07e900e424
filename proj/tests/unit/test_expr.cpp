#include <cmath>

#include "doctest.h"
#include "jetmech/error.hpp"
#include "jetmech/expr.hpp"
#include "jetmech/finite_difference.hpp"
#include "support/random_expr.hpp"

using namespace jetmech;

namespace {

std::vector<std::string> names(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expression e = Expression::parse("p1^2/2");
  CHECK(e == Expression::binary(BinaryOp::kDiv,
                                pow(Expression::variable("p1"), Expression::constant(2)),
                                Expression::constant(2)));
  CHECK(e.free_vars() == names({"p1"}));

  const Expression f = Expression::parse("sin(t)*y1 + 3");
  CHECK(f.root().binary_op == BinaryOp::kAdd);
  CHECK(f.root().lhs->binary_op == BinaryOp::kMul);
  CHECK(f.free_vars() == names({"t", "y1"}));
}

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("2^3^2").evaluate({}) == 512.0);
  CHECK(Expression::parse("-2^2").evaluate({}) == -4.0);
  CHECK(Expression::parse("2^-1").evaluate({}) == 0.5);
  CHECK(Expression::parse("8/4/2").evaluate({}) == 1.0);
  CHECK(Expression::parse("1 - 2 - 3").evaluate({}) == -4.0);
  CHECK(Expression::parse("1.5e1 + .5").evaluate({}) == 15.5);
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    Expression::parse("y1 +");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(Expression::parse(""), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(y1)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(y1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("y1 y2"), ParseError);
}

TEST_CASE("evaluate") {
  CHECK(Expression::parse("p1^2/2").evaluate({{"p1", 2.0}}) == 2.0);
  CHECK(Expression::parse("sin(t)").evaluate({{"t", 0.0}}) == 0.0);
  CHECK_THROWS_AS(Expression::parse("log(y1)").evaluate({{"y1", 0.0}}), DomainError);
  CHECK_THROWS_AS(Expression::parse("sqrt(y1)").evaluate({{"y1", -1.0}}), DomainError);
  CHECK_THROWS_AS(Expression::parse("y1^0.5").evaluate({{"y1", -1.0}}), DomainError);
  CHECK(Expression::parse("y1^3").evaluate({{"y1", -2.0}}) == -8.0);
  CHECK_THROWS_AS(Expression::parse("y1 + y2").evaluate({{"y1", 1.0}}), UnboundVariable);
}

TEST_CASE("gradient examples") {
  const Bindings b{{"y1", 3.0}, {"p1", 5.0}};
  const Vector g = Expression::parse("p1*y1").gradient(names({"y1", "p1"}), b);
  CHECK(g[0] == 5.0);
  CHECK(g[1] == 3.0);

  CHECK(Expression::parse("y1^2/2").gradient(names({"y1"}), {{"y1", 4.0}})[0] == 4.0);

  const Expression e = Expression::parse("sin(t)*y1");
  const Bindings c{{"t", 0.7}, {"y1", 2.0}};
  const auto vars = names({"t", "y1"});
  const Vector ad = e.gradient(vars, c);
  const Vector fd = numeric_gradient(e, vars, c);
  for (int i = 0; i < 2; ++i) CHECK(rel_err(ad[i], fd[i]) <= 1e-6);
  CHECK(ad[0] == doctest::Approx(2.0 * std::cos(0.7)).epsilon(1e-15));
  CHECK(ad[1] == doctest::Approx(std::sin(0.7)).epsilon(1e-15));

  const Vector zero = Expression::parse("3*2").gradient(vars, c);
  CHECK(zero.isZero(0.0));
  CHECK(Expression::parse("y1").gradient(names({"y1", "q"}), c)[1] == 0.0);
}

TEST_CASE("hessian examples") {
  CHECK(Expression::parse("v1^2/2").hessian(names({"v1"}), {{"v1", -7.3}})(0, 0) == 1.0);

  const Matrix h = Expression::parse("v1*v2").hessian(names({"v1", "v2"}), {{"v1", 1.0}, {"v2", 2.0}});
  CHECK(h(0, 0) == 0.0);
  CHECK(h(0, 1) == 1.0);
  CHECK(h(1, 0) == 1.0);
  CHECK(h(1, 1) == 0.0);

  const Expression e = Expression::parse("exp(v1)*v2^2");
  const auto vars = names({"v1", "v2"});
  const Bindings b{{"v1", 0.0}, {"v2", 1.0}};
  const Matrix ad = e.hessian(vars, b);
  const Matrix fd = numeric_hessian(e, vars, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(rel_err(ad(i, j), fd(i, j)) <= 1e-4);
  CHECK(ad(0, 0) == 1.0);
  CHECK(ad(0, 1) == 2.0);
  CHECK(ad(1, 1) == 2.0);
}

TEST_CASE("print and parse round-trip") {
  testing::ExpressionGenerator gen(11, names({"t", "y1", "y2", "p1", "v_1"}));
  for (int k = 0; k < 300; ++k) {
    const std::string s = gen.any(5).to_string();
    const Expression once = Expression::parse(s);
    const Expression twice = Expression::parse(once.to_string());
    CHECK_MESSAGE(once == twice, s);
  }
}

TEST_CASE("automatic derivatives agree with finite differences") {
  const auto vars = names({"t", "y1", "y2", "p1"});
  testing::ExpressionGenerator gen(2024, vars);
  double worst_grad = 0.0;
  double worst_hess = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Expression e = gen.smooth(5);
    Bindings b;
    for (const auto& v : vars) b[v] = gen.box().next();
    const SecondOrder d = e.derivatives(vars, b);
    const Vector g = numeric_gradient(e, vars, b);
    const Matrix h = numeric_hessian(e, vars, b);
    CHECK(d.value == doctest::Approx(e.evaluate(b)).epsilon(1e-14));
    CHECK((d.gradient - e.gradient(vars, b)).norm() <= 1e-13 * (1.0 + g.norm()));
    for (int i = 0; i < 4; ++i) {
      worst_grad = std::max(worst_grad, rel_err(d.gradient[i], g[i]));
      for (int j = 0; j < 4; ++j) {
        worst_hess = std::max(worst_hess, rel_err(d.hessian(i, j), h(i, j)));
        CHECK(d.hessian(i, j) == d.hessian(j, i));
      }
    }
  }
  CHECK(worst_grad <= 1e-6);
  CHECK(worst_hess <= 1e-4);
}

TEST_CASE("substitute and rename") {
  const Expression e = Expression::parse("y1*p1 + t");
  const Expression s = e.substitute({{"y1", Expression::parse("2*t")}, {"t", Expression::parse("y1")}});
  CHECK(s.evaluate({{"t", 3.0}, {"y1", 5.0}, {"p1", 7.0}}) == 2 * 3.0 * 7.0 + 5.0);
  const Expression r = e.rename({{"p1", "y2"}});
  CHECK(r.free_vars() == names({"t", "y1", "y2"}));
  CHECK(r.depends_on("y2"));
  CHECK_FALSE(r.depends_on("p1"));
}
