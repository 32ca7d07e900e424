#include "jetmech/finite_difference.hpp"

#include <algorithm>
#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

namespace {

double& slot(Bindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw UnboundVariable(name);
  return it->second;
}

}  // namespace

Vector numeric_gradient(const Expression& e, std::span<const std::string> vars,
                        const Bindings& b, double rel_step) {
  Vector g(static_cast<Eigen::Index>(vars.size()));
  Bindings work = b;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!e.depends_on(vars[i])) {
      g[static_cast<Eigen::Index>(i)] = 0.0;
      continue;
    }
    double& x = slot(work, vars[i]);
    const double x0 = x;
    const double h = rel_step * std::max(1.0, std::abs(x0));
    x = x0 + h;
    const double fp = e.evaluate(work);
    x = x0 - h;
    const double fm = e.evaluate(work);
    x = x0;
    g[static_cast<Eigen::Index>(i)] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix numeric_hessian(const Expression& e, std::span<const std::string> vars,
                       const Bindings& b, double rel_step) {
  const auto n = static_cast<Eigen::Index>(vars.size());
  Matrix h = Matrix::Zero(n, n);
  Bindings work = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!e.depends_on(vars[i])) continue;
    for (Eigen::Index j = i; j < n; ++j) {
      if (!e.depends_on(vars[j])) continue;
      double& xi = slot(work, vars[i]);
      const double xi0 = xi;
      const double hi = rel_step * std::max(1.0, std::abs(xi0));
      if (i == j) {
        const double f0 = e.evaluate(work);
        xi = xi0 + hi;
        const double fp = e.evaluate(work);
        xi = xi0 - hi;
        const double fm = e.evaluate(work);
        xi = xi0;
        h(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        continue;
      }
      double& xj = slot(work, vars[j]);
      const double xj0 = xj;
      const double hj = rel_step * std::max(1.0, std::abs(xj0));
      auto at = [&](double si, double sj) {
        xi = xi0 + si * hi;
        xj = xj0 + sj * hj;
        return e.evaluate(work);
      };
      const double value = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
      xi = xi0;
      xj = xj0;
      h(i, j) = value;
      h(j, i) = value;
    }
  }
  return h;
}

}  // namespace jetmech
