#include "jetmech/relativistic.hpp"

#include <fmt/format.h>

#include <cmath>

#include "jetmech/error.hpp"
#include "jetmech/systems.hpp"

namespace jetmech {

std::string z_name(int mu) { return fmt::format("z{}", mu); }

namespace {

std::vector<std::string> z_names(int m) {
  std::vector<std::string> out;
  for (int mu = 0; mu <= m; ++mu) out.push_back(z_name(mu));
  return out;
}

Bindings z_bindings(double z0, const Vector& z) {
  Bindings b{{z_name(0), z0}};
  for (Eigen::Index i = 0; i < z.size(); ++i) b[z_name(static_cast<int>(i) + 1)] = z[i];
  return b;
}

void require_m(int m, const char* what) {
  if (m < 1) throw InputError(fmt::format("{}: need at least one spatial coordinate", what));
}

}  // namespace

ChartTransform::ChartTransform(std::vector<Expression> maps) : maps_(std::move(maps)) {
  require_m(m(), "chart transform");
  const auto names = z_names(m());
  for (std::size_t mu = 0; mu < maps_.size(); ++mu) {
    require_vars(maps_[mu], names, fmt::format("chart component z~{}", mu));
  }
}

ChartTransform ChartTransform::parse(const std::vector<std::string>& maps) {
  return ChartTransform(parse_all(maps));
}

ChartTransform ChartTransform::identity(int m) {
  require_m(m, "identity chart");
  std::vector<Expression> maps;
  for (const auto& name : z_names(m)) maps.push_back(Expression::variable(name));
  return ChartTransform(std::move(maps));
}

Vector ChartTransform::apply(double z0, const Vector& z) const {
  const Bindings b = z_bindings(z0, z);
  Vector out(m() + 1);
  for (int mu = 0; mu <= m(); ++mu) out[mu] = maps_[static_cast<std::size_t>(mu)].evaluate(b);
  return out;
}

Matrix ChartTransform::jacobian(double z0, const Vector& z) const {
  const Bindings b = z_bindings(z0, z);
  const auto names = z_names(m());
  Matrix out(m() + 1, m() + 1);
  for (int mu = 0; mu <= m(); ++mu) {
    out.row(mu) = maps_[static_cast<std::size_t>(mu)].gradient(names, b).transpose();
  }
  return out;
}

ChartTransform compose(const ChartTransform& outer, const ChartTransform& inner) {
  if (outer.m() != inner.m()) throw InputError("cannot compose charts of different dimension");
  std::map<std::string, Expression, std::less<>> replacements;
  for (int mu = 0; mu <= inner.m(); ++mu) {
    replacements[z_name(mu)] = inner.maps()[static_cast<std::size_t>(mu)];
  }
  std::vector<Expression> maps;
  for (const auto& e : outer.maps()) maps.push_back(e.substitute(replacements));
  return ChartTransform(std::move(maps));
}

ChartTransform exchange_transform(int m, int a, int b) {
  require_m(m, "exchange");
  if (a < 0 || b < 0 || a > m || b > m) {
    throw InputError(fmt::format("exchange indices {} and {} out of range 0..{}", a, b, m));
  }
  std::vector<Expression> maps;
  for (int mu = 0; mu <= m; ++mu) {
    const int src = mu == a ? b : mu == b ? a : mu;
    maps.push_back(Expression::variable(z_name(src)));
  }
  return ChartTransform(std::move(maps));
}

std::vector<ChartTransform> time_exchanges(int m) {
  if (m < 1 || m > 3) throw InputError(fmt::format("exchange library covers 1 <= m <= 3, got {}", m));
  std::vector<ChartTransform> out;
  for (int k = 1; k <= m; ++k) out.push_back(exchange_transform(m, 0, k));
  return out;
}

ChartTransform boost_transform(int m, double beta, int axis) {
  require_m(m, "boost");
  if (!(std::abs(beta) < 1.0)) throw InputError(fmt::format("boost needs |beta| < 1, got {}", beta));
  if (axis < 1 || axis > m) throw InputError(fmt::format("boost axis {} out of range", axis));
  const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
  const Expression t = Expression::variable(z_name(0));
  const Expression x = Expression::variable(z_name(axis));
  std::vector<Expression> maps;
  for (int mu = 0; mu <= m; ++mu) maps.push_back(Expression::variable(z_name(mu)));
  maps[0] = gamma * (t - beta * x);
  maps[static_cast<std::size_t>(axis)] = gamma * (x - beta * t);
  return ChartTransform(std::move(maps));
}

SubmanifoldJet transform_jet(const ChartTransform& tr, const SubmanifoldJet& j) {
  const int m = tr.m();
  if (j.z.size() != m || j.v.size() != m) {
    throw InputError(fmt::format("jet has dimension {}, chart expects {}", j.z.size(), m));
  }
  const Matrix jac = tr.jacobian(j.z0, j.z);
  Vector tangent(m + 1);
  tangent << 1.0, j.v;
  const Vector image = jac * tangent;
  if (!(std::abs(image[0]) >= kChartBoundaryThreshold)) {
    throw ChartBoundary(
        fmt::format("velocity leaves the chart (time component {:.3g})", image[0]));
  }
  const Vector point = tr.apply(j.z0, j.z);
  return SubmanifoldJet{point[0], point.tail(m), image.tail(m) / image[0]};
}

SubmanifoldJet project_tangent(const TangentVector& w) {
  if (w.z.size() != w.dz.size()) throw InputError("tangent vector sizes differ");
  if (!(std::abs(w.dz0) >= kInfinityThreshold)) {
    throw AtInfinity("tangent vector has no time component");
  }
  return SubmanifoldJet{w.z0, w.z, w.dz / w.dz0};
}

Metric::Metric(const std::vector<std::vector<Expression>>& rows)
    : dim_(static_cast<int>(rows.size())) {
  require_m(dim_ - 1, "metric");
  const auto names = z_names(dim_ - 1);
  for (int r = 0; r < dim_; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != dim_) {
      throw InputError(fmt::format("metric row {} has {} entries, expected {}", r,
                                   rows[static_cast<std::size_t>(r)].size(), dim_));
    }
  }
  for (int r = 0; r < dim_; ++r) {
    for (int c = r; c < dim_; ++c) {
      const auto& upper = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      const auto& lower = rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
      if (!(upper == lower)) {
        throw InputError(fmt::format("metric is not symmetric at ({}, {})", r, c));
      }
      require_vars(upper, names, fmt::format("metric entry ({}, {})", r, c));
      upper_.push_back(upper);
    }
  }
}

Metric Metric::parse(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Expression>> parsed;
  for (const auto& row : rows) parsed.push_back(parse_all(row));
  return Metric(parsed);
}

Metric Metric::minkowski(int m) {
  std::vector<std::vector<Expression>> rows(static_cast<std::size_t>(m + 1),
                                            std::vector<Expression>(static_cast<std::size_t>(m + 1)));
  for (int mu = 0; mu <= m; ++mu) {
    rows[static_cast<std::size_t>(mu)][static_cast<std::size_t>(mu)] =
        Expression::constant(mu == 0 ? 1.0 : -1.0);
  }
  return Metric(rows);
}

Matrix Metric::at(double z0, const Vector& z) const {
  if (z.size() != m()) throw InputError("point and metric dimensions differ");
  const Bindings b = z_bindings(z0, z);
  Matrix g(dim_, dim_);
  std::size_t k = 0;
  for (int r = 0; r < dim_; ++r) {
    for (int c = r; c < dim_; ++c) {
      g(r, c) = g(c, r) = upper_[k++].evaluate(b);
    }
  }
  return g;
}

double hyperboloid_residual(const Metric& g, const TangentVector& w) {
  Vector dz(w.dz.size() + 1);
  dz << w.dz0, w.dz;
  return dz.dot(g.at(w.z0, w.z) * dz) - 1.0;
}

TangentVector normalize_to_hyperboloid(const Metric& g, const SubmanifoldJet& j, int branch) {
  if (branch != 1 && branch != -1) throw InputError("hyperboloid branch must be +1 or -1");
  Vector dir(j.v.size() + 1);
  dir << 1.0, j.v;
  const double quad = dir.dot(g.at(j.z0, j.z) * dir);
  if (!(quad > 0.0)) {
    throw SpacelikeDirection(fmt::format("direction is not timelike (g(u,u) = {:.6g})", quad));
  }
  const double dz0 = branch / std::sqrt(quad);
  return TangentVector{j.z0, j.z, dz0, dz0 * j.v};
}

bool velocity_bound_check(const SubmanifoldJet& j) { return j.v.squaredNorm() < 1.0; }

}  // namespace jetmech
