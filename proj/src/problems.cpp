#include "ppflow/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ppflow {

double noise_coefficient(NoiseProfile profile, int j, int J) {
  if (j < 1 || j > J) throw std::out_of_range("noise index outside 1..J");
  if (profile == NoiseProfile::Alternating) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    return sign * 4.0 * ((j + 1) / 2) / J;
  }
  if (J < 2) return 0.0;
  return static_cast<double>(2 * j - 1 - J) / (J / 2);
}

Vec2 ManufacturedSolution::velocity(Point2 x, double t) {
  const double a = 1.0 + std::exp(t);
  return {std::cos(x.y) + a * std::sin(x.y), std::sin(x.x) + a * std::cos(x.x)};
}

std::array<double, 4> ManufacturedSolution::velocity_gradient(Point2 x, double t) {
  const double a = 1.0 + std::exp(t);
  return {0.0, -std::sin(x.y) + a * std::cos(x.y), std::cos(x.x) - a * std::sin(x.x), 0.0};
}

double ManufacturedSolution::pressure(Point2 x, double t) { return std::sin(x.x + x.y) * (1.0 + std::exp(t)); }

Vec2 ManufacturedSolution::forcing(Point2 x, double t, double s, double nu) {
  const double et = std::exp(t);
  const Vec2 u = velocity(x, t);
  const auto g = velocity_gradient(x, t);
  const double dp = (1.0 + et) * std::cos(x.x + x.y);
  // Each component of u satisfies -Laplace(u_i) = u_i.
  return {s * et * std::sin(x.y) + s * s * (u.x * g[0] + u.y * g[1]) + nu * s * u.x + s * dp,
          s * et * std::cos(x.x) + s * s * (u.x * g[2] + u.y * g[3]) + nu * s * u.y + s * dp};
}

double realization_scale(const ManufacturedSetup& setup, int j) {
  const int J = static_cast<int>(setup.viscosities.size());
  return 1.0 + noise_coefficient(setup.profile, j + 1, J) * setup.epsilon;
}

EnsembleProblem manufactured_problem(std::shared_ptr<const TriMesh> mesh, const ManufacturedSetup& setup) {
  EnsembleProblem p;
  p.J = static_cast<int>(setup.viscosities.size());
  if (p.J < 1) throw std::invalid_argument("manufactured problem needs at least one viscosity");
  const size_t npts = static_cast<size_t>(mesh->n_triangles() * default_nq());
  for (double nu : setup.viscosities) p.viscosity.emplace_back(npts, nu);
  std::vector<double> scale(p.J);
  for (int j = 0; j < p.J; ++j) scale[j] = realization_scale(setup, j);
  const auto nus = setup.viscosities;
  p.mesh = std::move(mesh);
  p.dirichlet = [scale](int j, Point2 x, double t) {
    const Vec2 u = ManufacturedSolution::velocity(x, t);
    return Vec2{scale[j] * u.x, scale[j] * u.y};
  };
  p.initial = p.dirichlet;
  p.forcing = [scale, nus](int j, Point2 x, double t) { return ManufacturedSolution::forcing(x, t, scale[j], nus[j]); };
  return p;
}

std::vector<QuadField> collocation_viscosities(const TriMesh& mesh, const RandomViscosityField& field,
                                               const SparseGridRule& rule) {
  if (rule.dimension != field.sample_dimension())
    throw std::invalid_argument("sparse grid dimension does not match the viscosity field");
  const auto pts = quadrature_points(mesh);
  std::vector<QuadField> out;
  for (const auto& y : rule.points) {
    check_positive(field, pts, y);
    QuadField f;
    f.reserve(pts.size());
    for (const Point2& x : pts) f.push_back(kl_viscosity(field, x, y));
    out.push_back(std::move(f));
  }
  return out;
}

Vec2 taylor_green_velocity(Point2 x, double t, double nu) {
  const double d = std::exp(-2.0 * nu * t);
  return {d * std::sin(x.x) * std::cos(x.y), -d * std::cos(x.x) * std::sin(x.y)};
}

EnsembleProblem taylor_green_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                                     const SparseGridRule& rule) {
  EnsembleProblem p;
  p.viscosity = collocation_viscosities(*mesh, field, rule);
  p.J = rule.size();
  p.mesh = std::move(mesh);
  const double nu = field.scale * field.c;
  p.dirichlet = [nu](int, Point2 x, double t) { return taylor_green_velocity(x, t, nu); };
  p.initial = p.dirichlet;
  return p;
}

Vec2 channel_profile(Point2 x) { return {x.y * (10.0 - x.y) / 25.0, 0.0}; }

EnsembleProblem channel_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                                const SparseGridRule& rule, double epsilon) {
  EnsembleProblem p;
  p.viscosity = collocation_viscosities(*mesh, field, rule);
  p.J = rule.size();
  std::vector<double> scale(p.J);
  for (int j = 0; j < p.J; ++j) scale[j] = 1.0 + noise_coefficient(NoiseProfile::Linear, j + 1, p.J) * epsilon;
  p.mesh = std::move(mesh);
  constexpr double tol = 1e-12;
  p.dirichlet = [scale](int j, Point2 x, double) {
    if (std::abs(x.x) < tol || std::abs(x.x - 40.0) < tol) {
      const Vec2 g = channel_profile(x);
      return Vec2{scale[j] * g.x, 0.0};
    }
    return Vec2{};
  };
  p.initial = [scale](int j, Point2 x, double) {
    const Vec2 g = channel_profile(x);
    return Vec2{scale[j] * g.x, 0.0};
  };
  return p;
}

EnsembleProblem cavity_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                               const SparseGridRule& rule, double epsilon) {
  EnsembleProblem p;
  p.viscosity = collocation_viscosities(*mesh, field, rule);
  p.J = rule.size();
  std::vector<double> scale(p.J);
  for (int j = 0; j < p.J; ++j) scale[j] = 1.0 + noise_coefficient(NoiseProfile::Linear, j + 1, p.J) * epsilon;
  p.mesh = std::move(mesh);
  p.dirichlet = [scale](int j, Point2 x, double) {
    if (std::abs(x.y - 1.0) < 1e-12) {
      const double s = 1.0 - x.x * x.x;
      return Vec2{scale[j] * s * s, 0.0};
    }
    return Vec2{};
  };
  p.initial = [](int, Point2, double) { return Vec2{}; };
  return p;
}

namespace {

std::shared_ptr<const TriMesh> finish(TriMesh m, bool barycentric) {
  return std::make_shared<const TriMesh>(barycentric ? barycentric_refine(m) : std::move(m));
}

}  // namespace

std::shared_ptr<const TriMesh> unit_square_mesh(int n, bool barycentric) {
  return finish(structured_rect_mesh({0.0, 1.0}, {0.0, 1.0}, n, n), barycentric);
}

std::shared_ptr<const TriMesh> taylor_green_mesh(int n, bool barycentric) {
  return finish(structured_rect_mesh({0.0, std::numbers::pi}, {0.0, std::numbers::pi}, n, n,
                                     SideTags::all(BoundaryTag::wall)),
                barycentric);
}

std::shared_ptr<const TriMesh> channel_mesh(int nx, int ny, bool barycentric) {
  SideTags tags{BoundaryTag::inlet, BoundaryTag::outlet, BoundaryTag::wall, BoundaryTag::wall};
  TriMesh m = structured_rect_mesh({0.0, 40.0}, {0.0, 10.0}, nx, ny, tags);
  return finish(remove_step(m, Rect{5.0, 6.0, 0.0, 1.0}), barycentric);
}

std::shared_ptr<const TriMesh> cavity_mesh(int n, bool barycentric) {
  SideTags tags{BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::lid};
  return finish(structured_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, n, n, tags), barycentric);
}

}  // namespace ppflow
