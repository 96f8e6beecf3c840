#include <gtest/gtest.h>

#include <cmath>

#include "ppflow/errors.hpp"
#include "ppflow/problems.hpp"
#include "support.hpp"

using namespace ppflow;
using ppflow::testing::corrected_velocity_disc;
using ppflow::testing::darcy_projection;
using ppflow::testing::rel_diff;

namespace {

EnsembleProblem rest_problem(std::shared_ptr<const TriMesh> mesh, int J) {
  EnsembleProblem p;
  p.mesh = mesh;
  p.J = J;
  for (int j = 0; j < J; ++j)
    p.viscosity.emplace_back(static_cast<size_t>(mesh->n_triangles() * default_nq()), 0.01 * (1 + 0.1 * j));
  p.dirichlet = [](int, Point2, double) { return Vec2{}; };
  p.initial = p.dirichlet;
  return p;
}

SchemeConfig config(double dt, double T, double gamma, double mu, ElementPair pair = ElementPair::TaylorHood) {
  SchemeConfig c;
  c.dt = dt;
  c.T = T;
  c.gamma = gamma;
  c.mu = mu;
  c.pair = pair;
  return c;
}

ManufacturedSetup setup(int J, double eps) {
  ManufacturedSetup s;
  s.viscosities = uniform_viscosity_samples(0.01, 0.1, J, 17);
  s.epsilon = eps;
  return s;
}

double manufactured_h1_error(const EnsembleScheme& scheme, const EnsembleState& s, int j) {
  ExactVectorField ex;
  const double t = s.time;
  ex.value = [&](Point2 x) { return ManufacturedSolution::velocity(x, t); };
  ex.gradient = [&](Point2 x) { return ManufacturedSolution::velocity_gradient(x, t); };
  const auto e = vector_error(scheme.disc().velocity, s.u(j), ex, collapsed_gauss_rule(5));
  return std::hypot(e.l2, e.h1_semi);
}

}  // namespace

TEST(SchemeConfig, StepCount) {
  EXPECT_EQ(config(0.1, 1.0, 0, 0).steps(), 10);
  EXPECT_EQ(config(1.0 / 64, 1.0, 0, 0).steps(), 64);
  EXPECT_THROW(config(0.3, 1.0, 0, 0).steps(), std::invalid_argument);
  EXPECT_THROW(config(0.0, 1.0, 0, 0).steps(), std::invalid_argument);
}

TEST(Discretization, ScottVogeliusNeedsBarycentricMesh) {
  EXPECT_THROW(Discretization(unit_square_mesh(4, false), ElementPair::ScottVogelius), std::invalid_argument);
  EXPECT_NO_THROW(Discretization(unit_square_mesh(4, true), ElementPair::ScottVogelius));
  EXPECT_THROW(SppScheme(rest_problem(unit_square_mesh(2, true), 1), config(0.1, 0.1, 1, 0, ElementPair::ScottVogelius)),
               std::invalid_argument);
}

TEST(Scheme, RejectsNonpositiveViscosity) {
  auto p = rest_problem(unit_square_mesh(2, false), 2);
  p.viscosity[1][5] = 0.0;
  EXPECT_THROW(CoupledScheme(p, config(0.1, 0.1, 0, 0)), NonpositiveViscosityError);
}

TEST(Scheme, RestStatePreserved) {
  auto mesh = unit_square_mesh(4, true);
  for (auto kind : {SchemeKind::Coupled, SchemeKind::Spp}) {
    auto scheme = make_scheme(kind, rest_problem(mesh, 3), config(0.1, 0.1, 10, 1));
    auto s = scheme->initial_state();
    scheme->step(s);
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(norm_inf(s.u(j)), 0.0);
      EXPECT_EQ(norm_inf(s.p(j)), 0.0);
    }
    EXPECT_EQ(s.step, 1);
    EXPECT_DOUBLE_EQ(s.time, 0.1);
  }
}

TEST(Scheme, IdenticalRealizationsGiveIdenticalOutputs) {
  auto mesh = unit_square_mesh(4, true);
  ManufacturedSetup st;
  st.viscosities = std::vector<double>(3, 0.01);
  st.epsilon = 0.0;
  for (auto kind : {SchemeKind::Coupled, SchemeKind::Spp}) {
    auto scheme = make_scheme(kind, manufactured_problem(mesh, st), config(0.05, 0.1, 100, 1));
    const auto r = run(*scheme);
    const auto& s = *r.final_state;
    EXPECT_EQ(s.u(0), s.u(1));
    EXPECT_EQ(s.u(0), s.u(2));
    EXPECT_EQ(s.p(0), s.p(2));
  }
}

TEST(Scheme, CoupledBackwardEulerConverges) {
  // J = 1, no noise, mu = 0, gamma = 0: refine h by 2 with a small fixed dt.
  ManufacturedSetup st;
  st.viscosities = {0.01};
  st.epsilon = 0.0;
  double prev = 0.0;
  for (int level = 0; level < 2; ++level) {
    const int n = 16 << level;
    const double dt = 0.0025;
    CoupledScheme scheme(manufactured_problem(unit_square_mesh(n, false), st), config(dt, 0.01, 0, 0));
    const auto r = run(scheme);
    const double e = manufactured_h1_error(scheme, *r.final_state, 0);
    if (level > 0) EXPECT_GT(prev / e, 3.0);
    prev = e;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Scheme, SharedMatrixAcrossRealizations) {
  auto mesh = unit_square_mesh(4, true);
  SppScheme scheme(manufactured_problem(mesh, setup(5, 0.01)), config(0.1, 0.3, 100, 1));
  auto s = scheme.initial_state();
  scheme.step(s);
  s.update_mean_fluct();
  const auto A0 = scheme.momentum_matrix(s, 0);
  for (int j = 1; j < 5; ++j) {
    const auto Aj = scheme.momentum_matrix(s, j);
    EXPECT_TRUE(Aj.same_pattern(A0));
    EXPECT_EQ(Aj.values(), A0.values());
  }
  const Factorization F(A0);
  std::vector<std::vector<double>> rhs;
  for (int j = 0; j < 5; ++j) rhs.push_back(scheme.momentum_rhs(s, j));
  const auto X = solve_multi(F, rhs);
  for (int j = 0; j < 5; ++j) EXPECT_EQ(X[j], F.solve(rhs[j]));
}

TEST(Scheme, PoissonMatrixTimeInvariant) {
  auto mesh = unit_square_mesh(4, true);
  SppScheme scheme(manufactured_problem(mesh, setup(3, 0.01)), config(0.1, 0.3, 100, 1));
  const auto before = scheme.poisson_matrix().values();
  auto s = scheme.initial_state();
  for (int n = 0; n < 3; ++n) scheme.step(s);
  EXPECT_EQ(scheme.poisson_matrix().values(), before);
  SppScheme fresh(manufactured_problem(mesh, setup(3, 0.01)), config(0.1, 0.3, 1e4, 0.5));
  EXPECT_EQ(fresh.poisson_matrix().values(), before);
}

TEST(Scheme, ProjectionIsDiscretelyDivergenceFree) {
  auto mesh = unit_square_mesh(6, true);
  SppScheme scheme(manufactured_problem(mesh, setup(4, 0.01)), config(0.1, 0.3, 10, 1));
  auto s = scheme.initial_state();
  for (int n = 0; n < 3; ++n) {
    scheme.step(s);
    for (int j = 0; j < 4; ++j) EXPECT_LE(scheme.projection_residual(s, j), 1e-9);
  }
}

TEST(Scheme, ProjectedNormMatchesDarcyVelocity) {
  auto mesh = unit_square_mesh(4, true);
  SppScheme scheme(manufactured_problem(mesh, setup(2, 0.01)), config(0.1, 0.1, 10, 1));
  auto s = scheme.initial_state();
  scheme.step(s);
  const auto& d = scheme.disc();
  const FeSpace Y(mesh, FeKind::vecP2disc);
  const auto ut = corrected_velocity_disc(d.velocity, d.pressure, s.u(0), s.p(0), 0.1);
  EXPECT_NEAR(l2_norm(Y, ut), scheme.projected_l2_norm(s, 0), 1e-10 * l2_norm(Y, ut));
}

TEST(Scheme, DarcyAndPoissonProjectionsAgree) {
  auto mesh = unit_square_mesh(8, false);
  const double dt = 0.1;
  SppScheme scheme(manufactured_problem(mesh, setup(2, 0.01)), config(dt, dt, 100, 1));
  auto s = scheme.initial_state();
  scheme.step(s);
  const auto& d = scheme.disc();
  for (int j = 0; j < 2; ++j) {
    const auto darcy = darcy_projection(d.velocity, d.pressure, s.u(j), dt);
    EXPECT_LE(rel_diff(darcy.pressure, s.p(j)), 1e-8);
    EXPECT_LE(rel_diff(darcy.velocity, corrected_velocity_disc(d.velocity, d.pressure, s.u(j), s.p(j), dt)), 1e-8);
  }
}

TEST(AdjustedPressure, ZeroGammaAndDivergenceFree) {
  auto mesh = unit_square_mesh(4, true);
  FeSpace V(mesh, FeKind::vecP2), Q(mesh, FeKind::P1);
  const auto p = interpolate(Q, [](Point2 x) { return 2.0 + x.x * x.y; });
  const auto u = interpolate(V, [](Point2 x) { return Vec2{x.x * x.x, -2 * x.x * x.y}; });
  const auto w = interpolate(V, [](Point2 x) { return Vec2{x.x * x.y, 0.0}; });
  const auto ref = remove_mean_p1disc(*mesh, to_p1disc(Q, p));
  EXPECT_LE(rel_diff(recover_adjusted_pressure(Q, p, V, w, 0.0), ref), 1e-14);
  EXPECT_LE(rel_diff(recover_adjusted_pressure(Q, p, V, u, 1e3), ref), 1e-9);
  // div w = y, so the adjustment subtracts gamma (y - 1/2)
  const auto adj = recover_adjusted_pressure(Q, p, V, w, 2.0);
  const auto expected = remove_mean_p1disc(
      *mesh, to_p1disc(Q, interpolate(Q, [](Point2 x) { return 2.0 + x.x * x.y - 2.0 * x.y; })));
  EXPECT_LE(rel_diff(adj, expected), 1e-12);
  EXPECT_NEAR(l2_norm_p1disc(*mesh, remove_mean_p1disc(*mesh, std::vector<double>(3 * mesh->n_triangles(), 4.0))), 0.0,
              1e-14);
}

TEST(Run, SingleStepEqualsManualStep) {
  auto mesh = unit_square_mesh(4, true);
  SppScheme scheme(manufactured_problem(mesh, setup(3, 0.01)), config(0.1, 0.1, 100, 1));
  const auto r = run(scheme);
  auto s = scheme.initial_state();
  scheme.step(s);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_FALSE(r.blew_up);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(r.final_state->u(j), s.u(j));
  EXPECT_EQ(r.records[1].energy[0], scheme.energy(s, 0));
}

TEST(Run, TaylorGreenEnergyDecreases) {
  const auto rule = clenshaw_curtis_sparse_grid(5, 1);
  RandomViscosityField f{1e-2, 1.0, 0.01, std::numbers::pi, 2};
  SppScheme scheme(taylor_green_problem(taylor_green_mesh(6, true), f, rule), config(0.1, 1.0, 1e4, 1));
  const auto r = run(scheme);
  for (size_t n = 1; n < r.records.size(); ++n)
    for (int j = 0; j < rule.size(); ++j) EXPECT_LT(r.records[n].energy[j], r.records[n - 1].energy[j]);
}

TEST(Run, BlowupDetection) {
  EnsembleState s(2, 3, 1);
  EXPECT_FALSE(detect_blowup(s, {1.0, 2.0}, 1.0, 1e6));
  EXPECT_TRUE(detect_blowup(s, {1.0, 2e6}, 1.0, 1e6));
  EXPECT_TRUE(detect_blowup(s, {1.0, std::nan("")}, 1.0, 1e6));
  s.u_mut(1)[2] = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(detect_blowup(s, {1.0, 1.0}, 1.0, 1e6));
}
