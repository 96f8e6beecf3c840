#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ppflow/ensemble.hpp"
#include "ppflow/errors.hpp"
#include "support.hpp"

using namespace ppflow;
using ppflow::testing::random_vector;

namespace {

std::shared_ptr<const TriMesh> square(int n) {
  return std::make_shared<const TriMesh>(structured_rect_mesh({0, 1}, {0, 1}, n, n));
}

}  // namespace

TEST(MeanFluct, IdenticalStates) {
  EnsembleState s(4, 10, 3);
  std::mt19937_64 gen(1);
  const auto u = random_vector(10, gen);
  for (int j = 0; j < 4; ++j) s.u_mut(j) = u;
  s.update_mean_fluct();
  for (int j = 0; j < 4; ++j)
    for (double v : s.fluct(j)) EXPECT_EQ(v, 0.0);
}

TEST(MeanFluct, Antisymmetric) {
  EnsembleState s(2, 6, 1);
  std::mt19937_64 gen(2);
  const auto u = random_vector(6, gen);
  s.u_mut(0) = u;
  for (size_t i = 0; i < u.size(); ++i) s.u_mut(1).at(i) = -u[i];
  s.update_mean_fluct();
  for (size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(s.mean()[i], 0.0);
    EXPECT_EQ(s.fluct(0)[i], u[i]);
    EXPECT_EQ(s.fluct(1)[i], -u[i]);
  }
}

TEST(MeanFluct, ClosureForRandomEnsemble) {
  const int J = 20, n = 500;
  EnsembleState s(J, n, 1);
  std::mt19937_64 gen(3);
  double umax = 0.0;
  for (int j = 0; j < J; ++j) {
    s.u_mut(j) = random_vector(n, gen, -5, 5);
    umax = std::max(umax, norm_inf(s.u(j)));
  }
  s.update_mean_fluct();
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < J; ++j) {
      sum += s.fluct(j)[i];
      EXPECT_NEAR(s.mean()[i] + s.fluct(j)[i], s.u(j)[i], 1e-13 * umax);
    }
    EXPECT_LE(std::abs(sum), 1e-13 * umax);
  }
}

TEST(MeanFluct, StaleCachesRejected) {
  EnsembleState s(2, 3, 1);
  EXPECT_THROW(s.mean(), ConsistencyError);
  s.update_mean_fluct();
  EXPECT_NO_THROW(s.mean());
  s.u_mut(1)[0] = 1.0;
  EXPECT_FALSE(s.caches_current());
  EXPECT_THROW(s.fluct(0), ConsistencyError);
}

TEST(Eev, ZeroForIdenticalEnsembleOrZeroMu) {
  auto m = square(3);
  FeSpace V(m, FeKind::vecP2);
  EnsembleState s(3, V.n_dofs(), 1);
  std::mt19937_64 gen(4);
  auto u = random_vector(V.n_dofs(), gen);
  // dyadic entries so the ensemble mean is exact
  for (double& v : u) v = std::ldexp(std::round(std::ldexp(v, 10)), -10);
  for (int j = 0; j < 3; ++j) s.u_mut(j) = u;
  s.update_mean_fluct();
  for (double v : eev_field(s, V, 1.0, 0.1)) EXPECT_EQ(v, 0.0);
  s.u_mut(0) = random_vector(V.n_dofs(), gen);
  s.update_mean_fluct();
  for (double v : eev_field(s, V, 0.0, 0.1)) EXPECT_EQ(v, 0.0);
}

TEST(Eev, HandValueForTwoMembers) {
  auto m = square(2);
  FeSpace V(m, FeKind::vecP2);
  EnsembleState s(2, V.n_dofs(), 1);
  const double a = 0.75, mu = 0.5, dt = 0.2;
  s.u_mut(0) = interpolate(V, [&](Point2) { return Vec2{1.0 + a, 2.0}; });
  s.u_mut(1) = interpolate(V, [&](Point2) { return Vec2{1.0 - a, 2.0}; });
  s.update_mean_fluct();
  for (double v : eev_field(s, V, mu, dt)) EXPECT_NEAR(v, mu * dt * 2 * a * a, 1e-14);
}

TEST(Eev, NonnegativeAndQuadraticScaling) {
  auto m = square(4);
  FeSpace V(m, FeKind::vecP2);
  EnsembleState s(5, V.n_dofs(), 1), t(5, V.n_dofs(), 1);
  std::mt19937_64 gen(5);
  for (int j = 0; j < 5; ++j) {
    s.u_mut(j) = random_vector(V.n_dofs(), gen);
    t.u_mut(j) = s.u(j);
    for (double& v : t.u_mut(j)) v *= 4.0;
  }
  s.update_mean_fluct();
  t.update_mean_fluct();
  const auto a = eev_field(s, V, 1.0, 0.1), b = eev_field(t, V, 1.0, 0.1);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a[i], 0.0);
    EXPECT_EQ(b[i], 16.0 * a[i]);
  }
  EnsembleState stale(5, V.n_dofs(), 1);
  EXPECT_THROW(eev_field(stale, V, 1.0, 0.1), ConsistencyError);
}

TEST(ViscosityDecomposition, Recombines) {
  std::mt19937_64 gen(6);
  std::vector<QuadField> nu;
  for (int j = 0; j < 6; ++j) nu.push_back(random_vector(40, gen, 0.009, 0.011));
  const auto d = ViscosityDecomposition::from_fields(nu);
  double nbmin = 1e9;
  for (size_t i = 0; i < 40; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 6; ++j) {
      sum += d.nu_prime[j][i];
      EXPECT_NEAR(d.nu_bar[i] + d.nu_prime[j][i], nu[j][i], 1e-14 * nu[j][i]);
    }
    EXPECT_NEAR(sum, 0.0, 1e-16);
    nbmin = std::min(nbmin, d.nu_bar[i]);
  }
  EXPECT_EQ(d.nu_bar_min, nbmin);
  for (int j = 0; j < 6; ++j) {
    double mx = 0.0;
    for (double v : d.nu_prime[j]) mx = std::max(mx, std::abs(v));
    EXPECT_NEAR(d.alpha[j], nbmin - mx, 1e-16);
  }
}

TEST(StabilityDiagnostics, IdenticalAndDivergenceFree) {
  auto m = square(4);
  FeSpace V(m, FeKind::vecP2);
  EnsembleState s(3, V.n_dofs(), 1);
  const auto u = interpolate(V, [](Point2 x) { return Vec2{x.x * x.x, -2 * x.x * x.y}; });
  for (int j = 0; j < 3; ++j) s.u_mut(j) = u;
  s.update_mean_fluct();
  const auto visc = ViscosityDecomposition::from_fields(
      {QuadField(static_cast<size_t>(m->n_triangles() * default_nq()), 0.01),
       QuadField(static_cast<size_t>(m->n_triangles() * default_nq()), 0.011),
       QuadField(static_cast<size_t>(m->n_triangles() * default_nq()), 0.009)});
  const auto r = stability_diagnostics(s, V, visc, 1.0, 0.1, 0.0);
  for (double d : r.max_div_fluct) EXPECT_EQ(d, 0.0);
  EXPECT_LE(r.max_mean_divergence, 1e-12);
  EXPECT_LE(r.mean_divergence_l2, 1e-12);
  EXPECT_NEAR(r.alpha_min, 0.01 - 0.001, 1e-15);
  const double l2 = l2_norm(V, u);
  EXPECT_NEAR(r.mean_energy, 0.5 * l2 * l2, 1e-15);
}

TEST(StabilityDiagnostics, FlagsOutliers) {
  auto m = square(2);
  FeSpace V(m, FeKind::vecP2);
  EnsembleState s(3, V.n_dofs(), 1);
  s.update_mean_fluct();
  const size_t n = static_cast<size_t>(m->n_triangles() * default_nq());
  const auto visc =
      ViscosityDecomposition::from_fields({QuadField(n, 0.001), QuadField(n, 0.001), QuadField(n, 0.01)});
  EXPECT_NEAR(visc.alpha[2], -0.002, 1e-15);
  EXPECT_GT(visc.alpha[0], 0.0);
  const auto r = stability_diagnostics(s, V, visc, 1.0, 0.1, 0.0);
  EXPECT_FALSE(r.warnings.empty());
}
