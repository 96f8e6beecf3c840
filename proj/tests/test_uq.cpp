#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ppflow/errors.hpp"
#include "ppflow/experiments.hpp"

using namespace ppflow;

namespace {

SchemeConfig tgv_config(double T) {
  SchemeConfig c;
  c.dt = 0.1;
  c.T = T;
  c.gamma = 1e4;
  c.mu = 1.0;
  return c;
}

ProblemBuilder tgv_builder(int n) {
  auto mesh = taylor_green_mesh(n, true);
  return [mesh](const RandomViscosityField& f, const SparseGridRule& r) { return taylor_green_problem(mesh, f, r); };
}

}  // namespace

TEST(Scm, DeterministicFieldMatchesSingleRun) {
  RandomViscosityField f{1e-2, 1.0, 0.0, std::numbers::pi, 2};
  const auto rule = clenshaw_curtis_sparse_grid(5, 1);
  const auto qoi = scm_run(SchemeKind::Spp, tgv_config(0.3), f, rule, tgv_builder(4));

  SparseGridRule single;
  single.dimension = 5;
  single.points = {std::vector<double>(5, 0.0)};
  single.weights = {1.0};
  const auto one = scm_run(SchemeKind::Spp, tgv_config(0.3), f, single, tgv_builder(4));
  ASSERT_EQ(qoi.times.size(), one.times.size());
  for (size_t n = 0; n < qoi.times.size(); ++n) {
    EXPECT_NEAR(qoi.expected_energy[n], one.expected_energy[n], 1e-10 * one.expected_energy[n]);
    for (double e : qoi.raw_energy[n]) EXPECT_EQ(e, qoi.raw_energy[n][0]);
  }
}

TEST(Scm, ExpectationIsWeightedSum) {
  RandomViscosityField f{1e-2, 1.0, 0.01, std::numbers::pi, 2};
  const auto rule = clenshaw_curtis_sparse_grid(5, 1);
  const auto qoi = scm_run(SchemeKind::Spp, tgv_config(0.2), f, rule, tgv_builder(4));
  for (size_t n = 0; n < qoi.times.size(); ++n) {
    double s = 0.0;
    for (int j = 0; j < rule.size(); ++j) s += rule.weights[j] * qoi.raw_energy[n][j];
    EXPECT_NEAR(qoi.expected_energy[n], s, 1e-14 * std::abs(s));
  }
  EXPECT_FALSE(qoi.blew_up);
}

TEST(Scm, CollocationViscosityIsFieldAtNodes) {
  RandomViscosityField f{1e-3, 1.0, 0.01, std::numbers::pi, 2};
  const auto rule = clenshaw_curtis_sparse_grid(5, 1);
  auto mesh = taylor_green_mesh(3, false);
  const auto nu = collocation_viscosities(*mesh, f, rule);
  const auto pts = quadrature_points(*mesh);
  ASSERT_EQ(static_cast<int>(nu.size()), rule.size());
  for (int j = 0; j < rule.size(); ++j) {
    ASSERT_EQ(nu[j].size(), pts.size());
    for (size_t i = 0; i < pts.size(); i += 7) EXPECT_DOUBLE_EQ(nu[j][i], kl_viscosity(f, pts[i], rule.points[j]));
  }
}

TEST(Scm, NonpositiveFieldRejected) {
  RandomViscosityField f{1e-3, 0.0, 0.5, std::numbers::pi, 2};
  const auto rule = clenshaw_curtis_sparse_grid(5, 1);
  EXPECT_THROW(collocation_viscosities(*taylor_green_mesh(3, false), f, rule), NonpositiveViscosityError);
}

TEST(Scm, DimensionMismatchThrows) {
  RandomViscosityField f{1e-2, 1.0, 0.01, std::numbers::pi, 2};
  EXPECT_THROW(scm_run(SchemeKind::Spp, tgv_config(0.1), f, clenshaw_curtis_sparse_grid(3, 1), tgv_builder(2)),
               std::invalid_argument);
  RunResult r;
  r.records.push_back(StepRecord{0, 0.0, {1.0, 2.0}});
  EXPECT_THROW(aggregate(r, clenshaw_curtis_sparse_grid(5, 1)), std::invalid_argument);
}

TEST(Scm, TaylorGreenExpectedEnergyDecays) {
  BenchmarkConfig cfg = tgv_defaults();
  cfg.nx = cfg.ny = 6;
  cfg.T = 0.5;
  const auto qoi = tgv_benchmark(cfg);
  ASSERT_EQ(qoi.expected_energy.size(), 6u);
  for (size_t n = 1; n < qoi.expected_energy.size(); ++n) EXPECT_LT(qoi.expected_energy[n], qoi.expected_energy[n - 1]);
  EXPECT_NEAR(qoi.expected_energy[0], tgv_exact_energy(1e-3, 0.0), 0.02 * tgv_exact_energy(1e-3, 0.0));
}
