#include <gtest/gtest.h>

#include <cmath>

#include "ppflow/quadrature.hpp"

using namespace ppflow;

namespace {

// int_T xi^a eta^b over the reference triangle = a! b! / (a + b + 2)!
double monomial_integral(int a, int b) {
  return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3);
}

double apply(const QuadratureRule& r, int a, int b) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], a) * std::pow(r.points[q][1], b);
  return s;
}

}  // namespace

TEST(DefaultRule, WeightsSumToArea) {
  const auto& r = default_rule();
  double s = 0.0;
  for (double w : r.weights) s += w;
  EXPECT_NEAR(s, 0.5, 1e-15);
  EXPECT_EQ(r.size(), 7);
  EXPECT_EQ(r.degree, 5);
}

TEST(DefaultRule, ExactUpToDegreeFive) {
  const auto& r = default_rule();
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) EXPECT_NEAR(apply(r, a, b), monomial_integral(a, b), 1e-14) << a << "," << b;
  // and not beyond
  EXPECT_GT(std::abs(apply(r, 6, 0) - monomial_integral(6, 0)), 1e-8);
}

TEST(DefaultRule, PointsInsideTriangle) {
  const auto& r = default_rule();
  for (int q = 0; q < r.size(); ++q) {
    const auto l = r.barycentric(q);
    for (double v : l) EXPECT_GT(v, 0.0);
  }
}

TEST(CollapsedGauss, ExactToDegree) {
  for (int n = 2; n <= 6; ++n) {
    const auto r = collapsed_gauss_rule(n);
    EXPECT_EQ(r.degree, 2 * n - 2);
    for (int a = 0; a <= r.degree; ++a)
      for (int b = 0; a + b <= r.degree; ++b) EXPECT_NEAR(apply(r, a, b), monomial_integral(a, b), 1e-14);
  }
}

TEST(GaussLegendre, IntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  for (int k = 0; k <= 9; ++k) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14);
  }
}
