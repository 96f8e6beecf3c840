#pragma once

#include <cstdint>
#include <vector>

#include "ppflow/mesh.hpp"

namespace ppflow {

// nu(x, y) = scale * (c + sqrt(sqrt(pi) l / 2) y_1
//            + sum_k sqrt(xi_k) (sin(k pi x1/L) sin(k pi x2/L) y_{2k} + cos(k pi x1/L) cos(k pi x2/L) y_{2k+1}))
struct RandomViscosityField {
  double scale = 1e-3;
  double c = 1.0;
  double l = 0.01;
  double L = 1.0;
  int q = 2;

  int sample_dimension() const { return 2 * q + 1; }
  double amplitude(int k) const;  // sqrt(xi_k)
  double leading_amplitude() const;
  double psi(Point2 x, const std::vector<double>& y) const;
};

double kl_viscosity(const RandomViscosityField& field, Point2 x, const std::vector<double>& y);

// Minimum of psi over the given points; throws NonpositiveViscosityError if not positive.
double check_positive(const RandomViscosityField& field, const std::vector<Point2>& points,
                      const std::vector<double>& y);

// Draws from std::mt19937_64; each variate uses the top 53 bits of one output.
std::vector<double> uniform_viscosity_samples(double mean, double spread, int J, std::uint64_t seed);

struct SparseGridRule {
  int dimension = 0;
  int level = 0;
  std::vector<std::vector<double>> points;  // J x N
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

// Nested Clenshaw-Curtis rule with m(1) = 1, m(i) = 2^{i-1} + 1 points on [-1, 1] (weights sum to 2).
void clenshaw_curtis_1d(int m, std::vector<double>& nodes, std::vector<double>& weights);

SparseGridRule clenshaw_curtis_sparse_grid(int N, int level);

double expectation(const SparseGridRule& rule, const std::vector<double>& qoi_values);

}  // namespace ppflow
