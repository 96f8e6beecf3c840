#pragma once

#include <array>
#include <vector>

namespace ppflow {

// Points in reference coordinates (xi, eta) on the triangle (0,0),(1,0),(0,1).
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
  std::array<double, 3> barycentric(int q) const {
    return {1.0 - points[q][0] - points[q][1], points[q][0], points[q][1]};
  }
};

// 7-point rule exact for total degree 5.
const QuadratureRule& default_rule();

// Gauss-Legendre in each direction through the Duffy collapse; exact to degree 2n-2.
QuadratureRule collapsed_gauss_rule(int n);

// Nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ppflow
