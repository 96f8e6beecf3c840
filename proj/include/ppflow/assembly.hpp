#pragma once

#include <functional>
#include <vector>

#include "ppflow/fe_space.hpp"
#include "ppflow/sparse.hpp"

namespace ppflow {

// Scalar field sampled at the default-rule quadrature points, index t * nq + q.
using QuadField = std::vector<double>;

using TimeVectorFunction = std::function<Vec2(Point2, double)>;

// CSR structure of a test x trial operator plus the scatter map of every element.
class SparsityPattern {
 public:
  SparsityPattern(const FeSpace& test, const FeSpace& trial);

  const CsrMatrix& zero_matrix() const { return zero_; }
  int position(int t, int i, int j) const {
    return positions_[(static_cast<size_t>(t) * n_test_ + i) * n_trial_ + j];
  }
  int n_test_local() const { return n_test_; }
  int n_trial_local() const { return n_trial_; }

 private:
  int n_test_, n_trial_;
  CsrMatrix zero_;
  std::vector<int> positions_;
};

CsrMatrix assemble_mass(const FeSpace& space);
CsrMatrix assemble_mass(const SparsityPattern& pattern, const FeSpace& space);
// Cross-space mass pairing (phi_test, phi_trial); components must match.
CsrMatrix assemble_mass(const FeSpace& test, const FeSpace& trial);

CsrMatrix assemble_diffusion(const FeSpace& space, const QuadField& coeff);
CsrMatrix assemble_diffusion(const SparsityPattern& pattern, const FeSpace& space, const QuadField& coeff);

CsrMatrix assemble_graddiv(const FeSpace& space);
CsrMatrix assemble_graddiv(const SparsityPattern& pattern, const FeSpace& space);

// B[q, b] = (q, div phi_b): rows pressure dofs, columns velocity dofs.
CsrMatrix assemble_divergence(const FeSpace& vel, const FeSpace& pres);
// D[q, b] = (phi_b, grad q).
CsrMatrix assemble_gradient_pairing(const FeSpace& vel, const FeSpace& pres);

// N[a, b] = b*(w, phi_b, phi_a) = 1/2 (w.grad phi_b, phi_a) - 1/2 (w.grad phi_a, phi_b).
CsrMatrix assemble_convection(const FeSpace& space, const std::vector<double>& wind);
CsrMatrix assemble_convection(const SparsityPattern& pattern, const FeSpace& space,
                              const std::vector<double>& wind);

std::vector<double> assemble_load(const FeSpace& space, const TimeVectorFunction& f, double t);
std::vector<double> assemble_load(const FeSpace& space, const ScalarFunction& f);

// Integrals of the scalar basis functions; the zero-mean constraint row.
std::vector<double> mean_row(const FeSpace& space);

// Matrix-free actions, equal to assembling and multiplying.
std::vector<double> apply_convection(const FeSpace& space, const std::vector<double>& wind,
                                     const std::vector<double>& u);
std::vector<double> apply_diffusion(const FeSpace& space, const QuadField& coeff,
                                    const std::vector<double>& u);

// ---- fields ----

std::vector<double> interpolate(const FeSpace& space, const VectorFunction& f);
std::vector<double> interpolate(const FeSpace& space, const ScalarFunction& f);

int default_nq();
QuadField sample_at_qp(const TriMesh& mesh, const ScalarFunction& f);
std::vector<Point2> quadrature_points(const TriMesh& mesh);

// Values at default-rule points: scalar spaces give one value per point, vector spaces two
// (x then y interleaved).
std::vector<double> values_at_qp(const FeSpace& space, const std::vector<double>& dofs);
QuadField divergence_at_qp(const FeSpace& space, const std::vector<double>& dofs);

// Interleaved values per point (components() values each); throws LocationError.
std::vector<double> evaluate_field(const FeSpace& space, const std::vector<double>& dofs,
                                   const std::vector<Point2>& points);

double l2_norm(const FeSpace& space, const std::vector<double>& dofs);
double h1_seminorm(const FeSpace& space, const std::vector<double>& dofs);
double divergence_l2(const FeSpace& space, const std::vector<double>& dofs);
double integral(const FeSpace& space, const std::vector<double>& dofs);

struct ExactVectorField {
  std::function<Vec2(Point2)> value;
  std::function<std::array<double, 4>(Point2)> gradient;  // d1u1, d2u1, d1u2, d2u2
};

struct ErrorPair {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

ErrorPair vector_error(const FeSpace& space, const std::vector<double>& dofs,
                       const ExactVectorField& exact, const QuadratureRule& rule);
// L2 distance of a scalar FE function (mean removed) to an exact scalar (mean removed).
double scalar_error_mean_free(const FeSpace& space, const std::vector<double>& dofs,
                              const ScalarFunction& exact, const QuadratureRule& rule);

}  // namespace ppflow
