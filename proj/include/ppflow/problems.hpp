#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ppflow/schemes.hpp"
#include "ppflow/stochastic.hpp"

namespace ppflow {

enum class NoiseProfile { Alternating, Linear };

// Alternating: (-1)^{j+1} 4 ceil(j/2) / J.  Linear: (2j - 1 - J) / floor(J/2).  j is 1-based.
double noise_coefficient(NoiseProfile profile, int j, int J);

// u = (cos y + (1+e^t) sin y, sin x + (1+e^t) cos x), p = sin(x+y)(1+e^t) on the unit square.
struct ManufacturedSolution {
  static Vec2 velocity(Point2 x, double t);
  static std::array<double, 4> velocity_gradient(Point2 x, double t);
  static double pressure(Point2 x, double t);
  // Forcing for u_s = s u, p_s = s p with constant viscosity nu.
  static Vec2 forcing(Point2 x, double t, double s, double nu);
};

struct ManufacturedSetup {
  std::vector<double> viscosities;  // one constant per realization
  double epsilon = 0.01;
  NoiseProfile profile = NoiseProfile::Alternating;
};

EnsembleProblem manufactured_problem(std::shared_ptr<const TriMesh> mesh, const ManufacturedSetup& setup);
// Scale 1 + k_j eps of realization j (0-based).
double realization_scale(const ManufacturedSetup& setup, int j);

// Viscosity fields nu(., y_j) for every collocation point.
std::vector<QuadField> collocation_viscosities(const TriMesh& mesh, const RandomViscosityField& field,
                                               const SparseGridRule& rule);

// Decaying vortex on [0, pi]^2 with exact boundary and initial data for viscosity nu_exact.
Vec2 taylor_green_velocity(Point2 x, double t, double nu);
EnsembleProblem taylor_green_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                                     const SparseGridRule& rule);

// 40 x 10 channel with a unit step 5 units downstream of the inlet.
Vec2 channel_profile(Point2 x);
EnsembleProblem channel_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                                const SparseGridRule& rule, double epsilon);

// Cavity (-1, 1)^2 with regularized lid (1 - x^2)^2 on top, started from rest.
EnsembleProblem cavity_problem(std::shared_ptr<const TriMesh> mesh, const RandomViscosityField& field,
                               const SparseGridRule& rule, double epsilon);

std::shared_ptr<const TriMesh> unit_square_mesh(int n, bool barycentric);
std::shared_ptr<const TriMesh> taylor_green_mesh(int n, bool barycentric);
std::shared_ptr<const TriMesh> channel_mesh(int nx, int ny, bool barycentric);
std::shared_ptr<const TriMesh> cavity_mesh(int n, bool barycentric);

}  // namespace ppflow
