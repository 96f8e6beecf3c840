#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppflow/problems.hpp"
#include "ppflow/uq.hpp"

namespace ppflow {

// Rows indexed by a sweep parameter (gamma, h or dt), one column per error quantity.
struct RateTable {
  std::string parameter;
  std::vector<std::string> columns;
  std::vector<double> params;
  std::vector<std::vector<double>> errors;  // [row][column]

  // log(e_i / e_{i+1}) / |log(p_i / p_{i+1})|; NaN where undefined.
  std::vector<double> rates(size_t column) const;
  double final_rate(size_t column) const;
};

enum class NormKind { L2H1, L2L2, LinfL2 };

// Discrete Bochner norm of spatial norms sampled at t^1..t^M.
double bochner_norm(const std::vector<double>& spatial, double dt, NormKind kind);

// Same, from two aligned series of dof vectors in one space (index n = 1..M).
double error_norm(const FeSpace& space, const std::vector<std::vector<double>>& numeric,
                  const std::vector<std::vector<double>>& reference, double dt, NormKind kind);

struct ConvergenceConfig {
  int n = 16;  // cells per side of the unit square
  bool barycentric = true;
  double T = 1.0;
  int steps = 10;
  int J = 20;
  double mean_nu = 0.01;
  double spread = 0.1;
  double epsilon = 0.01;
  std::uint64_t seed = 20240501;
  double gamma = 1e6;
  double mu = 1.0;
  bool parallel = false;
};

ManufacturedSetup manufactured_setup(const ConvergenceConfig& cfg);

// SPP (Taylor-Hood) against the coupled Scott-Vogelius solution on the same mesh and time step.
RateTable gamma_sweep(const ConvergenceConfig& cfg, const std::vector<double>& gammas);
// SPP against the exact ensemble mean.
RateTable spatial_sweep(const ConvergenceConfig& cfg, const std::vector<int>& cells);
RateTable temporal_sweep(const ConvergenceConfig& cfg, const std::vector<int>& step_counts);
// max over steps and quadrature points of |div <u_hat>|.
RateTable divergence_sweep(const ConvergenceConfig& cfg, const std::vector<double>& gammas);

// Largest ||B u_tilde|| / ||u_tilde|| over steps and realizations of one SPP run.
double max_projection_residual(const ConvergenceConfig& cfg);

// Finite-difference reconstruction of the manufactured forcing; returns the largest relative
// discrepancy over random points in [0,1]^2 x [0,1].
double forcing_fd_discrepancy(int n_points, std::uint64_t seed, double mean_nu = 0.01, int J = 20);

using SnapshotWriter = std::function<void(const EnsembleScheme&, const EnsembleState&)>;

struct BenchmarkConfig {
  SchemeKind scheme = SchemeKind::Spp;
  ElementPair pair = ElementPair::TaylorHood;
  int nx = 32;
  int ny = 32;
  bool barycentric = true;
  double dt = 0.1;
  double T = 5.0;
  double gamma = 1e4;
  double mu = 1.0;
  double epsilon = 0.01;
  RandomViscosityField field;
  int level = 1;
  int vtk_stride = 0;
  SnapshotWriter snapshot;
};

BenchmarkConfig tgv_defaults();
BenchmarkConfig channel_defaults();
BenchmarkConfig cavity_defaults();

QoiSeries tgv_benchmark(const BenchmarkConfig& cfg);
// pi^2/4 exp(-4 nu t)
double tgv_exact_energy(double nu, double t);

struct ChannelResult {
  QoiSeries series;
  double min_ux_behind_step = 0.0;  // mean velocity sampled in the lee of the step
  bool recirculation = false;
};
ChannelResult channel_benchmark(const BenchmarkConfig& cfg);

std::vector<QoiSeries> cavity_mu_sweep(const BenchmarkConfig& cfg, const std::vector<double>& mus);

}  // namespace ppflow
