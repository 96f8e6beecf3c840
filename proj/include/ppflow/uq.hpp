#pragma once

#include <functional>
#include <vector>

#include "ppflow/schemes.hpp"
#include "ppflow/stochastic.hpp"

namespace ppflow {

struct QoiSeries {
  std::vector<double> times;
  std::vector<double> expected_energy;          // sum_j w_j 1/2 ||u_j||^2
  std::vector<std::vector<double>> raw_energy;  // per time, per collocation point
  std::vector<double> max_mean_divergence;
  bool blew_up = false;
  double blowup_time = 0.0;
};

// Builds the ensemble problem whose realization j carries nu(., y_j).
using ProblemBuilder = std::function<EnsembleProblem(const RandomViscosityField&, const SparseGridRule&)>;

QoiSeries scm_run(SchemeKind kind, const SchemeConfig& cfg, const RandomViscosityField& field,
                  const SparseGridRule& rule, const ProblemBuilder& build, const RunOptions& options = {});

// Aggregates an already computed run.
QoiSeries aggregate(const RunResult& result, const SparseGridRule& rule);

}  // namespace ppflow
