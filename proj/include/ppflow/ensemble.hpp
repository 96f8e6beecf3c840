#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppflow/assembly.hpp"

namespace ppflow {

// Per-realization velocity and pressure coefficients with lazily refreshed mean/fluctuation caches.
// For the projection scheme, the projected velocity is u_tilde_j = u_j - grad(potential_j), where
// potential_j = dt * p_j lives in the pressure space.
class EnsembleState {
 public:
  EnsembleState(int J, int n_velocity, int n_pressure);

  int J() const { return static_cast<int>(u_.size()); }
  int n_velocity() const { return n_velocity_; }
  int n_pressure() const { return n_pressure_; }

  const std::vector<double>& u(int j) const { return u_.at(j); }
  const std::vector<double>& p(int j) const { return p_.at(j); }
  const std::vector<double>& potential(int j) const { return potential_.at(j); }

  // Mutable access invalidates the caches.
  std::vector<double>& u_mut(int j);
  std::vector<double>& p_mut(int j) { return p_.at(j); }
  std::vector<double>& potential_mut(int j) { return potential_.at(j); }

  void update_mean_fluct();
  bool caches_current() const { return cache_version_ == version_; }
  const std::vector<double>& mean() const;
  const std::vector<double>& fluct(int j) const;

  int step = 0;
  double time = 0.0;

 private:
  void require_current() const;

  int n_velocity_, n_pressure_;
  std::vector<std::vector<double>> u_, p_, potential_;
  std::vector<double> mean_;
  std::vector<std::vector<double>> fluct_;
  std::uint64_t version_ = 1, cache_version_ = 0;
};

struct ViscosityDecomposition {
  QuadField nu_bar;
  std::vector<QuadField> nu_prime;
  std::vector<double> alpha;  // min nu_bar - max |nu'_j|
  double nu_bar_min = 0.0;

  static ViscosityDecomposition from_fields(const std::vector<QuadField>& nu);
};

// nu_T = mu dt sum_j |u'_j|^2 at the default quadrature points.
QuadField eev_field(const EnsembleState& state, const FeSpace& velocity, double mu, double dt);

struct StabilityReport {
  std::vector<double> alpha;
  std::vector<double> max_div_fluct;
  double mean_energy = 0.0;
  double mean_divergence_l2 = 0.0;
  double max_mean_divergence = 0.0;
  double alpha_min = 0.0;
  std::vector<std::string> warnings;
};

StabilityReport stability_diagnostics(const EnsembleState& state, const FeSpace& velocity,
                                      const ViscosityDecomposition& visc, double mu, double dt, double gamma);

}  // namespace ppflow
