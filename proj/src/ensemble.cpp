#include "ppflow/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppflow/errors.hpp"

namespace ppflow {

EnsembleState::EnsembleState(int J, int n_velocity, int n_pressure)
    : n_velocity_(n_velocity), n_pressure_(n_pressure) {
  if (J < 1) throw std::invalid_argument("ensemble needs J >= 1");
  u_.assign(J, std::vector<double>(n_velocity, 0.0));
  p_.assign(J, std::vector<double>(n_pressure, 0.0));
  potential_.assign(J, std::vector<double>(n_pressure, 0.0));
}

std::vector<double>& EnsembleState::u_mut(int j) {
  ++version_;
  return u_.at(j);
}

void EnsembleState::update_mean_fluct() {
  const int J = this->J();
  for (const auto& v : u_)
    if (static_cast<int>(v.size()) != n_velocity_) throw std::invalid_argument("ensemble vectors differ in length");
  mean_.assign(n_velocity_, 0.0);
  for (const auto& v : u_)
    for (int i = 0; i < n_velocity_; ++i) mean_[i] += v[i];
  for (double& m : mean_) m /= J;
  fluct_.resize(J);
  for (int j = 0; j < J; ++j) {
    fluct_[j].resize(n_velocity_);
    for (int i = 0; i < n_velocity_; ++i) fluct_[j][i] = u_[j][i] - mean_[i];
  }
  cache_version_ = version_;
}

void EnsembleState::require_current() const {
  if (!caches_current()) throw ConsistencyError("ensemble mean/fluctuation caches are stale");
}

const std::vector<double>& EnsembleState::mean() const {
  require_current();
  return mean_;
}

const std::vector<double>& EnsembleState::fluct(int j) const {
  require_current();
  return fluct_.at(j);
}

ViscosityDecomposition ViscosityDecomposition::from_fields(const std::vector<QuadField>& nu) {
  if (nu.empty()) throw std::invalid_argument("no viscosity fields");
  const size_t n = nu[0].size();
  for (const auto& f : nu)
    if (f.size() != n) throw std::invalid_argument("viscosity fields differ in size");
  ViscosityDecomposition d;
  const int J = static_cast<int>(nu.size());
  d.nu_bar.assign(n, 0.0);
  for (const auto& f : nu)
    for (size_t i = 0; i < n; ++i) d.nu_bar[i] += f[i];
  for (double& v : d.nu_bar) v /= J;
  d.nu_bar_min = *std::min_element(d.nu_bar.begin(), d.nu_bar.end());
  d.nu_prime.resize(J);
  d.alpha.resize(J);
  for (int j = 0; j < J; ++j) {
    d.nu_prime[j].resize(n);
    double m = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d.nu_prime[j][i] = nu[j][i] - d.nu_bar[i];
      m = std::max(m, std::abs(d.nu_prime[j][i]));
    }
    d.alpha[j] = d.nu_bar_min - m;
  }
  return d;
}

QuadField eev_field(const EnsembleState& state, const FeSpace& velocity, double mu, double dt) {
  if (mu < 0.0 || !(dt > 0.0)) throw std::invalid_argument("eev_field needs mu >= 0 and dt > 0");
  if (!state.caches_current()) throw ConsistencyError("eev_field called with stale ensemble caches");
  const size_t npts = static_cast<size_t>(velocity.mesh().n_triangles() * default_nq());
  QuadField nu_t(npts, 0.0);
  if (mu == 0.0) return nu_t;
  for (int j = 0; j < state.J(); ++j) {
    const auto v = values_at_qp(velocity, state.fluct(j));
    for (size_t i = 0; i < npts; ++i) nu_t[i] += v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1];
  }
  for (double& v : nu_t) v *= mu * dt;
  return nu_t;
}

StabilityReport stability_diagnostics(const EnsembleState& state, const FeSpace& velocity,
                                      const ViscosityDecomposition& visc, double mu, double dt, double /*gamma*/) {
  StabilityReport r;
  r.alpha = visc.alpha;
  r.alpha_min = *std::min_element(visc.alpha.begin(), visc.alpha.end());
  for (int j = 0; j < state.J(); ++j) {
    const auto div = divergence_at_qp(velocity, state.fluct(j));
    double m = 0.0;
    for (double d : div) m = std::max(m, std::abs(d));
    r.max_div_fluct.push_back(m);
  }
  const double l2 = l2_norm(velocity, state.mean());
  r.mean_energy = 0.5 * l2 * l2;
  r.mean_divergence_l2 = divergence_l2(velocity, state.mean());
  for (double d : divergence_at_qp(velocity, state.mean())) r.max_mean_divergence = std::max(r.max_mean_divergence, std::abs(d));
  // Indicative only: the analysis constant is taken as 1.
  for (int j = 0; j < state.J(); ++j) {
    const double a = visc.alpha[j], d = r.max_div_fluct[j];
    if (a <= 0.0) {
      r.warnings.push_back("realization " + std::to_string(j) + ": alpha <= 0 (viscosity outlier)");
    } else if (a <= d) {
      r.warnings.push_back("realization " + std::to_string(j) + ": alpha below fluctuation divergence");
    } else if (mu < a / (dt * (a * a - d * d))) {
      r.warnings.push_back("realization " + std::to_string(j) + ": mu below indicative stability bound");
    }
  }
  return r;
}

}  // namespace ppflow
