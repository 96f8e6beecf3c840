#include "ppflow/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppflow/errors.hpp"

namespace ppflow {

const char* to_string(ElementPair pair) {
  return pair == ElementPair::TaylorHood ? "taylor-hood" : "scott-vogelius";
}

const char* to_string(SchemeKind kind) { return kind == SchemeKind::Coupled ? "coupled" : "spp"; }

int SchemeConfig::steps() const {
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("dt and T must be positive");
  const double m = T / dt;
  const long long r = std::llround(m);
  if (r < 1 || std::abs(m - static_cast<double>(r)) > 1e-9 * m)
    throw std::invalid_argument("T / dt must be a positive integer");
  return static_cast<int>(r);
}

Discretization::Discretization(std::shared_ptr<const TriMesh> mesh_in, ElementPair pair_in)
    : mesh(std::move(mesh_in)),
      pair(pair_in),
      velocity(mesh, FeKind::vecP2),
      pressure(mesh, pair_in == ElementPair::TaylorHood ? FeKind::P1 : FeKind::P1disc),
      velocity_pattern(velocity, velocity),
      mass(assemble_mass(velocity_pattern, velocity)),
      graddiv(assemble_graddiv(velocity_pattern, velocity)),
      divergence(assemble_divergence(velocity, pressure)),
      pressure_mean(mean_row(pressure)),
      dirichlet_dofs(velocity.all_boundary_dofs()) {
  if (pair == ElementPair::ScottVogelius && !mesh->is_barycentric())
    throw std::invalid_argument("Scott-Vogelius pair needs a barycentric-refined mesh");
}

EnsembleScheme::EnsembleScheme(EnsembleProblem problem, SchemeConfig cfg)
    : problem_(std::move(problem)), cfg_(cfg) {
  if (!problem_.mesh) throw std::invalid_argument("problem has no mesh");
  if (problem_.J < 1) throw std::invalid_argument("problem needs J >= 1");
  if (static_cast<int>(problem_.viscosity.size()) != problem_.J)
    throw std::invalid_argument("one viscosity field per realization required");
  if (!problem_.dirichlet || !problem_.initial) throw std::invalid_argument("problem needs boundary and initial data");
  if (cfg_.gamma < 0.0 || cfg_.mu < 0.0) throw std::invalid_argument("gamma and mu must be nonnegative");
  cfg_.steps();
  const size_t npts = static_cast<size_t>(problem_.mesh->n_triangles() * default_nq());
  for (const auto& nu : problem_.viscosity) {
    if (nu.size() != npts) throw std::invalid_argument("viscosity field size does not match mesh quadrature");
    for (double v : nu)
      if (!(v > 0.0)) throw NonpositiveViscosityError("viscosity must be positive at every quadrature point");
  }
  disc_ = std::make_shared<const Discretization>(problem_.mesh, cfg_.pair);
  visc_ = ViscosityDecomposition::from_fields(problem_.viscosity);
}

std::vector<double> EnsembleScheme::boundary_values(int j, double t) const {
  const FeSpace& V = disc_->velocity;
  const int ns = V.n_scalar_dofs();
  std::vector<double> out;
  out.reserve(disc_->dirichlet_dofs.size());
  for (int d : disc_->dirichlet_dofs) {
    const Vec2 g = problem_.dirichlet(j, V.nodes()[d % ns], t);
    out.push_back(d < ns ? g.x : g.y);
  }
  return out;
}

EnsembleState EnsembleScheme::initial_state() const {
  const FeSpace& V = disc_->velocity;
  EnsembleState s(problem_.J, V.n_dofs(), disc_->pressure.n_dofs());
  for (int j = 0; j < problem_.J; ++j) {
    auto& u = s.u_mut(j);
    u = interpolate(V, [&](Point2 x) { return problem_.initial(j, x, 0.0); });
    const auto g = boundary_values(j, 0.0);
    for (size_t k = 0; k < g.size(); ++k) u[disc_->dirichlet_dofs[k]] = g[k];
  }
  return s;
}

CsrMatrix EnsembleScheme::momentum_matrix(const EnsembleState& state, int j) const {
  if (j < 0 || j >= state.J()) throw std::out_of_range("realization index");
  if (!state.caches_current()) throw ConsistencyError("momentum_matrix needs current ensemble caches");
  const FeSpace& V = disc_->velocity;
  QuadField coeff = visc_.nu_bar;
  if (cfg_.mu > 0.0) {
    const QuadField nu_t = eev_field(state, V, cfg_.mu, cfg_.dt);
    for (size_t i = 0; i < coeff.size(); ++i) coeff[i] += 2.0 * nu_t[i];
  }
  CsrMatrix A = disc_->mass;
  A.scale(1.0 / cfg_.dt);
  A.add_same_pattern(assemble_convection(disc_->velocity_pattern, V, state.mean()));
  A.add_same_pattern(assemble_diffusion(disc_->velocity_pattern, V, coeff));
  if (cfg_.gamma > 0.0) A.add_same_pattern(disc_->graddiv, cfg_.gamma);
  A.set_identity_rows(disc_->dirichlet_dofs);
  return A;
}

std::vector<double> EnsembleScheme::mass_history(const EnsembleState& state, int j) const {
  return disc_->mass.multiply(state.u(j));
}

std::vector<double> EnsembleScheme::momentum_rhs(const EnsembleState& state, int j) const {
  const FeSpace& V = disc_->velocity;
  const double t1 = (state.step + 1) * cfg_.dt;
  std::vector<double> rhs = mass_history(state, j);
  for (double& v : rhs) v /= cfg_.dt;
  const auto conv = apply_convection(V, state.fluct(j), state.u(j));
  const auto diff = apply_diffusion(V, visc_.nu_prime[j], state.u(j));
  for (size_t i = 0; i < rhs.size(); ++i) rhs[i] -= conv[i] + diff[i];
  if (problem_.forcing) {
    const auto f = assemble_load(V, [&](Point2 x, double t) { return problem_.forcing(j, x, t); }, t1);
    for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += f[i];
  }
  const auto g = boundary_values(j, t1);
  for (size_t k = 0; k < g.size(); ++k) rhs[disc_->dirichlet_dofs[k]] = g[k];
  return rhs;
}

double EnsembleScheme::energy(const EnsembleState& state, int j) const {
  const double n = l2_norm(disc_->velocity, state.u(j));
  return 0.5 * n * n;
}

CoupledScheme::CoupledScheme(EnsembleProblem problem, SchemeConfig cfg)
    : EnsembleScheme(std::move(problem), cfg) {}

CsrMatrix CoupledScheme::saddle_matrix(const EnsembleState& state) const {
  CsrMatrix K = compose_saddle(momentum_matrix(state, 0), disc_->divergence, disc_->pressure_mean);
  K.set_identity_rows(disc_->dirichlet_dofs);
  return K;
}

void CoupledScheme::step(EnsembleState& state) const {
  state.update_mean_fluct();
  const Factorization F = factorize(saddle_matrix(state));
  const int n = disc_->velocity.n_dofs(), m = disc_->pressure.n_dofs();
  std::vector<std::vector<double>> rhs(state.J());
  for (int j = 0; j < state.J(); ++j) {
    rhs[j] = momentum_rhs(state, j);
    rhs[j].resize(static_cast<size_t>(n + m + 1), 0.0);
  }
  const auto sol = solve_multi(F, rhs);
  for (int j = 0; j < state.J(); ++j) {
    state.u_mut(j).assign(sol[j].begin(), sol[j].begin() + n);
    // The multiplier block carries -p since the momentum row reads A u + B^T lambda.
    auto& p = state.p_mut(j);
    p.assign(sol[j].begin() + n, sol[j].begin() + n + m);
    for (double& v : p) v = -v;
  }
  ++state.step;
  state.time = state.step * cfg_.dt;
}

SppScheme::SppScheme(EnsembleProblem problem, SchemeConfig cfg) : EnsembleScheme(std::move(problem), cfg) {
  if (cfg_.pair != ElementPair::TaylorHood)
    throw std::invalid_argument("the projection scheme needs a continuous P1 pressure (Taylor-Hood)");
  const FeSpace& Q = disc_->pressure;
  stiffness_ = assemble_diffusion(Q, QuadField(static_cast<size_t>(Q.mesh().n_triangles() * default_nq()), 1.0));
  gradient_pairing_ = assemble_gradient_pairing(disc_->velocity, Q);
  std::vector<Triplet> row;
  for (int i = 0; i < Q.n_dofs(); ++i) row.push_back({0, i, disc_->pressure_mean[i]});
  poisson_matrix_ = compose_saddle(stiffness_, CsrMatrix::from_triplets(1, Q.n_dofs(), row));
  poisson_.emplace(poisson_matrix_);
}

std::vector<double> SppScheme::mass_history(const EnsembleState& state, int j) const {
  std::vector<double> r = disc_->mass.multiply(state.u(j));
  const auto grad_part = gradient_pairing_.multiply_transpose(state.potential(j));
  for (size_t i = 0; i < r.size(); ++i) r[i] -= grad_part[i];
  return r;
}

std::vector<std::vector<double>> SppScheme::momentum_solve(const EnsembleState& state) const {
  const Factorization F = factorize(momentum_matrix(state, 0));
  std::vector<std::vector<double>> rhs(state.J());
  for (int j = 0; j < state.J(); ++j) rhs[j] = momentum_rhs(state, j);
  return solve_multi(F, rhs);
}

std::vector<double> SppScheme::project(const std::vector<double>& u_hat) const {
  const int m = disc_->pressure.n_dofs();
  std::vector<double> rhs = disc_->divergence.multiply(u_hat);
  for (double& v : rhs) v = -v / cfg_.dt;
  rhs.push_back(0.0);
  auto sol = poisson_->solve(rhs);
  sol.resize(static_cast<size_t>(m));
  return sol;
}

void SppScheme::step(EnsembleState& state) const {
  state.update_mean_fluct();
  const auto u_hat = momentum_solve(state);
  for (int j = 0; j < state.J(); ++j) {
    state.u_mut(j) = u_hat[j];
    auto p = project(u_hat[j]);
    auto& phi = state.potential_mut(j);
    phi.resize(p.size());
    for (size_t i = 0; i < p.size(); ++i) phi[i] = cfg_.dt * p[i];
    state.p_mut(j) = std::move(p);
  }
  ++state.step;
  state.time = state.step * cfg_.dt;
}

double SppScheme::projected_l2_norm(const EnsembleState& state, int j) const {
  const auto& u = state.u(j);
  const auto& phi = state.potential(j);
  const double uu = dot(u, disc_->mass.multiply(u));
  const double up = dot(phi, gradient_pairing_.multiply(u));
  const double pp = dot(phi, stiffness_.multiply(phi));
  return std::sqrt(std::max(0.0, uu - 2.0 * up + pp));
}

double SppScheme::projection_residual(const EnsembleState& state, int j) const {
  std::vector<double> r = disc_->divergence.multiply(state.u(j));
  stiffness_.multiply_add(state.potential(j), r);
  const auto& m = disc_->pressure_mean;
  const double c = dot(r, m) / dot(m, m);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= c * m[i];
  const double nrm = projected_l2_norm(state, j);
  return nrm > 0.0 ? norm2(r) / nrm : norm2(r);
}

std::unique_ptr<EnsembleScheme> make_scheme(SchemeKind kind, EnsembleProblem problem, SchemeConfig cfg) {
  if (kind == SchemeKind::Coupled) return std::make_unique<CoupledScheme>(std::move(problem), cfg);
  return std::make_unique<SppScheme>(std::move(problem), cfg);
}

void coupled_step(EnsembleState& state, const CoupledScheme& scheme) { scheme.step(state); }
void spp_step(EnsembleState& state, const SppScheme& scheme) { scheme.step(state); }

std::vector<double> to_p1disc(const FeSpace& pressure, const std::vector<double>& p) {
  if (pressure.order() != 1 || pressure.components() != 1) throw std::invalid_argument("to_p1disc needs a P1 space");
  if (static_cast<int>(p.size()) != pressure.n_dofs()) throw std::invalid_argument("to_p1disc: length mismatch");
  const int nt = pressure.mesh().n_triangles();
  std::vector<double> out(static_cast<size_t>(3 * nt));
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) out[static_cast<size_t>(3 * t + i)] = p[pressure.dof(t, i)];
  return out;
}

std::vector<double> remove_mean_p1disc(const TriMesh& mesh, std::vector<double> p) {
  if (static_cast<int>(p.size()) != 3 * mesh.n_triangles()) throw std::invalid_argument("P1disc length mismatch");
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    s += mesh.signed_area(t) * (p[3 * t] + p[3 * t + 1] + p[3 * t + 2]) / 3.0;
  const double mean = s / mesh.total_area();
  for (double& v : p) v -= mean;
  return p;
}

double l2_norm_p1disc(const TriMesh& mesh, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != 3 * mesh.n_triangles()) throw std::invalid_argument("P1disc length mismatch");
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double a = p[3 * t], b = p[3 * t + 1], c = p[3 * t + 2];
    s += mesh.signed_area(t) / 6.0 * (a * a + b * b + c * c + a * b + b * c + c * a);
  }
  return std::sqrt(std::max(0.0, s));
}

std::vector<double> recover_adjusted_pressure(const FeSpace& pressure, const std::vector<double>& p_hat,
                                              const FeSpace& velocity, const std::vector<double>& u_hat,
                                              double gamma) {
  if (velocity.components() != 2) throw std::invalid_argument("velocity space must be vector valued");
  if (&velocity.mesh() != &pressure.mesh()) throw std::invalid_argument("spaces live on different meshes");
  if (static_cast<int>(u_hat.size()) != velocity.n_dofs()) throw std::invalid_argument("velocity length mismatch");
  std::vector<double> out = to_p1disc(pressure, p_hat);
  if (gamma != 0.0) {
    const TriMesh& mesh = velocity.mesh();
    const int ns = velocity.n_local_scalar();
    static constexpr double ref[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    double g[6][2];
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto& m = element_geometry(mesh, t).inv_jt;
      for (int i = 0; i < 3; ++i) {
        shape_gradients(velocity.order(), ref[i][0], ref[i][1], g);
        double div = 0.0;
        for (int s = 0; s < ns; ++s) {
          const double gx = m[0] * g[s][0] + m[1] * g[s][1];
          const double gy = m[2] * g[s][0] + m[3] * g[s][1];
          div += u_hat[velocity.dof(t, s)] * gx + u_hat[velocity.dof(t, ns + s)] * gy;
        }
        out[static_cast<size_t>(3 * t + i)] -= gamma * div;
      }
    }
  }
  return remove_mean_p1disc(velocity.mesh(), std::move(out));
}

bool detect_blowup(const EnsembleState& state, const std::vector<double>& energy, double baseline, double factor) {
  for (int j = 0; j < state.J(); ++j)
    for (double v : state.u(j))
      if (!std::isfinite(v)) return true;
  for (double e : energy) {
    if (!std::isfinite(e)) return true;
    if (baseline > 0.0 && e > factor * baseline) return true;
  }
  return false;
}

RunResult run(const EnsembleScheme& scheme, const RunOptions& options) {
  RunResult result;
  EnsembleState state = scheme.initial_state();
  const int M = scheme.config().steps();
  const int J = state.J();

  auto record = [&](EnsembleState& s) {
    StepRecord r;
    r.step = s.step;
    r.time = s.time;
    for (int j = 0; j < J; ++j) r.energy.push_back(scheme.energy(s, j));
    if (options.diagnostics) {
      s.update_mean_fluct();
      const auto rep = stability_diagnostics(s, scheme.disc().velocity, scheme.viscosity(), scheme.config().mu,
                                             scheme.config().dt, scheme.config().gamma);
      r.alpha_min = rep.alpha_min;
      r.max_div_fluct = *std::max_element(rep.max_div_fluct.begin(), rep.max_div_fluct.end());
      r.mean_divergence_l2 = rep.mean_divergence_l2;
      r.max_mean_divergence = rep.max_mean_divergence;
    }
    return r;
  };

  result.records.push_back(record(state));
  double baseline = *std::max_element(result.records[0].energy.begin(), result.records[0].energy.end());
  if (options.observer) options.observer(state);

  for (int n = 0; n < M; ++n) {
    try {
      scheme.step(state);
    } catch (const NonFiniteError&) {
      result.blew_up = true;
      result.blowup_time = (n + 1) * scheme.config().dt;
      break;
    }
    bool finite = true;
    for (int j = 0; j < J && finite; ++j)
      for (double v : state.u(j))
        if (!std::isfinite(v)) {
          finite = false;
          break;
        }
    StepRecord r;
    if (finite) {
      r = record(state);
    } else {
      r.step = state.step;
      r.time = state.time;
      r.energy.assign(J, std::numeric_limits<double>::infinity());
    }
    if (baseline <= 0.0) baseline = *std::max_element(r.energy.begin(), r.energy.end());
    const bool blown = detect_blowup(state, r.energy, baseline, options.blowup_factor);
    result.records.push_back(std::move(r));
    if (blown) {
      result.blew_up = true;
      result.blowup_time = state.time;
      break;
    }
    if (options.observer) options.observer(state);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace ppflow
