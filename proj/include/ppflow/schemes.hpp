#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ppflow/assembly.hpp"
#include "ppflow/ensemble.hpp"
#include "ppflow/factorization.hpp"

namespace ppflow {

enum class ElementPair { TaylorHood, ScottVogelius };
enum class SchemeKind { Coupled, Spp };

const char* to_string(ElementPair pair);
const char* to_string(SchemeKind kind);

using RealizationVectorFunction = std::function<Vec2(int j, Point2 x, double t)>;

// Everything that differs between realizations, plus the shared mesh.
struct EnsembleProblem {
  std::shared_ptr<const TriMesh> mesh;
  int J = 1;
  std::vector<QuadField> viscosity;       // per realization, at default quadrature points
  RealizationVectorFunction dirichlet;    // imposed on every boundary node
  RealizationVectorFunction forcing;      // empty means zero
  RealizationVectorFunction initial;      // t argument is 0
};

struct SchemeConfig {
  double dt = 0.1;
  double T = 1.0;
  double gamma = 0.0;
  double mu = 0.0;
  ElementPair pair = ElementPair::TaylorHood;

  // M = T / dt; throws unless it is a positive integer.
  int steps() const;
};

// Spaces and time-independent operators for one mesh and element pair.
struct Discretization {
  Discretization(std::shared_ptr<const TriMesh> mesh, ElementPair pair);

  std::shared_ptr<const TriMesh> mesh;
  ElementPair pair;
  FeSpace velocity;
  FeSpace pressure;
  SparsityPattern velocity_pattern;
  CsrMatrix mass;
  CsrMatrix graddiv;
  CsrMatrix divergence;       // B, pressure x velocity
  std::vector<double> pressure_mean;
  std::vector<int> dirichlet_dofs;
};

class EnsembleScheme {
 public:
  EnsembleScheme(EnsembleProblem problem, SchemeConfig cfg);
  virtual ~EnsembleScheme() = default;

  virtual SchemeKind kind() const = 0;
  virtual void step(EnsembleState& state) const = 0;

  const EnsembleProblem& problem() const { return problem_; }
  const SchemeConfig& config() const { return cfg_; }
  const Discretization& disc() const { return *disc_; }
  const ViscosityDecomposition& viscosity() const { return visc_; }

  // Interpolated initial data with boundary nodes overwritten by the Dirichlet data at t = 0.
  EnsembleState initial_state() const;

  // Shared momentum matrix M/dt + N(<u>) + K(nu_bar + 2 nu_T) + gamma G with identity Dirichlet
  // rows. The realization index is accepted to audit that nothing realization-specific enters.
  CsrMatrix momentum_matrix(const EnsembleState& state, int j) const;
  // Realization right-hand side of the momentum equation at t^{n+1}.
  std::vector<double> momentum_rhs(const EnsembleState& state, int j) const;

  // Velocity used for energy and fluctuation (u_j for coupled, u_hat_j for projection).
  double energy(const EnsembleState& state, int j) const;

 protected:
  // (u_tilde_j^n, chi) for every test function.
  virtual std::vector<double> mass_history(const EnsembleState& state, int j) const;
  std::vector<double> boundary_values(int j, double t) const;

  EnsembleProblem problem_;
  SchemeConfig cfg_;
  std::shared_ptr<const Discretization> disc_;
  ViscosityDecomposition visc_;
};

class CoupledScheme : public EnsembleScheme {
 public:
  CoupledScheme(EnsembleProblem problem, SchemeConfig cfg);
  SchemeKind kind() const override { return SchemeKind::Coupled; }
  void step(EnsembleState& state) const override;

  CsrMatrix saddle_matrix(const EnsembleState& state) const;
};

class SppScheme : public EnsembleScheme {
 public:
  SppScheme(EnsembleProblem problem, SchemeConfig cfg);
  SchemeKind kind() const override { return SchemeKind::Spp; }
  void step(EnsembleState& state) const override;

  // Step 1 only: new u_hat for every realization from one shared factorization.
  std::vector<std::vector<double>> momentum_solve(const EnsembleState& state) const;
  // Step 2: pressure and projection potential from u_hat via the Neumann Poisson problem.
  std::vector<double> project(const std::vector<double>& u_hat) const;

  const CsrMatrix& poisson_matrix() const { return poisson_matrix_; }
  const CsrMatrix& stiffness() const { return stiffness_; }
  const CsrMatrix& gradient_pairing() const { return gradient_pairing_; }

  // || B u_tilde ||, restricted to mean-free pressure tests, over || u_tilde ||_{L2}.
  double projection_residual(const EnsembleState& state, int j) const;
  double projected_l2_norm(const EnsembleState& state, int j) const;

 protected:
  std::vector<double> mass_history(const EnsembleState& state, int j) const override;

 private:
  CsrMatrix stiffness_;
  CsrMatrix gradient_pairing_;  // D, pressure x velocity
  CsrMatrix poisson_matrix_;
  std::optional<Factorization> poisson_;
};

std::unique_ptr<EnsembleScheme> make_scheme(SchemeKind kind, EnsembleProblem problem, SchemeConfig cfg);

void coupled_step(EnsembleState& state, const CoupledScheme& scheme);
void spp_step(EnsembleState& state, const SppScheme& scheme);

// p_hat - gamma div u_hat on each triangle, as a mean-free P1disc vector.
std::vector<double> recover_adjusted_pressure(const FeSpace& pressure, const std::vector<double>& p_hat,
                                              const FeSpace& velocity, const std::vector<double>& u_hat,
                                              double gamma);
// Continuous or discontinuous P1 vector as P1disc vertex values.
std::vector<double> to_p1disc(const FeSpace& pressure, const std::vector<double>& p);
std::vector<double> remove_mean_p1disc(const TriMesh& mesh, std::vector<double> p);
double l2_norm_p1disc(const TriMesh& mesh, const std::vector<double>& p);

struct StepRecord {
  int step = 0;
  double time = 0.0;
  std::vector<double> energy;  // 1/2 ||u_j||^2 per realization
  double alpha_min = 0.0;
  double max_div_fluct = 0.0;
  double mean_divergence_l2 = 0.0;
  double max_mean_divergence = 0.0;
};

struct RunResult {
  std::vector<StepRecord> records;  // records[0] is the initial state
  bool blew_up = false;
  double blowup_time = 0.0;
  std::optional<EnsembleState> final_state;
};

struct RunOptions {
  // Called after every completed step (and once for the initial state with step = 0).
  std::function<void(const EnsembleState&)> observer;
  bool diagnostics = true;
  double blowup_factor = 1e6;
};

RunResult run(const EnsembleScheme& scheme, const RunOptions& options = {});

bool detect_blowup(const EnsembleState& state, const std::vector<double>& energy, double baseline, double factor);

}  // namespace ppflow
