#include "ppflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ppflow {

std::vector<double> RateTable::rates(size_t column) const {
  std::vector<double> out;
  for (size_t i = 0; i + 1 < params.size(); ++i) {
    const double e0 = errors[i][column], e1 = errors[i + 1][column];
    const double p0 = params[i], p1 = params[i + 1];
    if (e0 > 0.0 && e1 > 0.0 && p0 > 0.0 && p1 > 0.0 && p0 != p1)
      out.push_back(std::log(e0 / e1) / std::abs(std::log(p0 / p1)));
    else
      out.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

double RateTable::final_rate(size_t column) const {
  const auto r = rates(column);
  return r.empty() ? std::numeric_limits<double>::quiet_NaN() : r.back();
}

double bochner_norm(const std::vector<double>& spatial, double dt, NormKind kind) {
  if (kind == NormKind::LinfL2) {
    double m = 0.0;
    for (double v : spatial) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : spatial) s += v * v;
  return std::sqrt(dt * s);
}

double error_norm(const FeSpace& space, const std::vector<std::vector<double>>& numeric,
                  const std::vector<std::vector<double>>& reference, double dt, NormKind kind) {
  if (numeric.size() != reference.size()) throw std::invalid_argument("error_norm: time grids differ");
  std::vector<double> spatial;
  for (size_t n = 0; n < numeric.size(); ++n) {
    if (numeric[n].size() != reference[n].size()) throw std::invalid_argument("error_norm: vector lengths differ");
    std::vector<double> d(numeric[n].size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = numeric[n][i] - reference[n][i];
    double v = l2_norm(space, d);
    if (kind == NormKind::L2H1) v = std::hypot(v, h1_seminorm(space, d));
    spatial.push_back(v);
  }
  return bochner_norm(spatial, dt, kind);
}

namespace {

std::vector<double> ensemble_mean(const EnsembleState& s) {
  std::vector<double> m(s.u(0).size(), 0.0);
  for (int j = 0; j < s.J(); ++j)
    for (size_t i = 0; i < m.size(); ++i) m[i] += s.u(j)[i];
  for (double& v : m) v /= s.J();
  return m;
}

// Mean over realizations of the mean-free P1disc pressure (adjusted for SPP).
std::vector<double> mean_pressure(const EnsembleScheme& scheme, const EnsembleState& s) {
  const auto& d = scheme.disc();
  const double gamma = scheme.kind() == SchemeKind::Spp ? scheme.config().gamma : 0.0;
  std::vector<double> m;
  for (int j = 0; j < s.J(); ++j) {
    const auto p = recover_adjusted_pressure(d.pressure, s.p(j), d.velocity, s.u(j), gamma);
    if (m.empty()) m.assign(p.size(), 0.0);
    for (size_t i = 0; i < m.size(); ++i) m[i] += p[i];
  }
  for (double& v : m) v /= s.J();
  return m;
}

template <class T, class F>
std::vector<T> sweep(bool parallel, size_t n, F&& f) {
  std::vector<T> out;
  if (!parallel) {
    for (size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
  }
  std::vector<std::future<T>> futs;
  for (size_t i = 0; i < n; ++i) futs.push_back(std::async(std::launch::async, f, i));
  for (auto& fu : futs) out.push_back(fu.get());
  return out;
}

SchemeConfig scheme_config(const ConvergenceConfig& cfg, double gamma, ElementPair pair) {
  SchemeConfig s;
  s.dt = cfg.T / cfg.steps;
  s.T = cfg.T;
  s.gamma = gamma;
  s.mu = cfg.mu;
  s.pair = pair;
  return s;
}

struct ExactErrors {
  double velocity = 0.0;  // l2h1
  double pressure = 0.0;  // l2l2
};

// SPP run against the exact ensemble mean.
ExactErrors exact_errors(const ConvergenceConfig& cfg) {
  const auto setup = manufactured_setup(cfg);
  double sbar = 0.0;
  for (int j = 0; j < cfg.J; ++j) sbar += realization_scale(setup, j);
  sbar /= cfg.J;
  auto mesh = unit_square_mesh(cfg.n, cfg.barycentric);
  SppScheme scheme(manufactured_problem(mesh, setup), scheme_config(cfg, cfg.gamma, ElementPair::TaylorHood));
  const FeSpace P(mesh, FeKind::P1disc);
  const QuadratureRule rule = collapsed_gauss_rule(5);
  std::vector<double> ev, ep;
  RunOptions opt;
  opt.diagnostics = false;
  opt.observer = [&](const EnsembleState& s) {
    if (s.step == 0) return;
    const double t = s.time;
    ExactVectorField ex;
    ex.value = [&](Point2 x) {
      const Vec2 u = ManufacturedSolution::velocity(x, t);
      return Vec2{sbar * u.x, sbar * u.y};
    };
    ex.gradient = [&](Point2 x) {
      auto g = ManufacturedSolution::velocity_gradient(x, t);
      for (double& v : g) v *= sbar;
      return g;
    };
    const auto e = vector_error(scheme.disc().velocity, ensemble_mean(s), ex, rule);
    ev.push_back(std::hypot(e.l2, e.h1_semi));
    ep.push_back(scalar_error_mean_free(P, mean_pressure(scheme, s),
                                        [&](Point2 x) { return sbar * ManufacturedSolution::pressure(x, t); }, rule));
  };
  const auto res = run(scheme, opt);
  if (res.blew_up) throw std::runtime_error("manufactured run blew up");
  const double dt = scheme.config().dt;
  return {bochner_norm(ev, dt, NormKind::L2H1), bochner_norm(ep, dt, NormKind::L2L2)};
}

}  // namespace

ManufacturedSetup manufactured_setup(const ConvergenceConfig& cfg) {
  ManufacturedSetup s;
  s.viscosities = uniform_viscosity_samples(cfg.mean_nu, cfg.spread, cfg.J, cfg.seed);
  s.epsilon = cfg.epsilon;
  s.profile = NoiseProfile::Alternating;
  return s;
}

RateTable gamma_sweep(const ConvergenceConfig& cfg, const std::vector<double>& gammas) {
  if (gammas.empty()) throw std::invalid_argument("gamma sweep needs at least one value");
  auto mesh = unit_square_mesh(cfg.n, true);
  const auto setup = manufactured_setup(cfg);

  std::vector<std::vector<double>> ref_u, ref_p;
  {
    CoupledScheme ref(manufactured_problem(mesh, setup), scheme_config(cfg, 0.0, ElementPair::ScottVogelius));
    RunOptions opt;
    opt.diagnostics = false;
    opt.observer = [&](const EnsembleState& s) {
      if (s.step == 0) return;
      ref_u.push_back(ensemble_mean(s));
      ref_p.push_back(mean_pressure(ref, s));
    };
    if (run(ref, opt).blew_up) throw std::runtime_error("coupled reference blew up");
  }

  auto one = [&](size_t i) {
    SppScheme spp(manufactured_problem(mesh, setup), scheme_config(cfg, gammas[i], ElementPair::TaylorHood));
    std::vector<double> ev, ep;
    RunOptions opt;
    opt.diagnostics = false;
    opt.observer = [&](const EnsembleState& s) {
      if (s.step == 0) return;
      const FeSpace& V = spp.disc().velocity;
      const auto& ru = ref_u[static_cast<size_t>(s.step - 1)];
      const auto& rp = ref_p[static_cast<size_t>(s.step - 1)];
      auto du = ensemble_mean(s);
      for (size_t k = 0; k < du.size(); ++k) du[k] -= ru[k];
      ev.push_back(std::hypot(l2_norm(V, du), h1_seminorm(V, du)));
      auto dp = mean_pressure(spp, s);
      for (size_t k = 0; k < dp.size(); ++k) dp[k] -= rp[k];
      ep.push_back(l2_norm_p1disc(*mesh, dp));
    };
    if (run(spp, opt).blew_up) throw std::runtime_error("SPP run blew up in gamma sweep");
    const double dt = spp.config().dt;
    return std::vector<double>{bochner_norm(ev, dt, NormKind::L2H1), bochner_norm(ep, dt, NormKind::L2L2)};
  };

  RateTable table;
  table.parameter = "gamma";
  table.columns = {"velocity_l2h1", "pressure_l2l2"};
  table.params = gammas;
  table.errors = sweep<std::vector<double>>(cfg.parallel, gammas.size(), one);
  return table;
}

RateTable spatial_sweep(const ConvergenceConfig& cfg, const std::vector<int>& cells) {
  RateTable table;
  table.parameter = "h";
  table.columns = {"velocity_l2h1", "pressure_l2l2"};
  for (int n : cells) table.params.push_back(1.0 / n);
  table.errors = sweep<std::vector<double>>(cfg.parallel, cells.size(), [&](size_t i) {
    ConvergenceConfig c = cfg;
    c.n = cells[i];
    const auto e = exact_errors(c);
    return std::vector<double>{e.velocity, e.pressure};
  });
  return table;
}

RateTable temporal_sweep(const ConvergenceConfig& cfg, const std::vector<int>& step_counts) {
  RateTable table;
  table.parameter = "dt";
  table.columns = {"velocity_l2h1", "pressure_l2l2"};
  for (int m : step_counts) table.params.push_back(cfg.T / m);
  table.errors = sweep<std::vector<double>>(cfg.parallel, step_counts.size(), [&](size_t i) {
    ConvergenceConfig c = cfg;
    c.steps = step_counts[i];
    const auto e = exact_errors(c);
    return std::vector<double>{e.velocity, e.pressure};
  });
  return table;
}

RateTable divergence_sweep(const ConvergenceConfig& cfg, const std::vector<double>& gammas) {
  auto mesh = unit_square_mesh(cfg.n, cfg.barycentric);
  const auto setup = manufactured_setup(cfg);
  RateTable table;
  table.parameter = "gamma";
  table.columns = {"mean_divergence_linf"};
  table.params = gammas;
  table.errors = sweep<std::vector<double>>(cfg.parallel, gammas.size(), [&](size_t i) {
    SppScheme spp(manufactured_problem(mesh, setup), scheme_config(cfg, gammas[i], ElementPair::TaylorHood));
    const auto res = run(spp);
    if (res.blew_up) throw std::runtime_error("SPP run blew up in divergence sweep");
    double m = 0.0;
    for (const auto& r : res.records)
      if (r.step > 0) m = std::max(m, r.max_mean_divergence);
    return std::vector<double>{m};
  });
  return table;
}

double max_projection_residual(const ConvergenceConfig& cfg) {
  auto mesh = unit_square_mesh(cfg.n, cfg.barycentric);
  SppScheme spp(manufactured_problem(mesh, manufactured_setup(cfg)),
                scheme_config(cfg, cfg.gamma, ElementPair::TaylorHood));
  double worst = 0.0;
  RunOptions opt;
  opt.diagnostics = false;
  opt.observer = [&](const EnsembleState& s) {
    if (s.step == 0) return;
    for (int j = 0; j < s.J(); ++j) worst = std::max(worst, spp.projection_residual(s, j));
  };
  if (run(spp, opt).blew_up) throw std::runtime_error("SPP run blew up");
  return worst;
}

double forcing_fd_discrepancy(int n_points, std::uint64_t seed, double mean_nu, int J) {
  ManufacturedSetup setup;
  setup.viscosities = uniform_viscosity_samples(mean_nu, 0.1, J, seed);
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, J - 1);
  constexpr double h1 = 1e-6, h2 = 1e-4;
  double worst = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const Point2 x{unit(gen), unit(gen)};
    const double t = unit(gen);
    const int j = pick(gen);
    const double s = realization_scale(setup, j);
    const double nu = setup.viscosities[static_cast<size_t>(j)];
    auto u = [&](double a, double b, double tt) {
      const Vec2 v = ManufacturedSolution::velocity({a, b}, tt);
      return std::array<double, 2>{s * v.x, s * v.y};
    };
    auto p = [&](double a, double b) { return s * ManufacturedSolution::pressure({a, b}, t); };
    const auto u0 = u(x.x, x.y, t);
    const auto ut1 = u(x.x, x.y, t + h1), ut0 = u(x.x, x.y, t - h1);
    const auto ux1 = u(x.x + h1, x.y, t), ux0 = u(x.x - h1, x.y, t);
    const auto uy1 = u(x.x, x.y + h1, t), uy0 = u(x.x, x.y - h1, t);
    const auto X1 = u(x.x + h2, x.y, t), X0 = u(x.x - h2, x.y, t);
    const auto Y1 = u(x.x, x.y + h2, t), Y0 = u(x.x, x.y - h2, t);
    const double px = (p(x.x + h1, x.y) - p(x.x - h1, x.y)) / (2 * h1);
    const double py = (p(x.x, x.y + h1) - p(x.x, x.y - h1)) / (2 * h1);
    std::array<double, 2> fd;
    for (int c = 0; c < 2; ++c) {
      const double dt_u = (ut1[c] - ut0[c]) / (2 * h1);
      const double dx = (ux1[c] - ux0[c]) / (2 * h1);
      const double dy = (uy1[c] - uy0[c]) / (2 * h1);
      const double lap = (X1[c] - 2 * u0[c] + X0[c] + Y1[c] - 2 * u0[c] + Y0[c]) / (h2 * h2);
      fd[c] = dt_u + u0[0] * dx + u0[1] * dy - nu * lap + (c == 0 ? px : py);
    }
    const Vec2 f = ManufacturedSolution::forcing(x, t, s, nu);
    const double rel = std::hypot(fd[0] - f.x, fd[1] - f.y) / std::hypot(f.x, f.y);
    worst = std::max(worst, rel);
  }
  return worst;
}

BenchmarkConfig tgv_defaults() {
  BenchmarkConfig c;
  c.nx = c.ny = 32;
  c.barycentric = true;
  c.dt = 0.1;
  c.T = 5.0;
  c.gamma = 1e4;
  c.mu = 1.0;
  c.field = {1e-3, 1.0, 0.01, std::numbers::pi, 2};
  return c;
}

BenchmarkConfig channel_defaults() {
  BenchmarkConfig c;
  c.nx = 80;
  c.ny = 20;
  c.barycentric = true;
  c.dt = 0.1;
  c.T = 40.0;
  c.gamma = 1e4;
  c.mu = 1.0;
  c.epsilon = 0.01;
  c.field = {1.0 / 600.0, 1.0, 0.01, 40.0, 2};
  return c;
}

BenchmarkConfig cavity_defaults() {
  BenchmarkConfig c;
  c.scheme = SchemeKind::Coupled;
  c.pair = ElementPair::TaylorHood;
  c.nx = c.ny = 48;
  c.barycentric = false;
  c.dt = 5.0;
  c.T = 600.0;
  c.gamma = 0.0;
  c.mu = 1.0;
  c.epsilon = 0.01;
  c.field = {2.0 / 15000.0, 1.0, 0.01, 2.0, 2};
  return c;
}

namespace {

SchemeConfig bench_scheme(const BenchmarkConfig& cfg) {
  SchemeConfig s;
  s.dt = cfg.dt;
  s.T = cfg.T;
  s.gamma = cfg.gamma;
  s.mu = cfg.mu;
  s.pair = cfg.pair;
  return s;
}

RunOptions bench_options(const BenchmarkConfig& cfg, const EnsembleScheme*& current) {
  RunOptions opt;
  if (cfg.vtk_stride > 0 && cfg.snapshot) {
    opt.observer = [&cfg, &current](const EnsembleState& s) {
      if (s.step % cfg.vtk_stride == 0) cfg.snapshot(*current, s);
    };
  }
  return opt;
}

QoiSeries run_benchmark(const BenchmarkConfig& cfg, EnsembleProblem problem, const SparseGridRule& rule,
                        RunResult* raw = nullptr) {
  auto scheme = make_scheme(cfg.scheme, std::move(problem), bench_scheme(cfg));
  const EnsembleScheme* current = scheme.get();
  auto result = run(*scheme, bench_options(cfg, current));
  auto series = aggregate(result, rule);
  if (raw) *raw = std::move(result);
  return series;
}

}  // namespace

double tgv_exact_energy(double nu, double t) {
  return std::numbers::pi * std::numbers::pi / 4.0 * std::exp(-4.0 * nu * t);
}

QoiSeries tgv_benchmark(const BenchmarkConfig& cfg) {
  const auto rule = clenshaw_curtis_sparse_grid(cfg.field.sample_dimension(), cfg.level);
  auto mesh = taylor_green_mesh(cfg.nx, cfg.barycentric);
  return run_benchmark(cfg, taylor_green_problem(mesh, cfg.field, rule), rule);
}

ChannelResult channel_benchmark(const BenchmarkConfig& cfg) {
  const auto rule = clenshaw_curtis_sparse_grid(cfg.field.sample_dimension(), cfg.level);
  auto mesh = channel_mesh(cfg.nx, cfg.ny, cfg.barycentric);
  RunResult raw;
  ChannelResult out;
  out.series = run_benchmark(cfg, channel_problem(mesh, cfg.field, rule, cfg.epsilon), rule, &raw);
  if (raw.final_state && !raw.blew_up) {
    const FeSpace V(mesh, FeKind::vecP2);
    std::vector<Point2> pts;
    for (int a = 0; a < 20; ++a)
      for (int b = 0; b < 9; ++b) pts.push_back({6.05 + 0.1 * a, 0.05 + 0.1 * b});
    const auto vals = evaluate_field(V, ensemble_mean(*raw.final_state), pts);
    double m = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < pts.size(); ++k) m = std::min(m, vals[2 * k]);
    out.min_ux_behind_step = m;
    out.recirculation = m < 0.0;
  }
  return out;
}

std::vector<QoiSeries> cavity_mu_sweep(const BenchmarkConfig& cfg, const std::vector<double>& mus) {
  const auto rule = clenshaw_curtis_sparse_grid(cfg.field.sample_dimension(), cfg.level);
  auto mesh = cavity_mesh(cfg.nx, cfg.barycentric);
  std::vector<QoiSeries> out;
  for (double mu : mus) {
    BenchmarkConfig c = cfg;
    c.mu = mu;
    out.push_back(run_benchmark(c, cavity_problem(mesh, c.field, rule, c.epsilon), rule));
  }
  return out;
}

}  // namespace ppflow
