#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "ppflow/errors.hpp"
#include "ppflow/io.hpp"

using namespace ppflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int vtk_stride = 0;
  bool parallel = false;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  return json::parse(in, nullptr, true, true);
}

json section(const json& cfg, const std::string& name) {
  return cfg.contains(name) ? cfg.at(name) : json::object();
}

ConvergenceConfig convergence_config(const json& cfg, const std::string& cmd, const Globals& g,
                                     ConvergenceConfig c) {
  for (const json& s : {section(cfg, "convergence"), section(cfg, cmd)}) {
    c.n = s.value("n", c.n);
    c.barycentric = s.value("barycentric", c.barycentric);
    c.T = s.value("T", c.T);
    c.steps = s.value("steps", c.steps);
    c.J = s.value("J", c.J);
    c.mean_nu = s.value("mean_nu", c.mean_nu);
    c.spread = s.value("spread", c.spread);
    c.epsilon = s.value("epsilon", c.epsilon);
    c.seed = s.value("seed", c.seed);
    c.gamma = s.value("gamma", c.gamma);
    c.mu = s.value("mu", c.mu);
  }
  if (g.seed) c.seed = *g.seed;
  c.parallel = g.parallel;
  return c;
}

json describe(const ConvergenceConfig& c) {
  return {{"n", c.n}, {"barycentric", c.barycentric}, {"T", c.T}, {"steps", c.steps}, {"J", c.J},
          {"mean_nu", c.mean_nu}, {"spread", c.spread}, {"epsilon", c.epsilon}, {"seed", c.seed},
          {"gamma", c.gamma}, {"mu", c.mu}};
}

BenchmarkConfig benchmark_config(const json& cfg, const std::string& cmd, BenchmarkConfig b) {
  const json s = section(cfg, cmd);
  if (s.contains("scheme")) b.scheme = s.at("scheme").get<std::string>() == "coupled" ? SchemeKind::Coupled : SchemeKind::Spp;
  if (s.contains("pair"))
    b.pair = s.at("pair").get<std::string>() == "scott-vogelius" ? ElementPair::ScottVogelius : ElementPair::TaylorHood;
  b.nx = s.value("nx", b.nx);
  b.ny = s.value("ny", b.ny);
  b.barycentric = s.value("barycentric", b.barycentric);
  b.dt = s.value("dt", b.dt);
  b.T = s.value("T", b.T);
  b.gamma = s.value("gamma", b.gamma);
  b.mu = s.value("mu", b.mu);
  b.epsilon = s.value("epsilon", b.epsilon);
  b.level = s.value("level", b.level);
  if (s.contains("field")) {
    const json& f = s.at("field");
    b.field.scale = f.value("scale", b.field.scale);
    b.field.c = f.value("c", b.field.c);
    b.field.l = f.value("l", b.field.l);
    b.field.L = f.value("L", b.field.L);
    b.field.q = f.value("q", b.field.q);
  }
  return b;
}

json describe(const BenchmarkConfig& b) {
  return {{"scheme", to_string(b.scheme)}, {"pair", to_string(b.pair)}, {"nx", b.nx}, {"ny", b.ny},
          {"barycentric", b.barycentric}, {"dt", b.dt}, {"T", b.T}, {"gamma", b.gamma}, {"mu", b.mu},
          {"epsilon", b.epsilon}, {"level", b.level},
          {"field", {{"scale", b.field.scale}, {"c", b.field.c}, {"l", b.field.l}, {"L", b.field.L}, {"q", b.field.q}}}};
}

SnapshotWriter vtk_writer(const fs::path& dir, const std::string& prefix) {
  return [dir, prefix](const EnsembleScheme& scheme, const EnsembleState& s) {
    const auto& d = scheme.disc();
    std::vector<double> mu(s.u(0).size(), 0.0), mp(s.p(0).size(), 0.0);
    for (int j = 0; j < s.J(); ++j) {
      for (size_t i = 0; i < mu.size(); ++i) mu[i] += s.u(j)[i] / s.J();
      for (size_t i = 0; i < mp.size(); ++i) mp[i] += s.p(j)[i] / s.J();
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05d.vtk", prefix.c_str(), s.step);
    write_vtk((dir / name).string(), *d.mesh,
              {{"mean_velocity", 2, vertex_velocity(d.velocity, mu)}, {"mean_pressure", 1, vertex_scalar(d.pressure, mp)}},
              prefix + " t=" + format_number(s.time));
  };
}

template <class T>
std::vector<T> list_or(const json& cfg, const std::string& cmd, const std::string& key, std::vector<T> def) {
  const json s = section(cfg, cmd);
  return s.contains(key) ? s.at(key).get<std::vector<T>>() : def;
}

void rate_command(const std::string& cmd, const json& cfg, const Globals& g) {
  ConvergenceConfig base;
  RateTable table;
  json summary;
  if (cmd == "converge-gamma") {
    base.n = 16;
    base.mu = 1.0;
    auto c = convergence_config(cfg, cmd, g, base);
    const auto gammas = list_or<double>(cfg, cmd, "gammas", {0.0, 1.0, 1e1, 1e2, 1e3, 1e4});
    table = gamma_sweep(c, gammas);
    summary["config"] = describe(c);
  } else if (cmd == "converge-space") {
    base.T = 0.001;
    base.steps = 8;
    base.gamma = 1e6;
    auto c = convergence_config(cfg, cmd, g, base);
    table = spatial_sweep(c, list_or<int>(cfg, cmd, "cells", {2, 4, 8, 16}));
    summary["config"] = describe(c);
  } else if (cmd == "converge-time") {
    base.n = 32;
    base.gamma = 1e6;
    base.mu = 0.5;
    auto c = convergence_config(cfg, cmd, g, base);
    table = temporal_sweep(c, list_or<int>(cfg, cmd, "step_counts", {4, 8, 16, 32, 64}));
    summary["config"] = describe(c);
  } else {
    base.mean_nu = 0.001;
    auto c = convergence_config(cfg, cmd, g, base);
    table = divergence_sweep(c, list_or<double>(cfg, cmd, "gammas", {0.0, 1e1, 1e2, 1e3, 1e4}));
    summary["config"] = describe(c);
  }
  const fs::path out(g.out);
  write_rate_table((out / "rates.csv").string(), table);
  summary["command"] = cmd;
  summary["table"] = to_json(table);
  write_json((out / "summary.json").string(), summary);
  for (size_t i = 0; i < table.params.size(); ++i) {
    std::cout << table.parameter << ' ' << format_number(table.params[i]);
    for (size_t c = 0; c < table.columns.size(); ++c) std::cout << ' ' << table.columns[c] << ' ' << format_number(table.errors[i][c]);
    std::cout << '\n';
  }
}

void benchmark_command(const std::string& cmd, const json& cfg, const Globals& g) {
  const fs::path out(g.out);
  json summary;
  summary["command"] = cmd;
  if (cmd == "tgv") {
    auto b = benchmark_config(cfg, cmd, tgv_defaults());
    b.vtk_stride = g.vtk_stride;
    b.snapshot = vtk_writer(out, "tgv");
    const auto s = tgv_benchmark(b);
    write_energy_series((out / "energy.csv").string(), s);
    summary["config"] = describe(b);
    summary["result"] = to_json(s);
    summary["exact_energy_at_mean_viscosity"] = tgv_exact_energy(b.field.scale * b.field.c, s.times.back());
  } else if (cmd == "step") {
    auto b = benchmark_config(cfg, cmd, channel_defaults());
    b.vtk_stride = g.vtk_stride;
    b.snapshot = vtk_writer(out, "step");
    const auto r = channel_benchmark(b);
    write_energy_series((out / "energy.csv").string(), r.series);
    summary["config"] = describe(b);
    summary["result"] = to_json(r.series);
    summary["min_mean_ux_behind_step"] = r.min_ux_behind_step;
    summary["recirculation"] = r.recirculation;
  } else {
    auto b = benchmark_config(cfg, cmd, cavity_defaults());
    const auto mus = list_or<double>(cfg, cmd, "mus", {0.0, 1.0});
    std::vector<QoiSeries> runs;
    std::vector<std::string> labels;
    json per_mu = json::array();
    for (double mu : mus) {
      BenchmarkConfig c = b;
      c.vtk_stride = g.vtk_stride;
      c.snapshot = vtk_writer(out, "rldc_mu" + format_number(mu));
      runs.push_back(cavity_mu_sweep(c, {mu}).front());
      labels.push_back("mu" + format_number(mu));
      json r = to_json(runs.back());
      r["mu"] = mu;
      per_mu.push_back(r);
    }
    write_energy_series((out / "energy.csv").string(), labels, runs);
    summary["config"] = describe(b);
    summary["runs"] = per_mu;
  }
  write_json((out / "summary.json").string(), summary);
  std::cout << summary.dump(2) << '\n';
}

void grid_dump(const json& cfg, const Globals& g) {
  const json s = section(cfg, "grid-dump");
  const std::string domain = s.value("domain", std::string("unit"));
  const int nx = s.value("nx", 16), ny = s.value("ny", nx);
  const bool bary = s.value("barycentric", false);
  std::shared_ptr<const TriMesh> mesh;
  if (domain == "unit") mesh = unit_square_mesh(nx, bary);
  else if (domain == "tgv") mesh = taylor_green_mesh(nx, bary);
  else if (domain == "channel") mesh = channel_mesh(nx, ny, bary);
  else if (domain == "cavity") mesh = cavity_mesh(nx, bary);
  else throw std::invalid_argument("unknown domain " + domain);
  const fs::path out(g.out);
  write_vtk((out / "mesh.vtk").string(), *mesh);
  const int dim = s.value("dimension", 5), level = s.value("level", 1);
  const auto rule = clenshaw_curtis_sparse_grid(dim, level);
  write_sparse_grid((out / "sparse_grid.csv").string(), rule);
  json summary{{"command", "grid-dump"}, {"domain", domain}, {"vertices", mesh->n_vertices()},
               {"triangles", mesh->n_triangles()}, {"h_max", mesh->h_max()}, {"area", mesh->total_area()},
               {"sparse_grid", {{"dimension", dim}, {"level", level}, {"points", rule.size()}}}};
  write_json((out / "summary.json").string(), summary);
  std::cout << summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble Navier-Stokes experiments"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "JSON experiment manifest")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "seed for viscosity samples");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--vtk-stride", g.vtk_stride, "write VTK snapshots every N steps (0 = off)")->check(CLI::NonNegativeNumber);
  app.add_flag("--parallel", g.parallel, "run sweep points concurrently");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"converge-gamma", "SPP vs coupled errors over gamma"},
      {"converge-space", "spatial convergence against the manufactured solution"},
      {"converge-time", "temporal convergence against the manufactured solution"},
      {"div-sweep", "divergence of the mean velocity over gamma"},
      {"tgv", "Taylor-Green vortex ensemble energy"},
      {"step", "channel flow over a step"},
      {"rldc", "regularized lid-driven cavity, mu sweep"},
      {"grid-dump", "write a mesh and the sparse grid"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;

  try {
    const json cfg = load_config(g.config);
    fs::create_directories(g.out);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "grid-dump") grid_dump(cfg, g);
    else if (cmd == "tgv" || cmd == "step" || cmd == "rldc") benchmark_command(cmd, cfg, g);
    else rate_command(cmd, cfg, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
