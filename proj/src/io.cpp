#include "ppflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ppflow {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_vtk(const std::string& path, const TriMesh& mesh, const std::vector<VtkField>& point_data,
               const std::string& title) {
  auto out = open_out(path);
  const int nv = mesh.n_vertices(), nt = mesh.n_triangles();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices()) out << format_number(p.x) << ' ' << format_number(p.y) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  if (point_data.empty()) return;
  out << "POINT_DATA " << nv << '\n';
  for (const auto& f : point_data) {
    if (static_cast<int>(f.values.size()) != f.components * nv)
      throw std::invalid_argument("vtk field " + f.name + " has the wrong length");
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << format_number(v) << '\n';
    } else if (f.components == 2) {
      out << "VECTORS " << f.name << " double\n";
      for (int i = 0; i < nv; ++i)
        out << format_number(f.values[2 * i]) << ' ' << format_number(f.values[2 * i + 1]) << " 0\n";
    } else {
      throw std::invalid_argument("vtk fields must have 1 or 2 components");
    }
  }
}

std::vector<double> vertex_velocity(const FeSpace& space, const std::vector<double>& dofs) {
  if (space.kind() != FeKind::vecP2 && space.kind() != FeKind::vecP1)
    throw std::invalid_argument("vertex_velocity needs a continuous vector space");
  const int nv = space.mesh().n_vertices(), ns = space.n_scalar_dofs();
  std::vector<double> out(static_cast<size_t>(2 * nv));
  for (int i = 0; i < nv; ++i) {
    out[2 * i] = dofs[i];
    out[2 * i + 1] = dofs[ns + i];
  }
  return out;
}

std::vector<double> vertex_scalar(const FeSpace& space, const std::vector<double>& dofs) {
  if (space.components() != 1 || space.order() != 1) throw std::invalid_argument("vertex_scalar needs a P1 space");
  const TriMesh& mesh = space.mesh();
  const int nv = mesh.n_vertices();
  if (!space.discontinuous()) return {dofs.begin(), dofs.begin() + nv};
  std::vector<double> sum(nv, 0.0), cnt(nv, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      const int v = mesh.triangles()[t][i];
      sum[v] += dofs[space.dof(t, i)];
      cnt[v] += 1.0;
    }
  for (int v = 0; v < nv; ++v) sum[v] /= cnt[v];
  return sum;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw std::invalid_argument("csv row length differs from header");
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
    out << '\n';
  }
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_rate_table(const std::string& path, const RateTable& table) {
  std::vector<std::string> header{table.parameter};
  for (const auto& c : table.columns) {
    header.push_back(c);
    header.push_back(c + "_rate");
  }
  std::vector<std::vector<double>> rates;
  for (size_t c = 0; c < table.columns.size(); ++c) rates.push_back(table.rates(c));
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < table.params.size(); ++i) {
    std::vector<double> r{table.params[i]};
    for (size_t c = 0; c < table.columns.size(); ++c) {
      r.push_back(table.errors[i][c]);
      r.push_back(i == 0 ? std::nan("") : rates[c][i - 1]);
    }
    rows.push_back(std::move(r));
  }
  write_csv(path, header, rows);
}

void write_energy_series(const std::string& path, const QoiSeries& series) {
  std::vector<std::string> header{"time", "expected_energy", "max_mean_divergence"};
  const size_t J = series.raw_energy.empty() ? 0 : series.raw_energy[0].size();
  for (size_t j = 0; j < J; ++j) header.push_back("energy_" + std::to_string(j + 1));
  std::vector<std::vector<double>> rows;
  for (size_t n = 0; n < series.times.size(); ++n) {
    std::vector<double> r{series.times[n], series.expected_energy[n], series.max_mean_divergence[n]};
    r.insert(r.end(), series.raw_energy[n].begin(), series.raw_energy[n].end());
    rows.push_back(std::move(r));
  }
  write_csv(path, header, rows);
}

void write_energy_series(const std::string& path, const std::vector<std::string>& labels,
                         const std::vector<QoiSeries>& series) {
  if (labels.size() != series.size()) throw std::invalid_argument("one label per series required");
  size_t len = 0;
  for (const auto& s : series) len = std::max(len, s.times.size());
  const QoiSeries* longest = nullptr;
  for (const auto& s : series)
    if (s.times.size() == len) longest = &s;
  std::vector<std::string> header{"time"};
  for (const auto& l : labels) header.push_back("expected_energy_" + l);
  std::vector<std::vector<double>> rows;
  for (size_t n = 0; n < len; ++n) {
    std::vector<double> r{longest->times[n]};
    for (const auto& s : series) r.push_back(n < s.times.size() ? s.expected_energy[n] : std::nan(""));
    rows.push_back(std::move(r));
  }
  write_csv(path, header, rows);
}

void write_sparse_grid(const std::string& path, const SparseGridRule& rule) {
  std::vector<std::string> header;
  for (int i = 0; i < rule.dimension; ++i) header.push_back("y" + std::to_string(i + 1));
  header.push_back("weight");
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < rule.size(); ++j) {
    auto r = rule.points[j];
    r.push_back(rule.weights[j]);
    rows.push_back(std::move(r));
  }
  write_csv(path, header, rows);
}

nlohmann::json to_json(const RateTable& table) {
  nlohmann::json j;
  j["parameter"] = table.parameter;
  j["values"] = table.params;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    nlohmann::json col;
    nlohmann::json errs = nlohmann::json::array(), rates = nlohmann::json::array();
    for (const auto& row : table.errors) errs.push_back(number(row[c]));
    for (double r : table.rates(c)) rates.push_back(number(r));
    col["errors"] = errs;
    col["rates"] = rates;
    j["columns"][table.columns[c]] = col;
  }
  return j;
}

nlohmann::json to_json(const QoiSeries& series) {
  nlohmann::json j;
  j["steps"] = series.times.empty() ? 0 : series.times.size() - 1;
  j["final_time"] = series.times.empty() ? 0.0 : series.times.back();
  j["initial_expected_energy"] = series.expected_energy.empty() ? nlohmann::json(nullptr) : number(series.expected_energy.front());
  j["final_expected_energy"] = series.expected_energy.empty() ? nlohmann::json(nullptr) : number(series.expected_energy.back());
  j["blew_up"] = series.blew_up;
  j["blowup_time"] = series.blew_up ? number(series.blowup_time) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ppflow
