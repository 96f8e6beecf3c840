#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ppflow/experiments.hpp"

namespace ppflow {

struct VtkField {
  std::string name;
  int components = 1;  // 1 or 2 (written as 3-vectors)
  std::vector<double> values;  // per vertex, interleaved
};

void write_vtk(const std::string& path, const TriMesh& mesh, const std::vector<VtkField>& point_data = {},
               const std::string& title = "ppflow");

// Vertex values of a continuous P2 vector field (vertex dofs come first).
std::vector<double> vertex_velocity(const FeSpace& space, const std::vector<double>& dofs);
// Vertex values of a P1 or P1disc scalar; discontinuous values are averaged over incident triangles.
std::vector<double> vertex_scalar(const FeSpace& space, const std::vector<double>& dofs);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string format_number(double v);  // %.12g

void write_json(const std::string& path, const nlohmann::json& j);

// CSV/JSON adapters for experiment results.
void write_rate_table(const std::string& path, const RateTable& table);
void write_energy_series(const std::string& path, const QoiSeries& series);
void write_energy_series(const std::string& path, const std::vector<std::string>& labels,
                         const std::vector<QoiSeries>& series);
void write_sparse_grid(const std::string& path, const SparseGridRule& rule);
nlohmann::json to_json(const RateTable& table);
nlohmann::json to_json(const QoiSeries& series);

}  // namespace ppflow
