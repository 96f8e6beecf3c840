#pragma once

#include <array>
#include <string>
#include <vector>

namespace ppflow {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { wall, lid, inlet, outlet, top, bottom, left, right };

std::string to_string(BoundaryTag tag);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

// Tag assigned to each side of a rectangle.
struct SideTags {
  BoundaryTag left = BoundaryTag::left;
  BoundaryTag right = BoundaryTag::right;
  BoundaryTag bottom = BoundaryTag::bottom;
  BoundaryTag top = BoundaryTag::top;

  static SideTags all(BoundaryTag t) { return {t, t, t, t}; }
};

struct BoundaryEdge {
  std::array<int, 2> v;
  BoundaryTag tag;
};

class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
          std::vector<BoundaryEdge> boundary_edges, bool barycentric = false);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  // Unique edges (sorted vertex pairs) and, per triangle, the edge opposite each local vertex.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
  // Boundary tag per edge, or -1 for interior edges.
  int edge_tag(int e) const { return edge_tag_[e]; }

  double h_max() const { return h_max_; }
  bool is_barycentric() const { return barycentric_; }

  double signed_area(int t) const;
  double total_area() const;
  Point2 centroid(int t) const;

 private:
  void build_topology();

  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<int> edge_tag_;
  double h_max_ = 0.0;
  bool barycentric_ = false;
};

TriMesh structured_rect_mesh(Interval x_range, Interval y_range, int nx, int ny,
                             const SideTags& tags = {});

TriMesh barycentric_refine(const TriMesh& mesh);

TriMesh remove_step(const TriMesh& mesh, const Rect& step_box,
                    BoundaryTag new_tag = BoundaryTag::wall);

// Uniform bucket grid for point-in-triangle queries.
class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh);
  // Returns the containing triangle and fills reference coordinates, or throws LocationError.
  int locate(Point2 p, double& xi, double& eta) const;

 private:
  const TriMesh* mesh_;
  double x0_, y0_, dx_, dy_;
  int nbx_, nby_;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace ppflow
