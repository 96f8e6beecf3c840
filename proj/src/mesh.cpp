#include "ppflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ppflow/errors.hpp"

namespace ppflow {

namespace {

constexpr double kTagTol = 1e-12;

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

// Incidence-1 edges of a triangle list, in first-seen order with orientation of the owning triangle.
std::vector<std::array<int, 2>> outer_edges(const std::vector<std::array<int, 3>>& tris) {
  std::map<std::array<int, 2>, int> count;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) ++count[sorted_pair(t[k], t[(k + 1) % 3])];
  std::vector<std::array<int, 2>> out;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k)
      if (count[sorted_pair(t[k], t[(k + 1) % 3])] == 1) out.push_back({t[k], t[(k + 1) % 3]});
  return out;
}

}  // namespace

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::wall: return "wall";
    case BoundaryTag::lid: return "lid";
    case BoundaryTag::inlet: return "inlet";
    case BoundaryTag::outlet: return "outlet";
    case BoundaryTag::top: return "top";
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::left: return "left";
    case BoundaryTag::right: return "right";
  }
  return "unknown";
}

TriMesh::TriMesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges, bool barycentric)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      barycentric_(barycentric) {
  if (triangles_.empty()) throw std::invalid_argument("mesh has no triangles");
  const int nv = n_vertices();
  for (int t = 0; t < n_triangles(); ++t) {
    for (int v : triangles_[t])
      if (v < 0 || v >= nv) throw std::invalid_argument("triangle references missing vertex");
    if (!(signed_area(t) > 0.0))
      throw std::invalid_argument("triangle " + std::to_string(t) + " is not counter-clockwise");
  }
  build_topology();
}

void TriMesh::build_topology() {
  std::map<std::array<int, 2>, int> index;
  std::vector<int> incidence;
  tri_edges_.resize(triangles_.size());
  h_max_ = 0.0;
  for (int t = 0; t < n_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      auto key = sorted_pair(a, b);
      auto [it, inserted] = index.emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back(key);
        incidence.push_back(0);
      }
      ++incidence[it->second];
      tri_edges_[t][k] = it->second;
      h_max_ = std::max(h_max_, dist(vertices_[a], vertices_[b]));
    }
  }
  edge_tag_.assign(edges_.size(), -1);
  for (int e = 0; e < n_edges(); ++e)
    if (incidence[e] > 2) throw std::invalid_argument("non-conforming mesh: edge shared by >2 triangles");
  for (const auto& be : boundary_edges_) {
    auto it = index.find(sorted_pair(be.v[0], be.v[1]));
    if (it == index.end()) throw std::invalid_argument("boundary edge is not a mesh edge");
    if (incidence[it->second] != 1)
      throw std::invalid_argument("boundary edge must belong to exactly one triangle");
    edge_tag_[it->second] = static_cast<int>(be.tag);
  }
  for (int e = 0; e < n_edges(); ++e)
    if (incidence[e] == 1 && edge_tag_[e] < 0)
      throw std::invalid_argument("untagged boundary edge");
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point2 a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < n_triangles(); ++t) s += signed_area(t);
  return s;
}

Point2 TriMesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  Point2 c;
  for (int v : tri) {
    c.x += vertices_[v].x / 3.0;
    c.y += vertices_[v].y / 3.0;
  }
  return c;
}

TriMesh structured_rect_mesh(Interval xr, Interval yr, int nx, int ny, const SideTags& tags) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("cell counts must be positive");
  if (!(xr.hi > xr.lo) || !(yr.hi > yr.lo)) throw std::invalid_argument("empty interval");
  std::vector<Point2> verts;
  verts.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.push_back({xr.lo + (xr.hi - xr.lo) * i / nx, yr.lo + (yr.hi - yr.lo) * j / ny});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  std::vector<BoundaryEdge> bnd;
  for (const auto& e : outer_edges(tris)) {
    const Point2 a = verts[e[0]], b = verts[e[1]];
    BoundaryTag tag;
    if (std::abs(a.y - yr.lo) < kTagTol && std::abs(b.y - yr.lo) < kTagTol) tag = tags.bottom;
    else if (std::abs(a.y - yr.hi) < kTagTol && std::abs(b.y - yr.hi) < kTagTol) tag = tags.top;
    else if (std::abs(a.x - xr.lo) < kTagTol && std::abs(b.x - xr.lo) < kTagTol) tag = tags.left;
    else if (std::abs(a.x - xr.hi) < kTagTol && std::abs(b.x - xr.hi) < kTagTol) tag = tags.right;
    else throw std::logic_error("boundary edge off the rectangle sides");
    bnd.push_back({e, tag});
  }
  return TriMesh(std::move(verts), std::move(tris), std::move(bnd));
}

TriMesh barycentric_refine(const TriMesh& mesh) {
  std::vector<Point2> verts = mesh.vertices();
  std::vector<std::array<int, 3>> tris;
  tris.reserve(3 * mesh.triangles().size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const int g = static_cast<int>(verts.size());
    verts.push_back(mesh.centroid(t));
    tris.push_back({tri[0], tri[1], g});
    tris.push_back({tri[1], tri[2], g});
    tris.push_back({tri[2], tri[0], g});
  }
  return TriMesh(std::move(verts), std::move(tris), mesh.boundary_edges(), true);
}

TriMesh remove_step(const TriMesh& mesh, const Rect& box, BoundaryTag new_tag) {
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) return mesh;
  auto on_grid_x = [&](double x) {
    return std::any_of(mesh.vertices().begin(), mesh.vertices().end(),
                       [x](const Point2& p) { return std::abs(p.x - x) < kTagTol; });
  };
  auto on_grid_y = [&](double y) {
    return std::any_of(mesh.vertices().begin(), mesh.vertices().end(),
                       [y](const Point2& p) { return std::abs(p.y - y) < kTagTol; });
  };
  if (!on_grid_x(box.x0) || !on_grid_x(box.x1) || !on_grid_y(box.y0) || !on_grid_y(box.y1))
    throw std::invalid_argument("step box is not aligned with mesh lines");

  std::vector<std::array<int, 3>> kept;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 c = mesh.centroid(t);
    const bool inside = c.x > box.x0 && c.x < box.x1 && c.y > box.y0 && c.y < box.y1;
    if (!inside) kept.push_back(mesh.triangles()[t]);
  }
  if (kept.empty()) throw std::invalid_argument("step box removes the whole mesh");

  std::vector<int> remap(mesh.vertices().size(), -1);
  std::vector<Point2> verts;
  for (auto& tri : kept)
    for (int& v : tri) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(verts.size());
        verts.push_back(mesh.vertices()[v]);
      }
      v = remap[v];
    }
  std::map<std::array<int, 2>, BoundaryTag> old_tags;
  for (const auto& be : mesh.boundary_edges())
    if (remap[be.v[0]] >= 0 && remap[be.v[1]] >= 0)
      old_tags[sorted_pair(remap[be.v[0]], remap[be.v[1]])] = be.tag;
  std::vector<BoundaryEdge> bnd;
  for (const auto& e : outer_edges(kept)) {
    auto it = old_tags.find(sorted_pair(e[0], e[1]));
    bnd.push_back({e, it != old_tags.end() ? it->second : new_tag});
  }
  return TriMesh(std::move(verts), std::move(kept), std::move(bnd), mesh.is_barycentric());
}

PointLocator::PointLocator(const TriMesh& mesh) : mesh_(&mesh) {
  double x1 = -1e300, y1 = -1e300;
  x0_ = y0_ = 1e300;
  for (const auto& p : mesh.vertices()) {
    x0_ = std::min(x0_, p.x);
    y0_ = std::min(y0_, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.n_triangles()))));
  nbx_ = nby_ = n;
  dx_ = (x1 - x0_) / n;
  dy_ = (y1 - y0_) / n;
  buckets_.resize(static_cast<size_t>(nbx_ * nby_));
  const double pad = 1e-10 * std::max(x1 - x0_, y1 - y0_);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
    for (int v : mesh.triangles()[t]) {
      const Point2& p = mesh.vertices()[v];
      bx0 = std::min(bx0, p.x);
      by0 = std::min(by0, p.y);
      bx1 = std::max(bx1, p.x);
      by1 = std::max(by1, p.y);
    }
    const int i0 = std::clamp(static_cast<int>((bx0 - pad - x0_) / dx_), 0, nbx_ - 1);
    const int i1 = std::clamp(static_cast<int>((bx1 + pad - x0_) / dx_), 0, nbx_ - 1);
    const int j0 = std::clamp(static_cast<int>((by0 - pad - y0_) / dy_), 0, nby_ - 1);
    const int j1 = std::clamp(static_cast<int>((by1 + pad - y0_) / dy_), 0, nby_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<size_t>(j * nbx_ + i)].push_back(t);
  }
}

int PointLocator::locate(Point2 p, double& xi, double& eta) const {
  const double fi = (p.x - x0_) / dx_, fj = (p.y - y0_) / dy_;
  if (fi < -1e-9 || fj < -1e-9 || fi > nbx_ + 1e-9 || fj > nby_ + 1e-9)
    throw LocationError("point outside mesh bounding box");
  const int i = std::clamp(static_cast<int>(fi), 0, nbx_ - 1);
  const int j = std::clamp(static_cast<int>(fj), 0, nby_ - 1);
  constexpr double tol = 1e-12;
  for (int t : buckets_[static_cast<size_t>(j * nbx_ + i)]) {
    const auto& tri = mesh_->triangles()[t];
    const Point2 a = mesh_->vertices()[tri[0]], b = mesh_->vertices()[tri[1]],
                 c = mesh_->vertices()[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double s = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    const double r = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    if (s >= -tol && r >= -tol && s + r <= 1.0 + tol) {
      xi = s;
      eta = r;
      return t;
    }
  }
  throw LocationError("point is not inside any triangle");
}

}  // namespace ppflow
