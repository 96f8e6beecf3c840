#include "ppflow/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppflow {

namespace {

constexpr int kNumTags = 8;

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const TriMesh> mesh, FeKind kind)
    : mesh_(std::move(mesh)), kind_(kind) {
  if (!mesh_) throw std::invalid_argument("FeSpace needs a mesh");
  switch (kind) {
    case FeKind::P1: break;
    case FeKind::P2: order_ = 2; break;
    case FeKind::P1disc: discontinuous_ = true; break;
    case FeKind::P2disc: order_ = 2, discontinuous_ = true; break;
    case FeKind::vecP1: components_ = 2; break;
    case FeKind::vecP2: components_ = 2, order_ = 2; break;
    case FeKind::vecP2disc: components_ = 2, order_ = 2, discontinuous_ = true; break;
  }
  const TriMesh& m = *mesh_;
  const int nt = m.n_triangles(), nls = n_local_scalar();
  dof_map_.resize(static_cast<size_t>(nt * nls));
  if (discontinuous_) {
    n_scalar_ = nt * nls;
    nodes_.resize(n_scalar_);
    for (int t = 0; t < nt; ++t) {
      const auto& tri = m.triangles()[t];
      const auto& ed = m.triangle_edges(t);
      for (int i = 0; i < nls; ++i) {
        const int d = t * nls + i;
        dof_map_[d] = d;
        if (i < 3) {
          nodes_[d] = m.vertices()[tri[i]];
        } else {
          const auto& e = m.edges()[ed[i - 3]];
          nodes_[d] = {0.5 * (m.vertices()[e[0]].x + m.vertices()[e[1]].x),
                       0.5 * (m.vertices()[e[0]].y + m.vertices()[e[1]].y)};
        }
      }
    }
  } else {
    const int nv = m.n_vertices();
    n_scalar_ = order_ == 1 ? nv : nv + m.n_edges();
    nodes_ = m.vertices();
    if (order_ == 2)
      for (const auto& e : m.edges())
        nodes_.push_back({0.5 * (m.vertices()[e[0]].x + m.vertices()[e[1]].x),
                          0.5 * (m.vertices()[e[0]].y + m.vertices()[e[1]].y)});
    for (int t = 0; t < nt; ++t) {
      const auto& tri = m.triangles()[t];
      for (int i = 0; i < 3; ++i) dof_map_[static_cast<size_t>(t * nls + i)] = tri[i];
      if (order_ == 2)
        for (int k = 0; k < 3; ++k)
          dof_map_[static_cast<size_t>(t * nls + 3 + k)] = nv + m.triangle_edges(t)[k];
    }
  }

  // Boundary dofs: every scalar dof whose node lies on a tagged edge of a triangle.
  boundary_by_tag_.assign(kNumTags, {});
  node_tag_.assign(n_scalar_, -1);
  for (int t = 0; t < nt; ++t) {
    const auto& ed = m.triangle_edges(t);
    for (int k = 0; k < 3; ++k) {
      const int tag = m.edge_tag(ed[k]);
      if (tag < 0) continue;
      const int a = (k + 1) % 3, b = (k + 2) % 3;
      std::vector<int> local = {a, b};
      if (order_ == 2) local.push_back(3 + k);
      for (int i : local) {
        const int s = dof_map_[static_cast<size_t>(t * nls + i)];
        boundary_by_tag_[tag].push_back(s);
        if (node_tag_[s] < 0) node_tag_[s] = tag;
      }
    }
  }
  for (auto& v : boundary_by_tag_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

const std::vector<int>& FeSpace::boundary_scalar_dofs(BoundaryTag tag) const {
  return boundary_by_tag_[static_cast<int>(tag)];
}

std::vector<int> FeSpace::boundary_dofs(BoundaryTag tag) const {
  std::vector<int> out;
  for (int c = 0; c < components_; ++c)
    for (int s : boundary_scalar_dofs(tag)) out.push_back(c * n_scalar_ + s);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> FeSpace::all_boundary_dofs() const {
  std::vector<int> out;
  for (int s = 0; s < n_scalar_; ++s)
    if (node_tag_[s] >= 0)
      for (int c = 0; c < components_; ++c) out.push_back(c * n_scalar_ + s);
  std::sort(out.begin(), out.end());
  return out;
}

void shape_values(int order, double xi, double eta, double* out) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  if (order == 1) {
    out[0] = l0, out[1] = l1, out[2] = l2;
    return;
  }
  out[0] = l0 * (2.0 * l0 - 1.0);
  out[1] = l1 * (2.0 * l1 - 1.0);
  out[2] = l2 * (2.0 * l2 - 1.0);
  out[3] = 4.0 * l1 * l2;
  out[4] = 4.0 * l2 * l0;
  out[5] = 4.0 * l0 * l1;
}

void shape_gradients(int order, double xi, double eta, double (*out)[2]) {
  static constexpr double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (order == 1) {
    for (int i = 0; i < 3; ++i) out[i][0] = dl[i][0], out[i][1] = dl[i][1];
    return;
  }
  const double l[3] = {1.0 - xi - eta, xi, eta};
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 2; ++d) out[i][d] = (4.0 * l[i] - 1.0) * dl[i][d];
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    for (int d = 0; d < 2; ++d) out[3 + k][d] = 4.0 * (dl[a][d] * l[b] + l[a] * dl[b][d]);
  }
}

ElementGeometry element_geometry(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles()[t];
  const Point2 a = mesh.vertices()[tri[0]], b = mesh.vertices()[tri[1]], c = mesh.vertices()[tri[2]];
  ElementGeometry g;
  g.origin = a;
  g.jac = {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
  g.det = g.jac[0] * g.jac[3] - g.jac[1] * g.jac[2];
  // J^{-T} = (1/det) [[d, -c], [-b, a]] for J = [[a, b], [c, d]]
  g.inv_jt = {g.jac[3] / g.det, -g.jac[2] / g.det, -g.jac[1] / g.det, g.jac[0] / g.det};
  return g;
}

ElementValues::ElementValues(int order, const QuadratureRule& rule)
    : nq_(rule.size()), ns_(order == 1 ? 3 : 6), weights_(rule.weights) {
  ref_phi_.resize(static_cast<size_t>(nq_ * ns_));
  ref_grad_.resize(static_cast<size_t>(2 * nq_ * ns_));
  grad_.resize(ref_grad_.size());
  jxw_.resize(nq_);
  x_.resize(nq_);
  ref_pts_ = rule.points;
  double g[6][2];
  for (int q = 0; q < nq_; ++q) {
    shape_values(order, rule.points[q][0], rule.points[q][1], &ref_phi_[static_cast<size_t>(q * ns_)]);
    shape_gradients(order, rule.points[q][0], rule.points[q][1], g);
    for (int i = 0; i < ns_; ++i) {
      ref_grad_[static_cast<size_t>(2 * (q * ns_ + i))] = g[i][0];
      ref_grad_[static_cast<size_t>(2 * (q * ns_ + i) + 1)] = g[i][1];
    }
  }
}

void ElementValues::reinit(const TriMesh& mesh, int t) {
  const ElementGeometry geo = element_geometry(mesh, t);
  const double adet = std::abs(geo.det);
  const auto& m = geo.inv_jt;
  for (int q = 0; q < nq_; ++q) {
    jxw_[q] = weights_[q] * adet;
    x_[q] = geo.map(ref_pts_[q][0], ref_pts_[q][1]);
    for (int i = 0; i < ns_; ++i) {
      const size_t k = static_cast<size_t>(2 * (q * ns_ + i));
      const double gx = ref_grad_[k], gy = ref_grad_[k + 1];
      grad_[k] = m[0] * gx + m[1] * gy;
      grad_[k + 1] = m[2] * gx + m[3] * gy;
    }
  }
}

}  // namespace ppflow
