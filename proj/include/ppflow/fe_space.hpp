#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ppflow/mesh.hpp"
#include "ppflow/quadrature.hpp"

namespace ppflow {

enum class FeKind { P1, P2, P1disc, P2disc, vecP1, vecP2, vecP2disc };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using ScalarFunction = std::function<double(Point2)>;
using VectorFunction = std::function<Vec2(Point2)>;

// Vector spaces store all x-component dofs first, then all y-component dofs.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const TriMesh> mesh, FeKind kind);

  FeKind kind() const { return kind_; }
  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }

  int components() const { return components_; }
  int order() const { return order_; }
  bool discontinuous() const { return discontinuous_; }

  int n_scalar_dofs() const { return n_scalar_; }
  int n_dofs() const { return components_ * n_scalar_; }
  int n_local_scalar() const { return order_ == 1 ? 3 : 6; }
  int n_local() const { return components_ * n_local_scalar(); }

  std::span<const int> scalar_dofs(int t) const {
    return {dof_map_.data() + static_cast<size_t>(t) * n_local_scalar(),
            static_cast<size_t>(n_local_scalar())};
  }
  // Global dof of local index i (component i / n_local_scalar()).
  int dof(int t, int i) const {
    const int ns = n_local_scalar();
    return (i / ns) * n_scalar_ + dof_map_[static_cast<size_t>(t) * ns + i % ns];
  }

  // Coordinates of the Lagrange node of each scalar dof.
  const std::vector<Point2>& nodes() const { return nodes_; }

  // Scalar dofs on edges with the given tag (vertices and midpoints), sorted and unique.
  const std::vector<int>& boundary_scalar_dofs(BoundaryTag tag) const;
  // All dofs (every component) lying on tagged boundary edges.
  std::vector<int> boundary_dofs(BoundaryTag tag) const;
  std::vector<int> all_boundary_dofs() const;
  // Tag of the boundary edge a boundary scalar dof sits on (first match), or -1.
  int scalar_dof_tag(int s) const { return node_tag_[s]; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  FeKind kind_;
  int components_ = 1;
  int order_ = 1;
  bool discontinuous_ = false;
  int n_scalar_ = 0;
  std::vector<int> dof_map_;
  std::vector<Point2> nodes_;
  std::vector<std::vector<int>> boundary_by_tag_;
  std::vector<int> node_tag_;
};

// Reference shape values for the given order at a point: P1 (3) or P2 (6).
void shape_values(int order, double xi, double eta, double* out);
void shape_gradients(int order, double xi, double eta, double (*out)[2]);

struct ElementGeometry {
  double det = 0.0;             // 2 * signed area
  std::array<double, 4> inv_jt; // row-major J^{-T}
  Point2 origin;
  std::array<double, 4> jac;    // row-major J

  Point2 map(double xi, double eta) const {
    return {origin.x + jac[0] * xi + jac[1] * eta, origin.y + jac[2] * xi + jac[3] * eta};
  }
};

ElementGeometry element_geometry(const TriMesh& mesh, int t);

// Scalar basis tabulated on one element for a quadrature rule.
class ElementValues {
 public:
  ElementValues(int order, const QuadratureRule& rule);
  void reinit(const TriMesh& mesh, int t);

  int nq() const { return nq_; }
  int ns() const { return ns_; }
  double jxw(int q) const { return jxw_[q]; }
  double phi(int q, int i) const { return ref_phi_[static_cast<size_t>(q * ns_ + i)]; }
  const double* grad(int q, int i) const { return &grad_[static_cast<size_t>(2 * (q * ns_ + i))]; }
  Point2 point(int q) const { return x_[q]; }

 private:
  int nq_, ns_;
  std::vector<double> weights_;
  std::vector<std::array<double, 2>> ref_pts_;
  std::vector<double> ref_phi_, ref_grad_, grad_, jxw_;
  std::vector<Point2> x_;
};

}  // namespace ppflow
