#pragma once

#include <random>
#include <vector>

#include "ppflow/schemes.hpp"

namespace ppflow::testing {

inline std::vector<double> random_vector(size_t n, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

struct DarcyResult {
  std::vector<double> velocity;  // vecP2disc coefficients
  std::vector<double> pressure;
};

// Mixed L2-projection: (u_t, v) + dt (grad p, v) = (u_hat, v),  (u_t, grad q) = <u_hat . n, q>.
inline DarcyResult darcy_projection(const FeSpace& V, const FeSpace& Q, const std::vector<double>& u_hat, double dt) {
  const FeSpace Y(V.mesh_ptr(), FeKind::vecP2disc);
  const CsrMatrix MY = assemble_mass(Y);
  CsrMatrix DY = assemble_gradient_pairing(Y, Q);
  DY.scale(dt);
  const CsrMatrix K = compose_saddle(MY, DY, mean_row(Q));
  const CsrMatrix P = assemble_mass(Y, V);
  const CsrMatrix B = assemble_divergence(V, Q);
  const CsrMatrix D = assemble_gradient_pairing(V, Q);

  std::vector<double> rhs = P.multiply(u_hat);
  std::vector<double> flux = B.multiply(u_hat);
  D.multiply_add(u_hat, flux);
  for (double f : flux) rhs.push_back(dt * f);
  rhs.push_back(0.0);
  const auto sol = Factorization(K).solve(rhs);
  DarcyResult r;
  r.velocity.assign(sol.begin(), sol.begin() + Y.n_dofs());
  r.pressure.assign(sol.begin() + Y.n_dofs(), sol.begin() + Y.n_dofs() + Q.n_dofs());
  return r;
}

// u_hat - dt grad p written in vecP2disc coefficients.
inline std::vector<double> corrected_velocity_disc(const FeSpace& V, const FeSpace& Q, const std::vector<double>& u_hat,
                                                   const std::vector<double>& p, double dt) {
  const FeSpace Y(V.mesh_ptr(), FeKind::vecP2disc);
  std::vector<double> out(static_cast<size_t>(Y.n_dofs()));
  const TriMesh& mesh = V.mesh();
  double g[3][2];
  shape_gradients(1, 0.0, 0.0, g);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& m = element_geometry(mesh, t).inv_jt;
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double pk = p[Q.dof(t, k)];
      gx += pk * (m[0] * g[k][0] + m[1] * g[k][1]);
      gy += pk * (m[2] * g[k][0] + m[3] * g[k][1]);
    }
    for (int i = 0; i < 6; ++i) {
      out[Y.dof(t, i)] = u_hat[V.dof(t, i)] - dt * gx;
      out[Y.dof(t, 6 + i)] = u_hat[V.dof(t, 6 + i)] - dt * gy;
    }
  }
  return out;
}

}  // namespace ppflow::testing
