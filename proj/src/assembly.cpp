#include "ppflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppflow/errors.hpp"

namespace ppflow {

namespace {

template <class Kernel>
void element_loop(const FeSpace& test, const FeSpace& trial, Kernel&& kernel) {
  if (&test.mesh() != &trial.mesh()) throw std::invalid_argument("spaces live on different meshes");
  ElementValues et(test.order(), default_rule()), er(trial.order(), default_rule());
  const int nte = test.n_local(), ntr = trial.n_local();
  std::vector<double> local(static_cast<size_t>(nte * ntr));
  for (int t = 0; t < test.mesh().n_triangles(); ++t) {
    et.reinit(test.mesh(), t);
    er.reinit(trial.mesh(), t);
    std::fill(local.begin(), local.end(), 0.0);
    kernel(t, et, er, local.data());
    kernel.scatter(t, local.data());
  }
}

template <class Body>
struct MatrixSink {
  Body body;
  const SparsityPattern* pat;
  std::vector<double>* vals;
  int ntr;
  void operator()(int t, const ElementValues& et, const ElementValues& er, double* local) {
    body(t, et, er, local);
  }
  void scatter(int t, const double* local) {
    const int nte = pat->n_test_local();
    for (int i = 0; i < nte; ++i)
      for (int j = 0; j < ntr; ++j) (*vals)[pat->position(t, i, j)] += local[i * ntr + j];
  }
};

template <class Body>
CsrMatrix assemble_with(const SparsityPattern& pat, const FeSpace& test, const FeSpace& trial, Body body) {
  if (pat.n_test_local() != test.n_local() || pat.n_trial_local() != trial.n_local())
    throw std::invalid_argument("sparsity pattern does not match spaces");
  CsrMatrix A = pat.zero_matrix();
  if (A.n_rows() != test.n_dofs() || A.n_cols() != trial.n_dofs())
    throw std::invalid_argument("sparsity pattern does not match spaces");
  MatrixSink<Body> sink{std::move(body), &pat, &A.values(), trial.n_local()};
  element_loop(test, trial, sink);
  return A;
}

template <class Body>
struct ApplySink {
  Body body;
  const FeSpace* test;
  const FeSpace* trial;
  const std::vector<double>* u;
  std::vector<double>* out;
  void operator()(int t, const ElementValues& et, const ElementValues& er, double* local) {
    body(t, et, er, local);
  }
  void scatter(int t, const double* local) {
    const int nte = test->n_local(), ntr = trial->n_local();
    double ul[12];
    for (int j = 0; j < ntr; ++j) ul[j] = (*u)[trial->dof(t, j)];
    for (int i = 0; i < nte; ++i) {
      double s = 0.0;
      for (int j = 0; j < ntr; ++j) s += local[i * ntr + j] * ul[j];
      (*out)[test->dof(t, i)] += s;
    }
  }
};

template <class Body>
std::vector<double> apply_with(const FeSpace& test, const FeSpace& trial, const std::vector<double>& u, Body body) {
  if (static_cast<int>(u.size()) != trial.n_dofs()) throw std::invalid_argument("apply: vector length mismatch");
  std::vector<double> out(test.n_dofs(), 0.0);
  ApplySink<Body> sink{std::move(body), &test, &trial, &u, &out};
  element_loop(test, trial, sink);
  return out;
}

void check_vector(const FeSpace& s, const char* what) {
  if (s.components() != 2) throw std::invalid_argument(std::string(what) + " needs a vector space");
}

void check_coeff(const FeSpace& s, const QuadField& c) {
  if (static_cast<int>(c.size()) != s.mesh().n_triangles() * default_nq())
    throw std::invalid_argument("coefficient field size does not match mesh quadrature");
  for (double v : c)
    if (!(v >= 0.0)) throw std::invalid_argument("negative or non-finite diffusion coefficient");
}

auto mass_body(int comps) {
  return [comps](int, const ElementValues& et, const ElementValues& er, double* local) {
    const int nst = et.ns(), nsr = er.ns(), ntr = comps * nsr;
    for (int q = 0; q < et.nq(); ++q) {
      const double w = et.jxw(q);
      for (int a = 0; a < nst; ++a)
        for (int b = 0; b < nsr; ++b) {
          const double v = w * et.phi(q, a) * er.phi(q, b);
          for (int c = 0; c < comps; ++c) local[(c * nst + a) * ntr + c * nsr + b] += v;
        }
    }
  };
}

auto diffusion_body(int comps, const QuadField& coeff) {
  return [comps, &coeff](int t, const ElementValues& et, const ElementValues& er, double* local) {
    const int ns = et.ns(), ntr = comps * ns, nq = et.nq();
    for (int q = 0; q < nq; ++q) {
      const double w = et.jxw(q) * coeff[static_cast<size_t>(t * nq + q)];
      if (w == 0.0) continue;
      for (int a = 0; a < ns; ++a) {
        const double* ga = et.grad(q, a);
        for (int b = 0; b < ns; ++b) {
          const double* gb = er.grad(q, b);
          const double v = w * (ga[0] * gb[0] + ga[1] * gb[1]);
          for (int c = 0; c < comps; ++c) local[(c * ns + a) * ntr + c * ns + b] += v;
        }
      }
    }
  };
}

auto graddiv_body() {
  return [](int, const ElementValues& et, const ElementValues& er, double* local) {
    const int ns = et.ns(), n = 2 * ns;
    for (int q = 0; q < et.nq(); ++q) {
      const double w = et.jxw(q);
      for (int i = 0; i < n; ++i) {
        const double di = et.grad(q, i % ns)[i / ns];
        for (int j = 0; j < n; ++j) local[i * n + j] += w * di * er.grad(q, j % ns)[j / ns];
      }
    }
  };
}

// Element wind values at quadrature points.
void wind_at_qp(const FeSpace& space, const std::vector<double>& wind, int t, const ElementValues& ev,
                double (*w)[2]) {
  const int ns = ev.ns();
  double wl[2][6];
  for (int c = 0; c < 2; ++c)
    for (int s = 0; s < ns; ++s) wl[c][s] = wind[space.dof(t, c * ns + s)];
  for (int q = 0; q < ev.nq(); ++q) {
    w[q][0] = w[q][1] = 0.0;
    for (int s = 0; s < ns; ++s) {
      w[q][0] += wl[0][s] * ev.phi(q, s);
      w[q][1] += wl[1][s] * ev.phi(q, s);
    }
  }
}

auto convection_body(const FeSpace& space, const std::vector<double>& wind) {
  return [&space, &wind](int t, const ElementValues& et, const ElementValues&, double* local) {
    const int ns = et.ns(), n = 2 * ns;
    double w[32][2];
    wind_at_qp(space, wind, t, et, w);
    double X[6][6] = {};
    for (int q = 0; q < et.nq(); ++q) {
      const double jw = 0.5 * et.jxw(q);
      for (int b = 0; b < ns; ++b) {
        const double* g = et.grad(q, b);
        const double adv = jw * (w[q][0] * g[0] + w[q][1] * g[1]);
        for (int a = 0; a < ns; ++a) X[a][b] += adv * et.phi(q, a);
      }
    }
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) {
        const double v = X[a][b] - X[b][a];
        local[a * n + b] = v;
        local[(ns + a) * n + ns + b] = v;
      }
  };
}

}  // namespace

SparsityPattern::SparsityPattern(const FeSpace& test, const FeSpace& trial)
    : n_test_(test.n_local()), n_trial_(trial.n_local()) {
  if (&test.mesh() != &trial.mesh()) throw std::invalid_argument("spaces live on different meshes");
  const int nt = test.mesh().n_triangles();
  std::vector<std::vector<int>> cols(test.n_dofs());
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < n_test_; ++i) {
      auto& row = cols[test.dof(t, i)];
      for (int j = 0; j < n_trial_; ++j) row.push_back(trial.dof(t, j));
    }
  std::vector<int> rp(test.n_dofs() + 1, 0), ci;
  for (int r = 0; r < test.n_dofs(); ++r) {
    auto& row = cols[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    ci.insert(ci.end(), row.begin(), row.end());
    rp[r + 1] = static_cast<int>(ci.size());
  }
  std::vector<double> vals(ci.size(), 0.0);
  zero_ = CsrMatrix(test.n_dofs(), trial.n_dofs(), std::move(rp), std::move(ci), std::move(vals));
  positions_.resize(static_cast<size_t>(nt) * n_test_ * n_trial_);
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < n_test_; ++i)
      for (int j = 0; j < n_trial_; ++j)
        positions_[(static_cast<size_t>(t) * n_test_ + i) * n_trial_ + j] =
            zero_.find(test.dof(t, i), trial.dof(t, j));
}

CsrMatrix assemble_mass(const FeSpace& space) { return assemble_mass(SparsityPattern(space, space), space); }

CsrMatrix assemble_mass(const SparsityPattern& pattern, const FeSpace& space) {
  return assemble_with(pattern, space, space, mass_body(space.components()));
}

CsrMatrix assemble_mass(const FeSpace& test, const FeSpace& trial) {
  if (test.components() != trial.components()) throw std::invalid_argument("mass pairing: component mismatch");
  return assemble_with(SparsityPattern(test, trial), test, trial, mass_body(test.components()));
}

CsrMatrix assemble_diffusion(const FeSpace& space, const QuadField& coeff) {
  return assemble_diffusion(SparsityPattern(space, space), space, coeff);
}

CsrMatrix assemble_diffusion(const SparsityPattern& pattern, const FeSpace& space, const QuadField& coeff) {
  check_coeff(space, coeff);
  return assemble_with(pattern, space, space, diffusion_body(space.components(), coeff));
}

CsrMatrix assemble_graddiv(const FeSpace& space) { return assemble_graddiv(SparsityPattern(space, space), space); }

CsrMatrix assemble_graddiv(const SparsityPattern& pattern, const FeSpace& space) {
  check_vector(space, "assemble_graddiv");
  return assemble_with(pattern, space, space, graddiv_body());
}

CsrMatrix assemble_divergence(const FeSpace& vel, const FeSpace& pres) {
  check_vector(vel, "assemble_divergence");
  if (pres.components() != 1) throw std::invalid_argument("pressure space must be scalar");
  return assemble_with(SparsityPattern(pres, vel), pres, vel,
                       [](int, const ElementValues& et, const ElementValues& er, double* local) {
                         const int nsp = et.ns(), nsv = er.ns(), ntr = 2 * nsv;
                         for (int q = 0; q < et.nq(); ++q)
                           for (int a = 0; a < nsp; ++a) {
                             const double w = et.jxw(q) * et.phi(q, a);
                             for (int j = 0; j < ntr; ++j) local[a * ntr + j] += w * er.grad(q, j % nsv)[j / nsv];
                           }
                       });
}

CsrMatrix assemble_gradient_pairing(const FeSpace& vel, const FeSpace& pres) {
  check_vector(vel, "assemble_gradient_pairing");
  if (pres.components() != 1) throw std::invalid_argument("pressure space must be scalar");
  return assemble_with(SparsityPattern(pres, vel), pres, vel,
                       [](int, const ElementValues& et, const ElementValues& er, double* local) {
                         const int nsp = et.ns(), nsv = er.ns(), ntr = 2 * nsv;
                         for (int q = 0; q < et.nq(); ++q)
                           for (int a = 0; a < nsp; ++a) {
                             const double* g = et.grad(q, a);
                             for (int j = 0; j < ntr; ++j)
                               local[a * ntr + j] += et.jxw(q) * g[j / nsv] * er.phi(q, j % nsv);
                           }
                       });
}

CsrMatrix assemble_convection(const FeSpace& space, const std::vector<double>& wind) {
  return assemble_convection(SparsityPattern(space, space), space, wind);
}

CsrMatrix assemble_convection(const SparsityPattern& pattern, const FeSpace& space, const std::vector<double>& wind) {
  check_vector(space, "assemble_convection");
  if (static_cast<int>(wind.size()) != space.n_dofs()) throw std::invalid_argument("wind length mismatch");
  return assemble_with(pattern, space, space, convection_body(space, wind));
}

std::vector<double> apply_convection(const FeSpace& space, const std::vector<double>& wind,
                                     const std::vector<double>& u) {
  check_vector(space, "apply_convection");
  if (static_cast<int>(wind.size()) != space.n_dofs()) throw std::invalid_argument("wind length mismatch");
  return apply_with(space, space, u, convection_body(space, wind));
}

std::vector<double> apply_diffusion(const FeSpace& space, const QuadField& coeff, const std::vector<double>& u) {
  if (static_cast<int>(coeff.size()) != space.mesh().n_triangles() * default_nq())
    throw std::invalid_argument("coefficient field size does not match mesh quadrature");
  return apply_with(space, space, u, diffusion_body(space.components(), coeff));
}

std::vector<double> assemble_load(const FeSpace& space, const TimeVectorFunction& f, double t) {
  check_vector(space, "assemble_load");
  std::vector<double> b(space.n_dofs(), 0.0);
  ElementValues ev(space.order(), default_rule());
  const int ns = ev.ns();
  for (int e = 0; e < space.mesh().n_triangles(); ++e) {
    ev.reinit(space.mesh(), e);
    for (int q = 0; q < ev.nq(); ++q) {
      const Vec2 fv = f(ev.point(q), t);
      for (int s = 0; s < ns; ++s) {
        const double w = ev.jxw(q) * ev.phi(q, s);
        b[space.dof(e, s)] += w * fv.x;
        b[space.dof(e, ns + s)] += w * fv.y;
      }
    }
  }
  return b;
}

std::vector<double> assemble_load(const FeSpace& space, const ScalarFunction& f) {
  if (space.components() != 1) throw std::invalid_argument("scalar load needs a scalar space");
  std::vector<double> b(space.n_dofs(), 0.0);
  ElementValues ev(space.order(), default_rule());
  for (int e = 0; e < space.mesh().n_triangles(); ++e) {
    ev.reinit(space.mesh(), e);
    for (int q = 0; q < ev.nq(); ++q) {
      const double fv = f(ev.point(q));
      for (int s = 0; s < ev.ns(); ++s) b[space.dof(e, s)] += ev.jxw(q) * ev.phi(q, s) * fv;
    }
  }
  return b;
}

std::vector<double> mean_row(const FeSpace& space) {
  return assemble_load(space, [](Point2) { return 1.0; });
}

std::vector<double> interpolate(const FeSpace& space, const VectorFunction& f) {
  check_vector(space, "vector interpolate");
  const int ns = space.n_scalar_dofs();
  std::vector<double> out(space.n_dofs());
  for (int s = 0; s < ns; ++s) {
    const Vec2 v = f(space.nodes()[s]);
    out[s] = v.x;
    out[ns + s] = v.y;
  }
  return out;
}

std::vector<double> interpolate(const FeSpace& space, const ScalarFunction& f) {
  if (space.components() != 1) throw std::invalid_argument("scalar interpolate needs a scalar space");
  std::vector<double> out(space.n_dofs());
  for (int s = 0; s < space.n_dofs(); ++s) out[s] = f(space.nodes()[s]);
  return out;
}

int default_nq() { return default_rule().size(); }

std::vector<Point2> quadrature_points(const TriMesh& mesh) {
  const QuadratureRule& r = default_rule();
  std::vector<Point2> pts;
  pts.reserve(static_cast<size_t>(mesh.n_triangles() * r.size()));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (const auto& p : r.points) pts.push_back(g.map(p[0], p[1]));
  }
  return pts;
}

QuadField sample_at_qp(const TriMesh& mesh, const ScalarFunction& f) {
  QuadField out;
  for (const Point2& p : quadrature_points(mesh)) out.push_back(f(p));
  return out;
}

std::vector<double> values_at_qp(const FeSpace& space, const std::vector<double>& dofs) {
  if (static_cast<int>(dofs.size()) != space.n_dofs()) throw std::invalid_argument("values_at_qp: length mismatch");
  const int nc = space.components(), nq = default_nq();
  const int ns = space.n_local_scalar();
  std::vector<double> out(static_cast<size_t>(space.mesh().n_triangles() * nq * nc), 0.0);
  ElementValues ev(space.order(), default_rule());
  for (int t = 0; t < space.mesh().n_triangles(); ++t)
    for (int c = 0; c < nc; ++c)
      for (int s = 0; s < ns; ++s) {
        const double d = dofs[space.dof(t, c * ns + s)];
        for (int q = 0; q < nq; ++q) out[static_cast<size_t>((t * nq + q) * nc + c)] += d * ev.phi(q, s);
      }
  return out;
}

QuadField divergence_at_qp(const FeSpace& space, const std::vector<double>& dofs) {
  check_vector(space, "divergence_at_qp");
  if (static_cast<int>(dofs.size()) != space.n_dofs()) throw std::invalid_argument("divergence_at_qp: length mismatch");
  const int nq = default_nq(), ns = space.n_local_scalar();
  QuadField out(static_cast<size_t>(space.mesh().n_triangles() * nq), 0.0);
  ElementValues ev(space.order(), default_rule());
  for (int t = 0; t < space.mesh().n_triangles(); ++t) {
    ev.reinit(space.mesh(), t);
    for (int j = 0; j < 2 * ns; ++j) {
      const double d = dofs[space.dof(t, j)];
      for (int q = 0; q < nq; ++q) out[static_cast<size_t>(t * nq + q)] += d * ev.grad(q, j % ns)[j / ns];
    }
  }
  return out;
}

std::vector<double> evaluate_field(const FeSpace& space, const std::vector<double>& dofs,
                                   const std::vector<Point2>& points) {
  if (static_cast<int>(dofs.size()) != space.n_dofs()) throw std::invalid_argument("evaluate_field: length mismatch");
  PointLocator loc(space.mesh());
  const int nc = space.components(), ns = space.n_local_scalar();
  std::vector<double> out;
  out.reserve(points.size() * nc);
  double phi[6];
  for (const Point2& p : points) {
    double xi, eta;
    const int t = loc.locate(p, xi, eta);
    shape_values(space.order(), xi, eta, phi);
    for (int c = 0; c < nc; ++c) {
      double v = 0.0;
      for (int s = 0; s < ns; ++s) v += dofs[space.dof(t, c * ns + s)] * phi[s];
      out.push_back(v);
    }
  }
  return out;
}

namespace {

// Integrates a per-point functional of (value[2], gradient[4]) of an FE function.
template <class F>
double integrate_fe(const FeSpace& space, const std::vector<double>& dofs, const QuadratureRule& rule, F&& f) {
  if (static_cast<int>(dofs.size()) != space.n_dofs()) throw std::invalid_argument("norm: length mismatch");
  ElementValues ev(space.order(), rule);
  const int nc = space.components(), ns = ev.ns();
  double sum = 0.0;
  for (int t = 0; t < space.mesh().n_triangles(); ++t) {
    ev.reinit(space.mesh(), t);
    for (int q = 0; q < ev.nq(); ++q) {
      double val[2] = {0.0, 0.0}, grad[4] = {0.0, 0.0, 0.0, 0.0};
      for (int c = 0; c < nc; ++c)
        for (int s = 0; s < ns; ++s) {
          const double d = dofs[space.dof(t, c * ns + s)];
          val[c] += d * ev.phi(q, s);
          grad[2 * c] += d * ev.grad(q, s)[0];
          grad[2 * c + 1] += d * ev.grad(q, s)[1];
        }
      sum += ev.jxw(q) * f(ev.point(q), val, grad);
    }
  }
  return sum;
}

}  // namespace

double l2_norm(const FeSpace& space, const std::vector<double>& dofs) {
  return std::sqrt(integrate_fe(space, dofs, default_rule(),
                                [](Point2, const double* v, const double*) { return v[0] * v[0] + v[1] * v[1]; }));
}

double h1_seminorm(const FeSpace& space, const std::vector<double>& dofs) {
  return std::sqrt(integrate_fe(space, dofs, default_rule(), [](Point2, const double*, const double* g) {
    return g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
  }));
}

double divergence_l2(const FeSpace& space, const std::vector<double>& dofs) {
  check_vector(space, "divergence_l2");
  return std::sqrt(integrate_fe(space, dofs, default_rule(), [](Point2, const double*, const double* g) {
    return (g[0] + g[3]) * (g[0] + g[3]);
  }));
}

double integral(const FeSpace& space, const std::vector<double>& dofs) {
  if (space.components() != 1) throw std::invalid_argument("integral needs a scalar space");
  return integrate_fe(space, dofs, default_rule(), [](Point2, const double* v, const double*) { return v[0]; });
}

ErrorPair vector_error(const FeSpace& space, const std::vector<double>& dofs, const ExactVectorField& exact,
                       const QuadratureRule& rule) {
  check_vector(space, "vector_error");
  const double h1 = integrate_fe(space, dofs, rule, [&](Point2 p, const double*, const double* g) {
    const auto G = exact.gradient(p);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += (g[k] - G[k]) * (g[k] - G[k]);
    return s;
  });
  const double l2 = integrate_fe(space, dofs, rule, [&](Point2 p, const double* v, const double*) {
    const Vec2 u = exact.value(p);
    return (v[0] - u.x) * (v[0] - u.x) + (v[1] - u.y) * (v[1] - u.y);
  });
  return {std::sqrt(l2), std::sqrt(h1)};
}

double scalar_error_mean_free(const FeSpace& space, const std::vector<double>& dofs, const ScalarFunction& exact,
                              const QuadratureRule& rule) {
  if (space.components() != 1) throw std::invalid_argument("scalar_error_mean_free needs a scalar space");
  const double area = space.mesh().total_area();
  const double mh = integrate_fe(space, dofs, rule, [](Point2, const double* v, const double*) { return v[0]; }) / area;
  const double me = integrate_fe(space, dofs, rule, [&](Point2 p, const double*, const double*) { return exact(p); }) / area;
  const double e2 = integrate_fe(space, dofs, rule, [&](Point2 p, const double* v, const double*) {
    const double d = (v[0] - mh) - (exact(p) - me);
    return d * d;
  });
  return std::sqrt(e2);
}

}  // namespace ppflow
