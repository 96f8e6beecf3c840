#include "ppflow/factorization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <umfpack.h>

#include "ppflow/errors.hpp"

namespace ppflow {

namespace {

constexpr double kMinRcond = 1e-14;

}  // namespace

// UMFPACK is column oriented: the CSR arrays of A are the CSC arrays of A^T, so every
// solve uses the transposed system flag.
struct Factorization::Impl {
  int n = 0;
  bool symmetric = false;
  double rcond = 0.0;
  std::vector<int> ap, ai;
  std::vector<double> ax;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];

  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
  }
};

Factorization::Factorization(const CsrMatrix& A) {
  if (A.n_rows() != A.n_cols()) throw std::invalid_argument("factorize: matrix must be square");
  auto impl = std::make_shared<Impl>();
  impl->n = A.n_rows();
  impl->ap = A.row_ptr();
  impl->ai = A.col_idx();
  impl->ax = A.values();
  for (double v : impl->ax)
    if (!std::isfinite(v)) throw NonFiniteError("factorize: non-finite matrix entry");
  impl->symmetric = A.asymmetry() <= 1e-14 * A.max_abs();

  umfpack_di_defaults(impl->control);
  // AMD on A + A^T, also for the unsymmetric systems
  impl->control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  double info[UMFPACK_INFO];
  void* symbolic = nullptr;
  int status = umfpack_di_symbolic(impl->n, impl->n, impl->ap.data(), impl->ai.data(),
                                   impl->ax.data(), &symbolic, impl->control, info);
  if (status != UMFPACK_OK) {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    if (status == UMFPACK_ERROR_out_of_memory) throw std::runtime_error("factorize: out of memory");
    throw SingularMatrixError("symbolic analysis failed, status " + std::to_string(status));
  }
  status = umfpack_di_numeric(impl->ap.data(), impl->ai.data(), impl->ax.data(), symbolic,
                              &impl->numeric, impl->control, info);
  umfpack_di_free_symbolic(&symbolic);
  if (status == UMFPACK_WARNING_singular_matrix)
    throw SingularMatrixError("matrix is singular (zero pivot)");
  if (status != UMFPACK_OK) {
    if (status == UMFPACK_ERROR_out_of_memory) throw std::runtime_error("factorize: out of memory");
    throw SingularMatrixError("numeric factorization failed, status " + std::to_string(status));
  }
  impl->rcond = info[UMFPACK_RCOND];
  if (!(impl->rcond >= kMinRcond))
    throw SingularMatrixError("matrix is numerically singular (rcond " + std::to_string(impl->rcond) + ")");
  impl_ = std::move(impl);
}

int Factorization::dimension() const { return impl_->n; }
bool Factorization::symmetric() const { return impl_->symmetric; }
double Factorization::rcond() const { return impl_->rcond; }

std::vector<double> Factorization::solve(const std::vector<double>& b) const {
  if (static_cast<int>(b.size()) != impl_->n) throw std::invalid_argument("solve: rhs length mismatch");
  std::vector<double> x(b.size());
  double info[UMFPACK_INFO];
  const int status = umfpack_di_solve(UMFPACK_Aat, impl_->ap.data(), impl_->ai.data(), impl_->ax.data(),
                                      x.data(), b.data(), impl_->numeric, impl_->control, info);
  if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
    throw std::runtime_error("solve failed, status " + std::to_string(status));
  return x;
}

Factorization factorize(const CsrMatrix& A) { return Factorization(A); }

std::vector<std::vector<double>> solve_multi(const Factorization& F,
                                             const std::vector<std::vector<double>>& rhs_block) {
  std::vector<std::vector<double>> out;
  out.reserve(rhs_block.size());
  for (const auto& b : rhs_block) out.push_back(F.solve(b));
  return out;
}

}  // namespace ppflow
