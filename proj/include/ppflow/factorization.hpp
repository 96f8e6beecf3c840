#pragma once

#include <memory>
#include <vector>

#include "ppflow/sparse.hpp"

namespace ppflow {

// Sparse LU with fill-reducing ordering; immutable once built and shareable read-only.
class Factorization {
 public:
  explicit Factorization(const CsrMatrix& A);

  int dimension() const;
  bool symmetric() const;
  // Reciprocal pivot-ratio estimate reported by the factorization.
  double rcond() const;

  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

Factorization factorize(const CsrMatrix& A);

std::vector<std::vector<double>> solve_multi(const Factorization& F,
                                             const std::vector<std::vector<double>>& rhs_block);

}  // namespace ppflow
