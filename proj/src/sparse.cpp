#include "ppflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ppflow {

CsrMatrix::CsrMatrix(int n_rows, int n_cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != n_rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<int>(col_idx_.size()) || col_idx_.size() != values_.size())
    throw std::invalid_argument("inconsistent CSR arrays");
  for (int r = 0; r < n_rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw std::invalid_argument("row_ptr not monotone");
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= n_cols_) throw std::invalid_argument("column out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("columns not strictly sorted");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> rp(n_rows + 1, 0), ci;
  std::vector<double> v;
  ci.reserve(entries.size());
  v.reserve(entries.size());
  for (size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.row < 0 || e.row >= n_rows || e.col < 0 || e.col >= n_cols)
      throw std::invalid_argument("triplet out of range");
    if (k > 0 && e.row == entries[k - 1].row && e.col == entries[k - 1].col) {
      v.back() += e.value;
      continue;
    }
    ci.push_back(e.col);
    v.push_back(e.value);
    ++rp[e.row + 1];
  }
  for (int r = 0; r < n_rows; ++r) rp[r + 1] += rp[r];
  return CsrMatrix(n_rows, n_cols, std::move(rp), std::move(ci), std::move(v));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> rp(n + 1), ci(n);
  for (int i = 0; i < n; ++i) rp[i + 1] = i + 1, ci[i] = i;
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

int CsrMatrix::find(int r, int c) const {
  auto b = col_idx_.begin() + row_ptr_[r], e = col_idx_.begin() + row_ptr_[r + 1];
  auto it = std::lower_bound(b, e, c);
  return (it != e && *it == c) ? static_cast<int>(it - col_idx_.begin()) : -1;
}

double CsrMatrix::at(int r, int c) const {
  const int k = find(r, c);
  return k < 0 ? 0.0 : values_[k];
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_rows_, 0.0);
  multiply_add(x, y);
  return y;
}

void CsrMatrix::multiply_add(const std::vector<double>& x, std::vector<double>& y, double alpha) const {
  if (static_cast<int>(x.size()) != n_cols_ || static_cast<int>(y.size()) != n_rows_)
    throw std::invalid_argument("multiply: dimension mismatch");
  for (int r = 0; r < n_rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] += alpha * s;
  }
}

std::vector<double> CsrMatrix::multiply_transpose(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_rows_) throw std::invalid_argument("multiply_transpose: dimension mismatch");
  std::vector<double> y(n_cols_, 0.0);
  for (int r = 0; r < n_rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * x[r];
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> rp(n_cols_ + 1, 0);
  for (int c : col_idx_) ++rp[c + 1];
  for (int c = 0; c < n_cols_; ++c) rp[c + 1] += rp[c];
  std::vector<int> next(rp.begin(), rp.end() - 1), ci(col_idx_.size());
  std::vector<double> v(values_.size());
  for (int r = 0; r < n_rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int p = next[col_idx_[k]]++;
      ci[p] = r;
      v[p] = values_[k];
    }
  return CsrMatrix(n_cols_, n_rows_, std::move(rp), std::move(ci), std::move(v));
}

bool CsrMatrix::same_pattern(const CsrMatrix& o) const {
  return n_rows_ == o.n_rows_ && n_cols_ == o.n_cols_ && row_ptr_ == o.row_ptr_ && col_idx_ == o.col_idx_;
}

void CsrMatrix::add_same_pattern(const CsrMatrix& o, double alpha) {
  if (!same_pattern(o)) throw std::invalid_argument("add_same_pattern: patterns differ");
  for (size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * o.values_[k];
}

void CsrMatrix::scale(double alpha) {
  for (double& v : values_) v *= alpha;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::asymmetry() const {
  if (n_rows_ != n_cols_) throw std::invalid_argument("asymmetry of non-square matrix");
  double m = 0.0;
  for (int r = 0; r < n_rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m = std::max(m, std::abs(values_[k] - at(col_idx_[k], r)));
  return m;
}

void CsrMatrix::set_identity_rows(const std::vector<int>& rows) {
  for (int r : rows) {
    bool diag = false;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      values_[k] = col_idx_[k] == r ? 1.0 : 0.0;
      diag = diag || col_idx_[k] == r;
    }
    if (!diag) throw std::invalid_argument("set_identity_rows: missing diagonal entry");
  }
}

std::vector<std::vector<double>> CsrMatrix::to_dense() const {
  std::vector<std::vector<double>> d(n_rows_, std::vector<double>(n_cols_, 0.0));
  for (int r = 0; r < n_rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d[r][col_idx_[k]] = values_[k];
  return d;
}

CsrMatrix compose_saddle(const CsrMatrix& A, const CsrMatrix& B,
                         const std::optional<std::vector<double>>& mean_row) {
  const int n = A.n_rows(), m = B.n_rows();
  if (A.n_cols() != n) throw std::invalid_argument("compose_saddle: A must be square");
  if (B.n_cols() != n) throw std::invalid_argument("compose_saddle: B columns must match A");
  if (mean_row && static_cast<int>(mean_row->size()) != m)
    throw std::invalid_argument("compose_saddle: mean row length must match B rows");
  const CsrMatrix Bt = B.transpose();
  const int N = n + m + (mean_row ? 1 : 0);
  std::vector<int> rp(N + 1, 0), ci;
  std::vector<double> v;
  ci.reserve(A.nnz() + 2 * B.nnz() + (mean_row ? 2 * m : 0));
  v.reserve(ci.capacity());
  auto push_row = [&](const CsrMatrix& M, int r, int offset) {
    for (int k = M.row_ptr()[r]; k < M.row_ptr()[r + 1]; ++k) {
      ci.push_back(M.col_idx()[k] + offset);
      v.push_back(M.values()[k]);
    }
  };
  for (int r = 0; r < n; ++r) {
    push_row(A, r, 0);
    push_row(Bt, r, n);
    rp[r + 1] = static_cast<int>(ci.size());
  }
  for (int r = 0; r < m; ++r) {
    push_row(B, r, 0);
    if (mean_row) {
      ci.push_back(n + m);
      v.push_back((*mean_row)[r]);
    }
    rp[n + r + 1] = static_cast<int>(ci.size());
  }
  if (mean_row) {
    for (int r = 0; r < m; ++r) {
      ci.push_back(n + r);
      v.push_back((*mean_row)[r]);
    }
    rp[N] = static_cast<int>(ci.size());
  }
  return CsrMatrix(N, N, std::move(rp), std::move(ci), std::move(v));
}

void write_matrix_market(const CsrMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n_rows() << ' ' << A.n_cols() << ' ' << A.nnz() << '\n';
  char buf[64];
  for (int r = 0; r < A.n_rows(); ++r)
    for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", A.values()[k]);
      out << r + 1 << ' ' << A.col_idx()[k] + 1 << ' ' << buf << '\n';
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace ppflow
