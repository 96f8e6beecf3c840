#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ppflow {

struct Triplet {
  int row, col;
  double value;
};

class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int n_rows, int n_cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values);

  // Duplicates are summed; explicit zeros are kept as structural entries.
  static CsrMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries);
  static CsrMatrix identity(int n);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double at(int r, int c) const;
  // Position of (r, c) in values(), or -1.
  int find(int r, int c) const;

  std::vector<double> multiply(const std::vector<double>& x) const;
  void multiply_add(const std::vector<double>& x, std::vector<double>& y, double alpha = 1.0) const;
  std::vector<double> multiply_transpose(const std::vector<double>& x) const;
  CsrMatrix transpose() const;

  bool same_pattern(const CsrMatrix& other) const;
  // this += alpha * other; patterns must match.
  void add_same_pattern(const CsrMatrix& other, double alpha = 1.0);
  void scale(double alpha);

  double max_abs() const;
  // max |A - A^T| over entries.
  double asymmetry() const;

  // Replace each listed row by the identity row (diagonal must be structural).
  void set_identity_rows(const std::vector<int>& rows);

  std::vector<std::vector<double>> to_dense() const;

 private:
  int n_rows_ = 0, n_cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// [[A, B^T, 0], [B, 0, m], [0, m^T, 0]]; the last block row/column only with a mean row.
CsrMatrix compose_saddle(const CsrMatrix& A, const CsrMatrix& B,
                         const std::optional<std::vector<double>>& mean_row = std::nullopt);

void write_matrix_market(const CsrMatrix& A, const std::string& path);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
double norm_inf(const std::vector<double>& a);

}  // namespace ppflow
