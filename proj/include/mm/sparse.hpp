#pragma once

#include <span>
#include <vector>

namespace mm {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse-row matrix. Column indices are strictly increasing
/// within each row and duplicates are summed at assembly.
struct SparseMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_offsets;  // size n_rows + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }

  std::span<const int> row_cols(int r) const {
    return {col_indices.data() + row_offsets[r],
            static_cast<size_t>(row_offsets[r + 1] - row_offsets[r])};
  }
  std::span<const double> row_vals(int r) const {
    return {values.data() + row_offsets[r],
            static_cast<size_t>(row_offsets[r + 1] - row_offsets[r])};
  }

  double max_abs() const;
};

/// Canonical CSR from coordinate triplets (0-based); duplicates summed.
SparseMatrix assemble(int n_rows, int n_cols, const std::vector<Triplet>& triplets);

SparseMatrix identity(int n);

/// y = A x.
std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);
void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

SparseMatrix transpose(const SparseMatrix& A);

/// C = A + alpha * B, sparsity merged.
SparseMatrix add_scaled(const SparseMatrix& A, double alpha, const SparseMatrix& B);

/// Rows listed in `rows` (0-based, any order) taken from `source`, the rest from A.
SparseMatrix replace_rows(const SparseMatrix& A, std::span<const int> rows,
                          const SparseMatrix& source);

/// Rows listed in `rows` become row(A) + row(source), the rest stay rows of A.
SparseMatrix add_rows(const SparseMatrix& A, std::span<const int> rows,
                      const SparseMatrix& source);

/// A2 * diag(d)^{-1} * B. Fails on zero diagonal entries.
SparseMatrix triple_product_diag(const SparseMatrix& A2, std::span<const double> d,
                                 const SparseMatrix& B);

/// Diagonal of a square matrix (missing entries are zero).
std::vector<double> diagonal(const SparseMatrix& A);

/// max |A - A^T| entrywise.
double symmetry_defect(const SparseMatrix& A);

}  // namespace mm
