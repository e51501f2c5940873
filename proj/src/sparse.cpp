#include "mm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"

namespace mm {

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix assemble(int n_rows, int n_cols, const std::vector<Triplet>& triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
      throw AssemblyError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                          ") out of range for " + std::to_string(n_rows) + "x" +
                          std::to_string(n_cols));
    }
  }
  std::vector<int> order(triplets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (triplets[a].row != triplets[b].row) return triplets[a].row < triplets[b].row;
    return triplets[a].col < triplets[b].col;
  });

  SparseMatrix A;
  A.n_rows = n_rows;
  A.n_cols = n_cols;
  A.row_offsets.assign(n_rows + 1, 0);
  A.col_indices.reserve(triplets.size());
  A.values.reserve(triplets.size());

  size_t k = 0;
  for (int r = 0; r < n_rows; ++r) {
    while (k < order.size() && triplets[order[k]].row == r) {
      const int c = triplets[order[k]].col;
      double v = 0.0;
      while (k < order.size() && triplets[order[k]].row == r && triplets[order[k]].col == c) {
        v += triplets[order[k]].value;
        ++k;
      }
      A.col_indices.push_back(c);
      A.values.push_back(v);
    }
    A.row_offsets[r + 1] = static_cast<int>(A.col_indices.size());
  }
  return A;
}

SparseMatrix identity(int n) {
  SparseMatrix A;
  A.n_rows = A.n_cols = n;
  A.row_offsets.resize(n + 1);
  A.col_indices.resize(n);
  A.values.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) A.row_offsets[i] = i;
  std::iota(A.col_indices.begin(), A.col_indices.end(), 0);
  return A;
}

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != A.n_cols || static_cast<int>(y.size()) != A.n_rows) {
    throw DimensionError("spmv dimension mismatch");
  }
  kernels::spmv(A, x, y);
}

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x) {
  std::vector<double> y(A.n_rows);
  spmv(A, x, y);
  return y;
}

SparseMatrix transpose(const SparseMatrix& A) {
  SparseMatrix T;
  T.n_rows = A.n_cols;
  T.n_cols = A.n_rows;
  T.row_offsets.assign(T.n_rows + 1, 0);
  T.col_indices.resize(A.nnz());
  T.values.resize(A.nnz());
  for (int c : A.col_indices) ++T.row_offsets[c + 1];
  for (int r = 0; r < T.n_rows; ++r) T.row_offsets[r + 1] += T.row_offsets[r];
  std::vector<int> next(T.row_offsets.begin(), T.row_offsets.end() - 1);
  for (int r = 0; r < A.n_rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      const int pos = next[A.col_indices[k]]++;
      T.col_indices[pos] = r;
      T.values[pos] = A.values[k];
    }
  }
  return T;
}

SparseMatrix add_scaled(const SparseMatrix& A, double alpha, const SparseMatrix& B) {
  if (A.n_rows != B.n_rows || A.n_cols != B.n_cols) {
    throw DimensionError("add_scaled shape mismatch");
  }
  SparseMatrix C;
  C.n_rows = A.n_rows;
  C.n_cols = A.n_cols;
  C.row_offsets.assign(A.n_rows + 1, 0);
  C.col_indices.reserve(A.nnz() + B.nnz());
  C.values.reserve(A.nnz() + B.nnz());
  for (int r = 0; r < A.n_rows; ++r) {
    int ka = A.row_offsets[r], kb = B.row_offsets[r];
    const int ea = A.row_offsets[r + 1], eb = B.row_offsets[r + 1];
    while (ka < ea || kb < eb) {
      int ca = ka < ea ? A.col_indices[ka] : A.n_cols;
      int cb = kb < eb ? B.col_indices[kb] : A.n_cols;
      if (ca < cb) {
        C.col_indices.push_back(ca);
        C.values.push_back(A.values[ka++]);
      } else if (cb < ca) {
        C.col_indices.push_back(cb);
        C.values.push_back(alpha * B.values[kb++]);
      } else {
        C.col_indices.push_back(ca);
        C.values.push_back(A.values[ka++] + alpha * B.values[kb++]);
      }
    }
    C.row_offsets[r + 1] = static_cast<int>(C.col_indices.size());
  }
  return C;
}

namespace {

SparseMatrix merge_rows(const SparseMatrix& A, std::span<const int> rows,
                        const SparseMatrix& source, bool add) {
  if (A.n_rows != source.n_rows || A.n_cols != source.n_cols) {
    throw DimensionError("row surgery shape mismatch");
  }
  std::vector<char> marked(A.n_rows, 0);
  for (int r : rows) {
    if (r < 0 || r >= A.n_rows) throw IndexError("row index " + std::to_string(r) + " out of range");
    marked[r] = 1;
  }
  SparseMatrix C;
  C.n_rows = A.n_rows;
  C.n_cols = A.n_cols;
  C.row_offsets.assign(A.n_rows + 1, 0);
  for (int r = 0; r < A.n_rows; ++r) {
    if (!marked[r]) {
      for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
        C.col_indices.push_back(A.col_indices[k]);
        C.values.push_back(A.values[k]);
      }
    } else if (!add) {
      for (int k = source.row_offsets[r]; k < source.row_offsets[r + 1]; ++k) {
        C.col_indices.push_back(source.col_indices[k]);
        C.values.push_back(source.values[k]);
      }
    } else {
      int ka = A.row_offsets[r], kb = source.row_offsets[r];
      const int ea = A.row_offsets[r + 1], eb = source.row_offsets[r + 1];
      while (ka < ea || kb < eb) {
        int ca = ka < ea ? A.col_indices[ka] : A.n_cols;
        int cb = kb < eb ? source.col_indices[kb] : A.n_cols;
        if (ca < cb) {
          C.col_indices.push_back(ca);
          C.values.push_back(A.values[ka++]);
        } else if (cb < ca) {
          C.col_indices.push_back(cb);
          C.values.push_back(source.values[kb++]);
        } else {
          C.col_indices.push_back(ca);
          C.values.push_back(A.values[ka++] + source.values[kb++]);
        }
      }
    }
    C.row_offsets[r + 1] = static_cast<int>(C.col_indices.size());
  }
  return C;
}

}  // namespace

SparseMatrix replace_rows(const SparseMatrix& A, std::span<const int> rows,
                          const SparseMatrix& source) {
  return merge_rows(A, rows, source, false);
}

SparseMatrix add_rows(const SparseMatrix& A, std::span<const int> rows,
                      const SparseMatrix& source) {
  return merge_rows(A, rows, source, true);
}

SparseMatrix triple_product_diag(const SparseMatrix& A2, std::span<const double> d,
                                 const SparseMatrix& B) {
  if (A2.n_cols != static_cast<int>(d.size()) || A2.n_cols != B.n_rows) {
    throw DimensionError("triple_product_diag shape mismatch");
  }
  for (double di : d) {
    if (std::abs(di) <= 1e-300) {
      throw SingularDiagonalError("zero entry in diagonal factor");
    }
  }
  // Row-by-row sparse accumulator.
  SparseMatrix C;
  C.n_rows = A2.n_rows;
  C.n_cols = B.n_cols;
  C.row_offsets.assign(C.n_rows + 1, 0);
  std::vector<double> acc(B.n_cols, 0.0);
  std::vector<int> touched;
  std::vector<char> seen(B.n_cols, 0);
  for (int r = 0; r < A2.n_rows; ++r) {
    touched.clear();
    for (int k = A2.row_offsets[r]; k < A2.row_offsets[r + 1]; ++k) {
      const int mid = A2.col_indices[k];
      const double w = A2.values[k] / d[mid];
      for (int kb = B.row_offsets[mid]; kb < B.row_offsets[mid + 1]; ++kb) {
        const int c = B.col_indices[kb];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
          acc[c] = 0.0;
        }
        acc[c] += w * B.values[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int c : touched) {
      C.col_indices.push_back(c);
      C.values.push_back(acc[c]);
      seen[c] = 0;
    }
    C.row_offsets[r + 1] = static_cast<int>(C.col_indices.size());
  }
  return C;
}

std::vector<double> diagonal(const SparseMatrix& A) {
  std::vector<double> d(A.n_rows, 0.0);
  for (int r = 0; r < A.n_rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      if (A.col_indices[k] == r) d[r] = A.values[k];
    }
  }
  return d;
}

double symmetry_defect(const SparseMatrix& A) {
  const SparseMatrix T = transpose(A);
  double defect = 0.0;
  for (int r = 0; r < A.n_rows; ++r) {
    int ka = A.row_offsets[r], kb = T.row_offsets[r];
    const int ea = A.row_offsets[r + 1], eb = T.row_offsets[r + 1];
    while (ka < ea || kb < eb) {
      int ca = ka < ea ? A.col_indices[ka] : A.n_cols;
      int cb = kb < eb ? T.col_indices[kb] : A.n_cols;
      if (ca < cb) {
        defect = std::max(defect, std::abs(A.values[ka++]));
      } else if (cb < ca) {
        defect = std::max(defect, std::abs(T.values[kb++]));
      } else {
        defect = std::max(defect, std::abs(A.values[ka++] - T.values[kb++]));
      }
    }
  }
  return defect;
}

}  // namespace mm
