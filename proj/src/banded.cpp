#include "mm/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"
#include "mm/sparse.hpp"

namespace mm {

BandedFactorization BandedFactorization::factorize(const SparseMatrix& A,
                                                   FactorizationKind kind) {
  if (A.n_rows != A.n_cols) throw DimensionError("factorize requires a square matrix");
  const int n = A.n_rows;

  BandedFactorization F;
  F.n_ = n;
  F.kind_ = kind;
  int bl = 0, bu = 0;
  for (int r = 0; r < n; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      const int c = A.col_indices[k];
      bl = std::max(bl, r - c);
      bu = std::max(bu, c - r);
    }
  }
  const double amax = A.max_abs();

  if (kind == FactorizationKind::Cholesky) {
    if (symmetry_defect(A) > 1e-12 * std::max(1.0, amax)) {
      throw NotSpdError("Cholesky input is not symmetric");
    }
    F.bl_ = std::max(bl, bu);
    F.bu_ = 0;
    F.stride_ = F.bl_ + 1;
    F.data_.assign(static_cast<size_t>(n) * F.stride_, 0.0);
    for (int r = 0; r < n; ++r) {
      for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
        const int c = A.col_indices[k];
        if (c <= r) F.at(r, c) = A.values[k];
      }
    }
    F.factor_cholesky();
  } else {
    // Row interchanges widen U to bl + bu.
    F.bl_ = bl;
    F.bu_ = bu;
    F.stride_ = 2 * bl + bu + 1;
    F.data_.assign(static_cast<size_t>(n) * F.stride_, 0.0);
    for (int r = 0; r < n; ++r) {
      for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
        F.at(r, A.col_indices[k]) = A.values[k];
      }
    }
    F.factor_lu(1e-14 * amax);
  }
  return F;
}

void BandedFactorization::factor_lu(double pivot_floor) {
  ipiv_.resize(n_);
  const int ubw = bl_ + bu_;  // upper bandwidth of U after pivoting
  for (int k = 0; k < n_; ++k) {
    const int rmax = std::min(n_ - 1, k + bl_);
    int p = k;
    double best = std::abs(at(k, k));
    for (int r = k + 1; r <= rmax; ++r) {
      const double v = std::abs(at(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best <= pivot_floor) {
      throw SingularFactorizationError("zero pivot at row " + std::to_string(k) +
                                       " in banded LU");
    }
    ipiv_[k] = p;
    const int cmax = std::min(n_ - 1, k + ubw);
    if (p != k) {
      for (int c = k; c <= cmax; ++c) std::swap(at(k, c), at(p, c));
    }
    const double piv = at(k, k);
    for (int r = k + 1; r <= rmax; ++r) {
      const double l = at(r, k) / piv;
      at(r, k) = l;
      if (l == 0.0) continue;
      for (int c = k + 1; c <= cmax; ++c) at(r, c) -= l * at(k, c);
    }
  }
}

void BandedFactorization::factor_cholesky() {
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - bl_);
    for (int j = j0; j < i; ++j) {
      double s = at(i, j);
      const int k0 = std::max(j0, j - bl_);
      for (int k = k0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / at(j, j);
    }
    double s = at(i, i);
    for (int k = j0; k < i; ++k) s -= at(i, k) * at(i, k);
    if (s <= 0.0) {
      throw NotSpdError("non-positive pivot at row " + std::to_string(i) + " in Cholesky");
    }
    at(i, i) = std::sqrt(s);
  }
}

void BandedFactorization::solve(std::span<const double> r, std::span<double> x,
                                bool transpose) const {
  if (static_cast<int>(r.size()) != n_ || static_cast<int>(x.size()) != n_) {
    throw DimensionError("banded solve dimension mismatch");
  }
  std::copy(r.begin(), r.end(), x.begin());
  if (kind_ == FactorizationKind::Cholesky) {
    solve_cholesky(x, transpose);
  } else {
    solve_lu(x, transpose);
  }
}

std::vector<double> BandedFactorization::solve(std::span<const double> r, bool transpose) const {
  std::vector<double> x(n_);
  solve(r, x, transpose);
  return x;
}

void BandedFactorization::solve_lu(std::span<double> x, bool transpose) const {
  const int ubw = bl_ + bu_;
  if (!transpose) {
    // Pivoted forward elimination, then U x = y.
    for (int k = 0; k < n_; ++k) {
      if (ipiv_[k] != k) std::swap(x[k], x[ipiv_[k]]);
      const int rmax = std::min(n_ - 1, k + bl_);
      const double xk = x[k];
      if (xk == 0.0) continue;
      for (int i = k + 1; i <= rmax; ++i) x[i] -= at(i, k) * xk;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = x[i];
      const int j1 = std::min(n_ - 1, i + ubw);
      for (int j = i + 1; j <= j1; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
  } else {
    // U^T y = r, then the transposed elimination steps in reverse order.
    for (int i = 0; i < n_; ++i) {
      double s = x[i];
      const int j0 = std::max(0, i - ubw);
      for (int j = j0; j < i; ++j) s -= at(j, i) * x[j];
      x[i] = s / at(i, i);
    }
    for (int k = n_ - 1; k >= 0; --k) {
      const int rmax = std::min(n_ - 1, k + bl_);
      double s = x[k];
      for (int i = k + 1; i <= rmax; ++i) s -= at(i, k) * x[i];
      x[k] = s;
      if (ipiv_[k] != k) std::swap(x[k], x[ipiv_[k]]);
    }
  }
}

void BandedFactorization::solve_cholesky(std::span<double> x, bool) const {
  // L L^T is self-transpose.
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    const int j0 = std::max(0, i - bl_);
    for (int j = j0; j < i; ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    const int j1 = std::min(n_ - 1, i + bl_);
    for (int j = i + 1; j <= j1; ++j) s -= at(j, i) * x[j];
    x[i] = s / at(i, i);
  }
}

double solve_residual(const SparseMatrix& A, std::span<const double> x,
                      std::span<const double> r) {
  std::vector<double> ax(A.n_rows);
  kernels::spmv(A, x, ax);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < A.n_rows; ++i) {
    const double d = ax[i] - r[i];
    num += d * d;
    den += r[i] * r[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace mm
