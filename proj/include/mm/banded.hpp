#pragma once

#include <span>
#include <vector>

namespace mm {

struct SparseMatrix;

enum class FactorizationKind { LU, Cholesky };

/// Banded factorization in dense band storage. The bandwidths are taken from
/// the actual sparsity of the input. LU uses partial pivoting, widening U to
/// bl+bu; a zero-pivot guard turns rank deficiency into a typed error.
/// Cholesky requires a symmetric input (checked) and positive pivots.
class BandedFactorization {
 public:
  static BandedFactorization factorize(const SparseMatrix& A, FactorizationKind kind);

  void solve(std::span<const double> r, std::span<double> x, bool transpose = false) const;
  std::vector<double> solve(std::span<const double> r, bool transpose = false) const;

  int size() const { return n_; }
  int lower_bandwidth() const { return bl_; }
  int upper_bandwidth() const { return bu_; }
  int bandwidth() const { return bl_ > bu_ ? bl_ : bu_; }
  FactorizationKind kind() const { return kind_; }

 private:
  BandedFactorization() = default;

  double& at(int i, int j) { return data_[static_cast<size_t>(i) * stride_ + (j - i + bl_)]; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i) * stride_ + (j - i + bl_)]; }

  void factor_lu(double pivot_floor);
  void factor_cholesky();
  void solve_lu(std::span<double> x, bool transpose) const;
  void solve_cholesky(std::span<double> x, bool transpose) const;

  int n_ = 0;
  int bl_ = 0;
  int bu_ = 0;
  int stride_ = 0;
  FactorizationKind kind_ = FactorizationKind::LU;
  std::vector<double> data_;  // row-major band, columns j - i in [-bl, bl+bu]
  std::vector<int> ipiv_;     // LU row interchanges
};

/// Relative residual ||A x - r||_2 / ||r||_2, for factorization round-trips.
double solve_residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> r);

}  // namespace mm
