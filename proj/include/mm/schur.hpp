#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mm/assembly.hpp"
#include "mm/banded.hpp"
#include "mm/sparse.hpp"

namespace mm {

enum class SchurVariant { S1, S2, S3, S4, S5, S6, Exact };

std::string variant_name(SchurVariant v);
SchurVariant variant_from_name(const std::string& name);

/// Opaque solver behind a Schur approximation: banded LU/Cholesky for the
/// sparse variants, a bordered low-rank factorization for S4 (its bottom rows
/// are dense), and a dense LU for the exact complement.
class SchurSolverBase {
 public:
  virtual ~SchurSolverBase() = default;
  virtual void solve(std::span<const double> r, std::span<double> x, bool transpose) const = 0;
  virtual const BandedFactorization* banded() const { return nullptr; }
};

struct SchurOperator {
  SchurVariant variant = SchurVariant::S1;
  /// The approximation as assembled; empty for Exact (held densely instead).
  SparseMatrix matrix;
  std::shared_ptr<const SchurSolverBase> solver;
  GridCase grid_case = GridCase::Aligned;
  FieldParams params;
  int n = 0;

  void apply_inverse(std::span<const double> r, std::span<double> x,
                     bool transpose = false) const;
  /// Row-major dense entries; only available for the Exact variant.
  const std::vector<double>& dense_matrix() const;
  const BandedFactorization* banded() const { return solver ? solver->banded() : nullptr; }
};

/// E = A1 - A2 A3^{-1} B by n banded solves against the columns of B,
/// accumulated densely. Guarded to n <= 5000.
SchurOperator build_exact(const BlockSystem& sys);

/// The natural non-AP operator -lap_par - eps*lap_perp.
SchurOperator build_s1(const GridSpec& grid, const FieldParams& p);

/// S2 = A1 - A2 diag(A3)^{-1} B.
SchurOperator build_s2(const BlockSystem& sys);

/// A1 + eps*B with the bottom flux rows taken from S2.
SchurOperator build_s3(const BlockSystem& sys);

/// A1 + eps*B with the bottom rows taken from the exact Schur complement,
/// one transposed A3 solve per boundary row.
SchurOperator build_s4(const BlockSystem& sys);

/// S3 with the bottom rows replaced by row(S1) + row(S3).
SchurOperator build_s5(const BlockSystem& sys);

/// Aligned only: A1 + eps*B closed by the Robin rows 2 phi_{i,1} - phi_{i,2} = 0;
/// symmetric positive definite, factorized by Cholesky.
SchurOperator build_s6(const BlockSystem& sys);

SchurOperator build_schur(SchurVariant v, const BlockSystem& sys);

/// Factorization of A3 for the preconditioner: Cholesky when aligned, LU otherwise.
BandedFactorization factorize_a3(const BlockSystem& sys);

/// Closed form of the inverse of the aligned one-line block
/// a3 = [1; (2,-1); (-1,2,-1); ...; (-1,1)] of size n: blockdiag(1, [min(i,j)]).
/// Returned row-major n x n; used by tests.
std::vector<double> closed_form_a3_inverse(int n);

/// Closed form of the -A2 A3^{-1} B block b1 of size n: first row
/// (0,1,...,1,0), eps on the diagonal of rows 2..n-1, null last row.
std::vector<double> closed_form_a2a3invb(int n, double eps);

}  // namespace mm
