#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "mm/assembly.hpp"
#include "mm/banded.hpp"
#include "mm/schur.hpp"

namespace mm {

struct SolverConfig {
  double tol = 1e-6;
  int maxit = 100;
  bool want_ritz = false;
};

struct GmresReport {
  int iterations = 0;
  bool converged = false;
  /// Preconditioned relative residuals; entry 0 is the initial residual 1.
  std::vector<double> residual_history;
  double time_factorize = 0.0;
  double time_iterate = 0.0;
  std::vector<std::complex<double>> ritz;
};

/// y = A x for the 2x2 block system.
struct BlockOperator {
  const BlockSystem* sys = nullptr;
  int size() const { return 2 * sys->block_size(); }
  void operator()(std::span<const double> x, std::span<double> y) const;
};

/// Block lower-triangular preconditioner (A3, 0; A2, S): e1 = A3^{-1} r1,
/// e2 = S^{-1}(r2 - A2 e1).
struct BlockPreconditioner {
  const BandedFactorization* a3 = nullptr;
  const SparseMatrix* a2 = nullptr;
  const SchurOperator* schur = nullptr;
  void operator()(std::span<const double> r, std::span<double> e) const;
};

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Non-restarted left-preconditioned GMRES with zero initial guess. Classical
/// Gram-Schmidt with one reorthogonalization pass. Iterations count Arnoldi
/// steps; the check of the initial residual is never counted.
GmresReport gmres(const ApplyFn& op, const ApplyFn& prec, std::span<const double> b,
                  const SolverConfig& cfg, std::vector<double>& x);

GmresReport gmres(const BlockOperator& op, const BlockPreconditioner& prec,
                  std::span<const double> b, const SolverConfig& cfg, std::vector<double>& x);

/// Eigenvalues of the leading m x m block of the Arnoldi Hessenberg matrix.
std::vector<std::complex<double>> ritz_values(const std::vector<double>& hess_rowmajor, int m);

}  // namespace mm
