#pragma once

#include <vector>

#include "mm/field.hpp"
#include "mm/grid.hpp"
#include "mm/schur.hpp"

namespace mm {

struct CondEstimate {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double cond2 = 0.0;
  int iterations_used = 0;
  bool approximate = false;  // iteration cap hit before the tolerance
};

/// 2-norm condition number from the extreme singular values: power iteration
/// on S^T S for sigma_max, inverse power iteration through the factorization
/// for sigma_min. Converged when successive estimates agree to tol relative.
CondEstimate cond_estimate(const SchurOperator& S, double tol = 1e-4);

enum class SweepAxis { MeshN, InvEps, InvBetaSq };

struct SlopeRow {
  GridCase grid_case;
  double beta;
  double eps;
  int N;
  double cond2;
  double predicted_exponent;
  double fitted_slope;
};

/// Condition numbers of the natural non-AP operator over a parameter sweep,
/// with log-log regression slopes along the chosen axis and the exponent the
/// scaling cond ~ 1/((eps + beta^2 h^2) h^2) predicts for that regime.
std::vector<SlopeRow> conjecture_check(GridCase grid_case, const std::vector<double>& betas,
                                       const std::vector<double>& epss,
                                       const std::vector<int>& Ns, SweepAxis axis,
                                       double cond_tol = 1e-4);

struct ErrorNorms {
  double l_inf = 0.0;
  double l2_grid = 0.0;  // h-weighted discrete L2
};

/// Error of the phi block against the manufactured solution over all grid
/// points, each evaluated at its true coordinates (the staggered layers of
/// the aligned mesh sit outside the unit square).
ErrorNorms error_norms(std::span<const double> phi, const GridSpec& grid, const FieldParams& p);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mm
