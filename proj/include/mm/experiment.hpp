#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mm/analysis.hpp"
#include "mm/assembly.hpp"
#include "mm/krylov.hpp"
#include "mm/schur.hpp"

namespace mm {

struct ExperimentSpec {
  GridCase grid_case = GridCase::Aligned;
  SchurVariant variant = SchurVariant::S5;
  std::vector<int> n_list = {32, 64, 128};
  std::vector<double> eps_list = {1.0, 1e-1, 1e-2, 1e-6, 1e-10, 1e-20};
  double beta = 0.0;
  int m = 4;
  bool inflow = true;
  double tol = 1e-6;
  int maxit = 100;

  /// Case-dependent default: 0 when aligned, 2 otherwise.
  static double default_beta(GridCase c) { return c == GridCase::Aligned ? 0.0 : 2.0; }
  void validate() const;
};

struct CellResult {
  int N = 0;
  double eps = 0.0;
  bool failed = false;     // preconditioner could not be built
  std::string failure;
  GmresReport report;
  double true_residual = 0.0;
  ErrorNorms error;
  std::vector<double> phi;  // solution block
};

/// Assemble, precondition and solve one (N, eps) cell. With inflow=false the
/// operator drops the inflow row but the preconditioner is still built from
/// the inflow blocks.
CellResult run_cell(const ExperimentSpec& spec, int N, double eps, bool want_ritz = false);

/// Sweep the (N, eps) grid in deterministic order, N outer, eps inner.
/// Per-cell failures are recorded in the row and never abort the sweep.
std::vector<CellResult> run_table(const ExperimentSpec& spec);

struct VerifyRow {
  double eps;
  int N;
  double l_inf;
  double l2_grid;
  double observed_order;  // NaN on the coarsest level
  int iterations;
};

/// Refinement study of the manufactured-solution error.
std::vector<VerifyRow> run_verify(const ExperimentSpec& spec);

// Report rendering. Non-converged cells print the literal `x`.
std::string table_csv(const ExperimentSpec& spec, const std::vector<CellResult>& cells);
std::string solve_json(const ExperimentSpec& spec, const CellResult& cell);
std::string history_csv(const GmresReport& report);
std::string ritz_csv(const GmresReport& report);
std::string cond_csv(const std::vector<SlopeRow>& rows);
std::string verify_csv(const ExperimentSpec& spec, const std::vector<VerifyRow>& rows);

/// A1.mtx, A2.mtx, A3.mtx, B.mtx, S.mtx, F.mtx under dir (created if needed).
void export_matrices(const std::string& dir, const BlockSystem& sys, const SchurOperator& schur);

}  // namespace mm
