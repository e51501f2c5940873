#include "mm/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"
#include "mm/mmio.hpp"

namespace mm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string case_name(GridCase c) { return c == GridCase::Aligned ? "aligned" : "nonaligned"; }

}  // namespace

void ExperimentSpec::validate() const {
  if (variant == SchurVariant::S6 && grid_case != GridCase::Aligned) {
    throw UsageError("schur variant s6 requires the aligned case");
  }
  if (grid_case == GridCase::Aligned && beta != 0.0) {
    throw UsageError("the aligned case uses beta = 0");
  }
  if (variant == SchurVariant::Exact) {
    for (int N : n_list) {
      const GridSpec g = make_grid(grid_case, N);
      if (g.size() > 5000) {
        throw UsageError("exact Schur complement limited to 5000 unknowns per block (N=" +
                         std::to_string(N) + " exceeds it)");
      }
    }
  }
  if (tol <= 0.0 || maxit <= 0) throw UsageError("tol and maxit must be positive");
}

CellResult run_cell(const ExperimentSpec& spec, int N, double eps, bool want_ritz) {
  CellResult cell;
  cell.N = N;
  cell.eps = eps;

  const GridSpec grid = make_grid(spec.grid_case, N);
  const FieldParams params{spec.beta, spec.m, eps};
  const BlockSystem sys_op = assemble_system(grid, params, spec.inflow);
  // The preconditioner always uses the inflow blocks; they coincide with the
  // operator blocks when the inflow condition is kept.
  std::optional<BlockSystem> sys_pc_storage;
  const BlockSystem* sys_pc = &sys_op;
  if (!spec.inflow) {
    sys_pc_storage = assemble_system(grid, params, true);
    sys_pc = &*sys_pc_storage;
  }

  const auto t0 = Clock::now();
  std::optional<BandedFactorization> a3fact;
  std::optional<SchurOperator> schur;
  try {
    a3fact.emplace(factorize_a3(*sys_pc));
    schur.emplace(build_schur(spec.variant, *sys_pc));
  } catch (const Error& e) {
    cell.failed = true;
    cell.failure = e.what();
    cell.report.converged = false;
    cell.report.iterations = 0;
    cell.report.time_factorize = seconds_since(t0);
    cell.true_residual = std::numeric_limits<double>::quiet_NaN();
    cell.error.l_inf = std::numeric_limits<double>::quiet_NaN();
    cell.error.l2_grid = std::numeric_limits<double>::quiet_NaN();
    return cell;
  }
  const double t_fact = seconds_since(t0);

  const BlockOperator op{&sys_op};
  const BlockPreconditioner prec{&*a3fact, &sys_pc->A2, &*schur};
  const std::vector<double> b = sys_op.full_rhs();
  SolverConfig cfg;
  cfg.tol = spec.tol;
  cfg.maxit = spec.maxit;
  cfg.want_ritz = want_ritz;

  const auto t1 = Clock::now();
  std::vector<double> x;
  cell.report = gmres(op, prec, b, cfg, x);
  cell.report.time_iterate = seconds_since(t1);
  cell.report.time_factorize = t_fact;

  const int n = grid.size();
  std::vector<double> ax(2 * n);
  op(x, ax);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    num += (ax[i] - b[i]) * (ax[i] - b[i]);
    den += b[i] * b[i];
  }
  cell.true_residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  cell.phi.assign(x.begin() + n, x.end());
  cell.error = error_norms(cell.phi, grid, params);
  return cell;
}

std::vector<CellResult> run_table(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<CellResult> cells;
  cells.reserve(spec.n_list.size() * spec.eps_list.size());
  for (int N : spec.n_list) {
    for (double eps : spec.eps_list) {
      cells.push_back(run_cell(spec, N, eps));
    }
  }
  return cells;
}

std::vector<VerifyRow> run_verify(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<VerifyRow> rows;
  for (double eps : spec.eps_list) {
    double prev_err = 0.0;
    int prev_n = 0;
    for (int N : spec.n_list) {
      const CellResult cell = run_cell(spec, N, eps);
      VerifyRow row;
      row.eps = eps;
      row.N = N;
      row.l_inf = cell.error.l_inf;
      row.l2_grid = cell.error.l2_grid;
      row.iterations = cell.report.iterations;
      row.observed_order = std::numeric_limits<double>::quiet_NaN();
      if (prev_n != 0 && cell.error.l_inf > 0.0) {
        const double h_ratio = (N - 1.0) / (prev_n - 1.0);
        row.observed_order = std::log(prev_err / cell.error.l_inf) / std::log(h_ratio);
      }
      prev_err = cell.error.l_inf;
      prev_n = N;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string table_csv(const ExperimentSpec& spec, const std::vector<CellResult>& cells) {
  std::ostringstream out;
  out << "case,schur,beta,N,eps,iterations,converged,time_factorize,time_iterate,"
         "true_residual,error_linf\n";
  for (const CellResult& c : cells) {
    out << case_name(spec.grid_case) << "," << variant_name(spec.variant) << ","
        << fmt("%.10g", spec.beta) << "," << c.N << "," << fmt("%.10g", c.eps) << ",";
    if (c.report.converged) {
      out << c.report.iterations;
    } else {
      out << "x";
    }
    out << "," << (c.report.converged ? "true" : "false") << ","
        << fmt("%.6f", c.report.time_factorize) << "," << fmt("%.6f", c.report.time_iterate)
        << ",";
    if (c.failed) {
      out << ",";
    } else {
      out << fmt("%.6e", c.true_residual) << "," << fmt("%.6e", c.error.l_inf);
    }
    out << "\n";
  }
  return out.str();
}

std::string solve_json(const ExperimentSpec& spec, const CellResult& cell) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["case"] = case_name(spec.grid_case);
  j["schur"] = variant_name(spec.variant);
  j["N"] = cell.N;
  j["eps"] = cell.eps;
  j["beta"] = spec.beta;
  j["m"] = spec.m;
  j["inflow"] = spec.inflow;
  j["tol"] = spec.tol;
  j["maxit"] = spec.maxit;
  j["iterations"] = cell.report.iterations;
  j["converged"] = cell.report.converged;
  j["failed"] = cell.failed;
  if (cell.failed) {
    j["failure"] = cell.failure;
  } else {
    j["true_residual"] = cell.true_residual;
    j["error"] = {{"linf", cell.error.l_inf}, {"l2_grid", cell.error.l2_grid}};
    j["residual_history"] = cell.report.residual_history;
    if (!cell.report.ritz.empty()) {
      nlohmann::ordered_json ritz = nlohmann::ordered_json::array();
      for (const auto& z : cell.report.ritz) ritz.push_back({z.real(), z.imag()});
      j["ritz"] = ritz;
    }
  }
  j["time_factorize"] = cell.report.time_factorize;
  j["time_iterate"] = cell.report.time_iterate;
  return j.dump(2) + "\n";
}

std::string history_csv(const GmresReport& report) {
  std::ostringstream out;
  out << "iteration,relative_residual\n";
  for (size_t i = 0; i < report.residual_history.size(); ++i) {
    out << i << "," << fmt("%.10e", report.residual_history[i]) << "\n";
  }
  return out.str();
}

std::string ritz_csv(const GmresReport& report) {
  std::ostringstream out;
  out << "re,im\n";
  for (const auto& z : report.ritz) {
    out << fmt("%.10e", z.real()) << "," << fmt("%.10e", z.imag()) << "\n";
  }
  return out.str();
}

std::string cond_csv(const std::vector<SlopeRow>& rows) {
  std::ostringstream out;
  out << "case,beta,eps,N,cond2,predicted_exponent,fitted_slope\n";
  for (const SlopeRow& r : rows) {
    out << case_name(r.grid_case) << "," << fmt("%.10g", r.beta) << "," << fmt("%.10g", r.eps)
        << "," << r.N << "," << fmt("%.10e", r.cond2) << "," << fmt("%.3g", r.predicted_exponent)
        << "," << fmt("%.6g", r.fitted_slope) << "\n";
  }
  return out.str();
}

std::string verify_csv(const ExperimentSpec& spec, const std::vector<VerifyRow>& rows) {
  std::ostringstream out;
  out << "case,eps,N,error_linf,error_l2,observed_order,iterations\n";
  for (const VerifyRow& r : rows) {
    out << case_name(spec.grid_case) << "," << fmt("%.10g", r.eps) << "," << r.N << ","
        << fmt("%.6e", r.l_inf) << "," << fmt("%.6e", r.l2_grid) << ",";
    if (std::isnan(r.observed_order)) {
      out << "";
    } else {
      out << fmt("%.3f", r.observed_order);
    }
    out << "," << r.iterations << "\n";
  }
  return out.str();
}

void export_matrices(const std::string& dir, const BlockSystem& sys, const SchurOperator& schur) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_matrix_market((base / "A1.mtx").string(), sys.A1);
  write_matrix_market((base / "A2.mtx").string(), sys.A2);
  write_matrix_market((base / "A3.mtx").string(), sys.A3);
  write_matrix_market((base / "B.mtx").string(), sys.B);
  write_vector_market((base / "F.mtx").string(), sys.F);
  if (schur.matrix.n_rows > 0) {
    write_matrix_market((base / "S.mtx").string(), schur.matrix);
  } else {
    // Exact complement is held densely.
    const std::vector<double>& d = schur.dense_matrix();
    const int n = schur.n;
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = d[static_cast<size_t>(i) * n + j];
        if (v != 0.0) t.push_back({i, j, v});
      }
    }
    write_matrix_market((base / "S.mtx").string(), assemble(n, n, t));
  }
}

}  // namespace mm
