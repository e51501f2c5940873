// Experiment runner for the micro-macro anisotropic elliptic solver: single
// preconditioned solves, iteration-count sweeps over (N, eps), condition
// studies of the natural non-AP operator, Ritz diagnostics and refinement
// studies of the manufactured solution.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "mm/errors.hpp"
#include "mm/experiment.hpp"

namespace {

struct CommonArgs {
  std::string case_name = "aligned";
  std::string schur = "s5";
  int N = 64;
  std::vector<int> n_list;
  double eps = 1e-2;
  std::vector<double> eps_list;
  double beta = -1.0;  // resolved per case when unset
  int m = 4;
  double tol = 1e-6;
  int maxit = 100;
  bool no_inflow = false;
  bool large = false;
  std::string history_path;
  std::string export_dir;
  std::string output_path;
  std::string format;
};

void add_common(CLI::App* cmd, CommonArgs& a, const std::string& default_schur) {
  a.schur = default_schur;
  cmd->add_option("--case", a.case_name, "Mesh/discretization case")
      ->check(CLI::IsMember({"aligned", "nonaligned"}));
  cmd->add_option("--schur", a.schur, "Approximate Schur complement")
      ->check(CLI::IsMember({"s1", "s2", "s3", "s4", "s5", "s6", "exact"}));
  cmd->add_option("--N", a.N, "Mesh parameter");
  cmd->add_option("--N-list", a.n_list, "Mesh parameters for sweeps")->delimiter(',');
  cmd->add_option("--eps", a.eps, "Anisotropy parameter");
  cmd->add_option("--eps-list", a.eps_list, "Anisotropy parameters for sweeps")->delimiter(',');
  cmd->add_option("--beta", a.beta, "Field curvature (default 0 aligned, 2 nonaligned)");
  cmd->add_option("--m", a.m, "Oscillation count of the manufactured solution");
  cmd->add_option("--tol", a.tol, "GMRES relative tolerance");
  cmd->add_option("--maxit", a.maxit, "GMRES iteration cap");
  cmd->add_flag("--no-inflow", a.no_inflow, "Drop the inflow row from the operator");
  cmd->add_flag("--large", a.large, "Include N=256 in default sweeps");
  cmd->add_option("--history", a.history_path, "Write residual history CSV to this path");
  cmd->add_option("--export-matrices", a.export_dir, "Write Matrix Market dumps under this dir");
  cmd->add_option("--output", a.output_path, "Write the report here instead of stdout");
  cmd->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
}

mm::ExperimentSpec to_spec(const CommonArgs& a) {
  mm::ExperimentSpec spec;
  spec.grid_case = a.case_name == "aligned" ? mm::GridCase::Aligned : mm::GridCase::NonAligned;
  spec.variant = mm::variant_from_name(a.schur);
  if (!a.n_list.empty()) {
    spec.n_list = a.n_list;
  } else if (a.large) {
    spec.n_list = {32, 64, 128, 256};
  }
  if (!a.eps_list.empty()) spec.eps_list = a.eps_list;
  spec.beta = a.beta >= 0.0 ? a.beta : mm::ExperimentSpec::default_beta(spec.grid_case);
  spec.m = a.m;
  spec.inflow = !a.no_inflow;
  spec.tol = a.tol;
  spec.maxit = a.maxit;
  spec.validate();
  return spec;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mm::Error("cannot open '" + path + "' for writing");
  out << text;
}

void maybe_export(const CommonArgs& a, const mm::ExperimentSpec& spec, int N, double eps) {
  if (a.export_dir.empty()) return;
  const mm::GridSpec grid = mm::make_grid(spec.grid_case, N);
  const mm::FieldParams params{spec.beta, spec.m, eps};
  const mm::BlockSystem sys = mm::assemble_system(grid, params, spec.inflow);
  const mm::BlockSystem pc =
      spec.inflow ? sys : mm::assemble_system(grid, params, true);
  const mm::SchurOperator schur = mm::build_schur(spec.variant, pc);
  mm::export_matrices(a.export_dir, sys, schur);
}

int cmd_solve(const CommonArgs& a, bool want_ritz) {
  CommonArgs single = a;
  single.n_list = {a.N};
  single.eps_list = {a.eps};
  mm::ExperimentSpec spec = to_spec(single);
  const mm::CellResult cell = mm::run_cell(spec, a.N, a.eps, want_ritz);
  if (want_ritz) {
    emit(a.output_path, mm::ritz_csv(cell.report));
  } else {
    emit(a.output_path, mm::solve_json(spec, cell));
  }
  if (!a.history_path.empty()) emit(a.history_path, mm::history_csv(cell.report));
  maybe_export(a, spec, a.N, a.eps);
  return (cell.failed || !cell.report.converged) ? 3 : 0;
}

int cmd_table(const CommonArgs& a, bool force_no_inflow) {
  CommonArgs args = a;
  if (force_no_inflow) args.no_inflow = true;
  mm::ExperimentSpec spec = to_spec(args);
  const std::vector<mm::CellResult> cells = mm::run_table(spec);
  emit(a.output_path, mm::table_csv(spec, cells));
  return 0;
}

int cmd_cond(const CommonArgs& a, const std::string& sweep, double cond_tol) {
  mm::ExperimentSpec spec = to_spec(a);
  mm::SweepAxis axis = mm::SweepAxis::MeshN;
  if (sweep == "eps") axis = mm::SweepAxis::InvEps;
  if (sweep == "beta") axis = mm::SweepAxis::InvBetaSq;
  std::vector<double> betas = {spec.beta};
  if (axis == mm::SweepAxis::InvBetaSq) betas = {0.5, 1.0, 2.0};
  const std::vector<mm::SlopeRow> rows =
      mm::conjecture_check(spec.grid_case, betas, spec.eps_list, spec.n_list, axis, cond_tol);
  emit(a.output_path, mm::cond_csv(rows));
  return 0;
}

int cmd_verify(const CommonArgs& a) {
  mm::ExperimentSpec spec = to_spec(a);
  const std::vector<mm::VerifyRow> rows = mm::run_verify(spec);
  emit(a.output_path, mm::verify_csv(spec, rows));
  for (const mm::VerifyRow& r : rows) {
    if (!std::isnan(r.observed_order)) {
      std::cerr << "eps=" << r.eps << " N=" << r.N << " observed order " << r.observed_order
                << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-preconditioned GMRES solver for strongly anisotropic elliptic equations"};
  app.require_subcommand(1);

  CommonArgs solve_args, table_args, noinflow_args, cond_args, ritz_args, verify_args;
  std::string cond_sweep = "N";
  double cond_tol = 1e-4;

  CLI::App* solve = app.add_subcommand("solve", "Solve one (N, eps) cell, JSON report");
  add_common(solve, solve_args, "s5");

  CLI::App* table = app.add_subcommand("table", "Iteration-count sweep over (N, eps), CSV");
  add_common(table, table_args, "s5");

  CLI::App* noinflow = app.add_subcommand(
      "noinflow", "Sweep with the inflow row dropped from the operator, CSV");
  add_common(noinflow, noinflow_args, "s5");

  CLI::App* cond = app.add_subcommand("cond", "Condition-number sweep of the non-AP operator");
  add_common(cond, cond_args, "s1");
  cond->add_option("--sweep", cond_sweep, "Regression axis")
      ->check(CLI::IsMember({"N", "eps", "beta"}));
  cond->add_option("--cond-tol", cond_tol, "Power-iteration tolerance");

  CLI::App* ritz = app.add_subcommand("ritz", "Ritz values of one preconditioned solve, CSV");
  add_common(ritz, ritz_args, "s5");

  CLI::App* verify = app.add_subcommand("verify", "Manufactured-solution refinement study, CSV");
  add_common(verify, verify_args, "s5");
  verify_args.tol = 1e-10;  // keep solver error out of the refinement study

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(solve_args, false);
    if (table->parsed()) return cmd_table(table_args, false);
    if (noinflow->parsed()) return cmd_table(noinflow_args, true);
    if (cond->parsed()) return cmd_cond(cond_args, cond_sweep, cond_tol);
    if (ritz->parsed()) return cmd_solve(ritz_args, true);
    if (verify->parsed()) return cmd_verify(verify_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const mm::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const mm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
