#include "mm/schur.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"

namespace mm {

namespace {

class BandedSchurSolver final : public SchurSolverBase {
 public:
  explicit BandedSchurSolver(BandedFactorization f) : fact_(std::move(f)) {}
  void solve(std::span<const double> r, std::span<double> x, bool transpose) const override {
    fact_.solve(r, x, transpose);
  }
  const BandedFactorization* banded() const override { return &fact_; }

 private:
  BandedFactorization fact_;
};

// Bordered solver for a banded matrix plus k dense rows: S = M + sum_r e_r w_r
// with M banded (the dense rows replaced by identity rows) and w_r = row_r(S) - e_r.
// Applies the Woodbury identity with a k x k capacitance matrix.
class BorderedSchurSolver final : public SchurSolverBase {
 public:
  BorderedSchurSolver(BandedFactorization base, std::vector<int> rows, Eigen::MatrixXd w)
      : base_(std::move(base)), rows_(std::move(rows)), w_(std::move(w)) {
    const int k = static_cast<int>(rows_.size());
    const int n = base_.size();
    z_.resize(n, k);
    std::vector<double> e(n), col(n);
    for (int j = 0; j < k; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[rows_[j]] = 1.0;
      base_.solve(e, col);
      for (int i = 0; i < n; ++i) z_(i, j) = col[i];
    }
    Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(k, k) + w_ * z_;
    cap_lu_.compute(cap);
    if (cap_lu_.rcond() < 1e-14) {
      throw SingularFactorizationError("singular capacitance block in bordered solve");
    }
  }

  void solve(std::span<const double> r, std::span<double> x, bool transpose) const override {
    if (transpose) {
      throw UnsupportedVariantError("transpose solve not supported for bordered factorization");
    }
    const int n = base_.size();
    base_.solve(r, x);
    Eigen::Map<Eigen::VectorXd> xv(x.data(), n);
    Eigen::VectorXd s = w_ * xv;
    Eigen::VectorXd y = cap_lu_.solve(s);
    xv.noalias() -= z_ * y;
  }

 private:
  BandedFactorization base_;
  std::vector<int> rows_;
  Eigen::MatrixXd w_;  // k x n dense correction rows
  Eigen::MatrixXd z_;  // n x k, M^{-1} e_r columns
  Eigen::PartialPivLU<Eigen::MatrixXd> cap_lu_;
};

class DenseSchurSolver final : public SchurSolverBase {
 public:
  explicit DenseSchurSolver(Eigen::MatrixXd e) {
    const int n = static_cast<int>(e.rows());
    dense_.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dense_[static_cast<size_t>(i) * n + j] = e(i, j);
    lu_.compute(e);
  }

  void solve(std::span<const double> r, std::span<double> x, bool transpose) const override {
    const int n = static_cast<int>(lu_.rows());
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    Eigen::Map<Eigen::VectorXd> xv(x.data(), n);
    if (transpose) {
      xv = lu_.transpose().solve(rv);
    } else {
      xv = lu_.solve(rv);
    }
  }

  const std::vector<double>& dense() const { return dense_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<double> dense_;
};

std::vector<int> bottom_rows(const GridSpec& g) {
  return rows_of_class(g, BoundaryClass::NeumannBottom);
}

SchurOperator make_banded_operator(SchurVariant v, SparseMatrix m, const BlockSystem& sys,
                                   FactorizationKind kind) {
  SchurOperator op;
  op.variant = v;
  op.n = m.n_rows;
  op.grid_case = sys.grid.kind;
  op.params = sys.params;
  op.solver = std::make_shared<BandedSchurSolver>(BandedFactorization::factorize(m, kind));
  op.matrix = std::move(m);
  return op;
}

// row_r(A1 - A2 A3^{-1} B) as a dense vector: w solves A3^T w = A2^T e_r.
Eigen::VectorXd exact_schur_row(const BlockSystem& sys, const BandedFactorization& a3fact,
                                int r) {
  const int n = sys.block_size();
  std::vector<double> rhs(n, 0.0), w(n);
  for (int k = sys.A2.row_offsets[r]; k < sys.A2.row_offsets[r + 1]; ++k) {
    rhs[sys.A2.col_indices[k]] = sys.A2.values[k];
  }
  a3fact.solve(rhs, w, /*transpose=*/true);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
  for (int k = sys.A1.row_offsets[r]; k < sys.A1.row_offsets[r + 1]; ++k) {
    row[sys.A1.col_indices[k]] = sys.A1.values[k];
  }
  // row -= w^T B
  for (int i = 0; i < n; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    for (int k = sys.B.row_offsets[i]; k < sys.B.row_offsets[i + 1]; ++k) {
      row[sys.B.col_indices[k]] -= wi * sys.B.values[k];
    }
  }
  return row;
}

}  // namespace

std::string variant_name(SchurVariant v) {
  switch (v) {
    case SchurVariant::S1: return "s1";
    case SchurVariant::S2: return "s2";
    case SchurVariant::S3: return "s3";
    case SchurVariant::S4: return "s4";
    case SchurVariant::S5: return "s5";
    case SchurVariant::S6: return "s6";
    case SchurVariant::Exact: return "exact";
  }
  return "?";
}

SchurVariant variant_from_name(const std::string& name) {
  if (name == "s1") return SchurVariant::S1;
  if (name == "s2") return SchurVariant::S2;
  if (name == "s3") return SchurVariant::S3;
  if (name == "s4") return SchurVariant::S4;
  if (name == "s5") return SchurVariant::S5;
  if (name == "s6") return SchurVariant::S6;
  if (name == "exact") return SchurVariant::Exact;
  throw UsageError("unknown Schur variant '" + name + "'");
}

void SchurOperator::apply_inverse(std::span<const double> r, std::span<double> x,
                                  bool transpose) const {
  solver->solve(r, x, transpose);
}

const std::vector<double>& SchurOperator::dense_matrix() const {
  const auto* d = dynamic_cast<const DenseSchurSolver*>(solver.get());
  if (!d) throw UnsupportedVariantError("dense matrix only held for the exact complement");
  return d->dense();
}

SchurOperator build_exact(const BlockSystem& sys) {
  const int n = sys.block_size();
  if (n > 5000) {
    throw SizeGuardError("exact Schur complement limited to 5000 unknowns, got " +
                         std::to_string(n));
  }
  const BandedFactorization a3fact =
      BandedFactorization::factorize(sys.A3, sys.grid.kind == GridCase::Aligned
                                                  ? FactorizationKind::Cholesky
                                                  : FactorizationKind::LU);
  // X = A3^{-1} B, column by column.
  Eigen::MatrixXd X(n, n);
  {
    const SparseMatrix bt = transpose(sys.B);
#pragma omp parallel
    {
      std::vector<double> col(n), sol(n);
#pragma omp for schedule(static)
      for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        for (int k = bt.row_offsets[j]; k < bt.row_offsets[j + 1]; ++k) {
          col[bt.col_indices[k]] = bt.values[k];
        }
        a3fact.solve(col, sol);
        for (int i = 0; i < n; ++i) X(i, j) = sol[i];
      }
    }
  }
  // E = A1 - A2 X.
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    for (int k = sys.A1.row_offsets[r]; k < sys.A1.row_offsets[r + 1]; ++k) {
      E(r, sys.A1.col_indices[k]) = sys.A1.values[k];
    }
    for (int k = sys.A2.row_offsets[r]; k < sys.A2.row_offsets[r + 1]; ++k) {
      E.row(r).noalias() -= sys.A2.values[k] * X.row(sys.A2.col_indices[k]);
    }
  }

  SchurOperator op;
  op.variant = SchurVariant::Exact;
  op.n = n;
  op.grid_case = sys.grid.kind;
  op.params = sys.params;
  op.solver = std::make_shared<DenseSchurSolver>(std::move(E));
  return op;
}

SchurOperator build_s1(const GridSpec& grid, const FieldParams& p) {
  SparseMatrix S = assemble_nonap(grid, p);
  BlockSystem meta;
  meta.grid = grid;
  meta.params = p;
  return make_banded_operator(SchurVariant::S1, std::move(S), meta, FactorizationKind::LU);
}

SchurOperator build_s2(const BlockSystem& sys) {
  const std::vector<double> d = diagonal(sys.A3);
  SparseMatrix S = add_scaled(sys.A1, -1.0, triple_product_diag(sys.A2, d, sys.B));
  return make_banded_operator(SchurVariant::S2, std::move(S), sys, FactorizationKind::LU);
}

SchurOperator build_s3(const BlockSystem& sys) {
  const SparseMatrix base = add_scaled(sys.A1, sys.params.eps, sys.B);
  const std::vector<double> d = diagonal(sys.A3);
  const SparseMatrix s2 = add_scaled(sys.A1, -1.0, triple_product_diag(sys.A2, d, sys.B));
  SparseMatrix S = replace_rows(base, bottom_rows(sys.grid), s2);
  return make_banded_operator(SchurVariant::S3, std::move(S), sys, FactorizationKind::LU);
}

SchurOperator build_s4(const BlockSystem& sys) {
  const int n = sys.block_size();
  const std::vector<int> rows = bottom_rows(sys.grid);
  const int k = static_cast<int>(rows.size());
  const BandedFactorization a3fact =
      BandedFactorization::factorize(sys.A3, sys.grid.kind == GridCase::Aligned
                                                  ? FactorizationKind::Cholesky
                                                  : FactorizationKind::LU);
  Eigen::MatrixXd erows(k, n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < k; ++j) {
    erows.row(j) = exact_schur_row(sys, a3fact, rows[j]).transpose();
  }

  const SparseMatrix base = add_scaled(sys.A1, sys.params.eps, sys.B);

  // CSR image of the approximation, dense rows included (exports and tests).
  std::vector<Triplet> extra;
  for (int j = 0; j < k; ++j) {
    for (int c = 0; c < n; ++c) {
      if (erows(j, c) != 0.0) extra.push_back({rows[j], c, erows(j, c)});
    }
  }
  SparseMatrix S = replace_rows(base, rows, assemble(n, n, extra));

  // Bordered base: the same matrix with identity bottom rows.
  SparseMatrix M = replace_rows(base, rows, identity(n));
  Eigen::MatrixXd w = erows;
  for (int j = 0; j < k; ++j) w(j, rows[j]) -= 1.0;

  SchurOperator op;
  op.variant = SchurVariant::S4;
  op.n = n;
  op.grid_case = sys.grid.kind;
  op.params = sys.params;
  op.solver = std::make_shared<BorderedSchurSolver>(
      BandedFactorization::factorize(M, FactorizationKind::LU), rows, std::move(w));
  op.matrix = std::move(S);
  return op;
}

SchurOperator build_s5(const BlockSystem& sys) {
  const SparseMatrix base = add_scaled(sys.A1, sys.params.eps, sys.B);
  const std::vector<double> d = diagonal(sys.A3);
  const SparseMatrix s2 = add_scaled(sys.A1, -1.0, triple_product_diag(sys.A2, d, sys.B));
  const std::vector<int> rows = bottom_rows(sys.grid);
  const SparseMatrix s3 = replace_rows(base, rows, s2);
  const SparseMatrix s1 = assemble_nonap(sys.grid, sys.params);
  SparseMatrix S = add_rows(s3, rows, s1);
  return make_banded_operator(SchurVariant::S5, std::move(S), sys, FactorizationKind::LU);
}

SchurOperator build_s6(const BlockSystem& sys) {
  if (sys.grid.kind != GridCase::Aligned) {
    throw UnsupportedVariantError("S6 is only defined for the aligned discretization");
  }
  const SparseMatrix base = add_scaled(sys.A1, sys.params.eps, sys.B);
  const GridSpec& g = sys.grid;
  std::vector<Triplet> robin;
  for (int i = 2; i <= g.nx - 1; ++i) {
    robin.push_back({g.idx0(i, 1), g.idx0(i, 1), 2.0});
    robin.push_back({g.idx0(i, 1), g.idx0(i, 2), -1.0});
  }
  SparseMatrix S =
      replace_rows(base, bottom_rows(g), assemble(g.size(), g.size(), robin));
  return make_banded_operator(SchurVariant::S6, std::move(S), sys, FactorizationKind::Cholesky);
}

SchurOperator build_schur(SchurVariant v, const BlockSystem& sys) {
  switch (v) {
    case SchurVariant::S1: return build_s1(sys.grid, sys.params);
    case SchurVariant::S2: return build_s2(sys);
    case SchurVariant::S3: return build_s3(sys);
    case SchurVariant::S4: return build_s4(sys);
    case SchurVariant::S5: return build_s5(sys);
    case SchurVariant::S6: return build_s6(sys);
    case SchurVariant::Exact: return build_exact(sys);
  }
  throw UsageError("unknown Schur variant");
}

BandedFactorization factorize_a3(const BlockSystem& sys) {
  return BandedFactorization::factorize(sys.A3, sys.grid.kind == GridCase::Aligned
                                                     ? FactorizationKind::Cholesky
                                                     : FactorizationKind::LU);
}

std::vector<double> closed_form_a3_inverse(int n) {
  std::vector<double> inv(static_cast<size_t>(n) * n, 0.0);
  inv[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      inv[static_cast<size_t>(i) * n + j] = std::min(i, j);
    }
  }
  return inv;
}

std::vector<double> closed_form_a2a3invb(int n, double eps) {
  std::vector<double> b1(static_cast<size_t>(n) * n, 0.0);
  for (int j = 1; j < n - 1; ++j) b1[j] = 1.0;
  for (int i = 1; i < n - 1; ++i) b1[static_cast<size_t>(i) * n + i] = eps;
  return b1;
}

}  // namespace mm
