#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mm/assembly.hpp"
#include "mm/errors.hpp"
#include "mm/schur.hpp"
#include "support/oracles.hpp"

using namespace mm;

namespace {

Eigen::MatrixXd dense_exact(const BlockSystem& sys) {
  const SchurOperator e = build_exact(sys);
  const int n = e.n;
  Eigen::MatrixXd E(n, n);
  const std::vector<double>& d = e.dense_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) E(i, j) = d[static_cast<size_t>(i) * n + j];
  return E;
}

// The reduced one-line block [1; (2,-1); (-1,2,-1); ...; (-1,1)] whose closed-form
// inverse the solver exposes.
Eigen::MatrixXd reduced_a3(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(1, 2) = -1.0;
  for (int i = 2; i < n - 1; ++i) {
    a(i, i - 1) = -1.0;
    a(i, i) = 2.0;
    a(i, i + 1) = -1.0;
  }
  a(n - 1, n - 2) = -1.0;
  a(n - 1, n - 1) = 1.0;
  return a;
}

}  // namespace

TEST_CASE("closed-form inverse of the one-line block") {
  // min-table at n=3
  const std::vector<double> inv3 = closed_form_a3_inverse(3);
  CHECK(inv3[0] == 1.0);
  CHECK(inv3[4] == 1.0);
  CHECK(inv3[5] == 1.0);
  CHECK(inv3[7] == 1.0);
  CHECK(inv3[8] == 2.0);

  for (int n : {8, 10}) {
    const std::vector<double> inv = closed_form_a3_inverse(n);
    Eigen::MatrixXd Inv(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Inv(i, j) = inv[static_cast<size_t>(i) * n + j];
    const Eigen::MatrixXd a3 = reduced_a3(n);
    CHECK(((a3 * Inv) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    // dense inversion oracle
    CHECK((Inv - a3.inverse()).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("closed-form elimination block matches the dense product on the aligned grid") {
  const GridSpec g = make_grid(GridCase::Aligned, 8);
  const double eps = 0.37;
  const BlockSystem sys = assemble_system(g, FieldParams{0.0, 4, eps});
  const Eigen::MatrixXd A3d = oracle::to_dense(sys.A3);
  const Eigen::MatrixXd prod =
      -oracle::to_dense(sys.A2) * A3d.lu().solve(oracle::to_dense(sys.B));

  const std::vector<double> b1v = closed_form_a2a3invb(g.nz, eps);
  Eigen::MatrixXd b1(g.nz, g.nz);
  for (int i = 0; i < g.nz; ++i)
    for (int j = 0; j < g.nz; ++j) b1(i, j) = b1v[static_cast<size_t>(i) * g.nz + j];
  // eps = 0 keeps only the first row of ones
  const std::vector<double> b1z = closed_form_a2a3invb(g.nz, 0.0);
  for (int i = 1; i < g.nz; ++i)
    for (int j = 0; j < g.nz; ++j) CHECK(b1z[static_cast<size_t>(i) * g.nz + j] == 0.0);

  for (int i = 3; i <= g.nx - 2; ++i) {  // interior-adjacent block structure
    const int off = g.idx0(i, 1);
    CHECK((prod.block(off, off, g.nz, g.nz) - 2.0 * b1).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((prod.block(off, off - g.nz, g.nz, g.nz) + b1).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((prod.block(off, off + g.nz, g.nz, g.nz) + b1).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("aligned S4 equals the exact Schur complement") {
  const GridSpec g = make_grid(GridCase::Aligned, 8);
  for (double eps : {1.0, 1e-6}) {
    const BlockSystem sys = assemble_system(g, FieldParams{0.0, 4, eps});
    const Eigen::MatrixXd E = dense_exact(sys);
    const SchurOperator s4 = build_s4(sys);
    const double scale = E.cwiseAbs().maxCoeff();
    CHECK((oracle::to_dense(s4.matrix) - E).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("nonaligned S4 is within 1e-8 of the exact Schur complement") {
  const GridSpec g = make_grid(GridCase::NonAligned, 8);
  for (double eps : {1.0, 1e-6}) {
    const BlockSystem sys = assemble_system(g, FieldParams{2.0, 4, eps});
    const Eigen::MatrixXd E = dense_exact(sys);
    const SchurOperator s4 = build_s4(sys);
    const double rel = (oracle::to_dense(s4.matrix) - E).cwiseAbs().maxCoeff() /
                       E.cwiseAbs().maxCoeff();
    CHECK(rel <= 1e-8);
  }
}

TEST_CASE("exact complement with a null B block is A1") {
  GridSpec g = make_grid(GridCase::Aligned, 6);
  BlockSystem sys = assemble_system(g, FieldParams{0.0, 4, 1.0});
  sys.B = assemble(sys.B.n_rows, sys.B.n_cols, {});
  const Eigen::MatrixXd E = dense_exact(sys);
  CHECK((E - oracle::to_dense(sys.A1)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("exact complement refuses oversized grids") {
  const GridSpec g = make_grid(GridCase::NonAligned, 128);
  const BlockSystem sys = assemble_system(g, FieldParams{2.0, 4, 1.0});
  CHECK_THROWS_AS(build_exact(sys), SizeGuardError);
}

TEST_CASE("rows of S3 and S5 outside the bottom boundary match A1 + eps B") {
  for (GridCase c : {GridCase::Aligned, GridCase::NonAligned}) {
    const GridSpec g = make_grid(c, 10);
    const FieldParams p{c == GridCase::Aligned ? 0.0 : 2.0, 4, 1e-3};
    const BlockSystem sys = assemble_system(g, p);
    const Eigen::MatrixXd base = oracle::to_dense(add_scaled(sys.A1, p.eps, sys.B));
    const Eigen::MatrixXd s3 = oracle::to_dense(build_s3(sys).matrix);
    const Eigen::MatrixXd s4 = oracle::to_dense(build_s4(sys).matrix);
    const Eigen::MatrixXd s5 = oracle::to_dense(build_s5(sys).matrix);
    for (int i = 1; i <= g.nx; ++i) {
      for (int j = 1; j <= g.nz; ++j) {
        if (classify(i, j, g) == BoundaryClass::NeumannBottom) continue;
        const int r = g.idx0(i, j);
        CHECK((s3.row(r) - base.row(r)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((s4.row(r) - base.row(r)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((s5.row(r) - base.row(r)).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("S5 bottom rows are the sum of the S1 and S3 rows") {
  const GridSpec g = make_grid(GridCase::NonAligned, 10);
  const FieldParams p{2.0, 4, 1e-2};
  const BlockSystem sys = assemble_system(g, p);
  const Eigen::MatrixXd s1 = oracle::to_dense(assemble_nonap(g, p));
  const Eigen::MatrixXd s3 = oracle::to_dense(build_s3(sys).matrix);
  const Eigen::MatrixXd s5 = oracle::to_dense(build_s5(sys).matrix);
  for (int r : rows_of_class(g, BoundaryClass::NeumannBottom)) {
    CHECK((s5.row(r) - s1.row(r) - s3.row(r)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("bottom rows of A1 + eps B are numerically null for this field") {
  for (GridCase c : {GridCase::Aligned, GridCase::NonAligned}) {
    const GridSpec g = make_grid(c, 12);
    const FieldParams p{c == GridCase::Aligned ? 0.0 : 2.0, 4, 1e-2};
    const BlockSystem sys = assemble_system(g, p);
    const SparseMatrix base = add_scaled(sys.A1, p.eps, sys.B);
    const double scale = base.max_abs();
    for (int r : rows_of_class(g, BoundaryClass::NeumannBottom)) {
      for (int k = base.row_offsets[r]; k < base.row_offsets[r + 1]; ++k) {
        CHECK(std::abs(base.values[k]) <= 1e-13 * scale);
      }
    }
  }
}

TEST_CASE("S6 is symmetric, SPD, and aligned-only") {
  const GridSpec g = make_grid(GridCase::Aligned, 12);
  for (double eps : {1.0, 1e-6, 1e-20}) {
    const BlockSystem sys = assemble_system(g, FieldParams{0.0, 4, eps});
    const SchurOperator s6 = build_s6(sys);
    CHECK(symmetry_defect(s6.matrix) == 0.0);
    CHECK(s6.banded() != nullptr);
    CHECK(s6.banded()->kind() == FactorizationKind::Cholesky);
    // Robin closure: 2 on the diagonal, -1 on the z-neighbor
    for (int i = 2; i <= g.nx - 1; ++i) {
      const Eigen::MatrixXd D = oracle::to_dense(s6.matrix);
      CHECK(D(g.idx0(i, 1), g.idx0(i, 1)) == 2.0);
      CHECK(D(g.idx0(i, 1), g.idx0(i, 2)) == -1.0);
    }
  }
  const GridSpec gn = make_grid(GridCase::NonAligned, 12);
  const BlockSystem sysn = assemble_system(gn, FieldParams{2.0, 4, 1.0});
  CHECK_THROWS_AS(build_s6(sysn), UnsupportedVariantError);
}

TEST_CASE("S2 matches the dense elimination with the diagonal") {
  const GridSpec g = make_grid(GridCase::NonAligned, 8);
  const BlockSystem sys = assemble_system(g, FieldParams{2.0, 4, 0.1});
  const SchurOperator s2 = build_s2(sys);
  const Eigen::VectorXd d = oracle::to_dense(sys.A3).diagonal();
  const Eigen::MatrixXd ref =
      oracle::to_dense(sys.A1) -
      oracle::to_dense(sys.A2) * d.cwiseInverse().asDiagonal() * oracle::to_dense(sys.B);
  CHECK((oracle::to_dense(s2.matrix) - ref).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("schur solvers invert their matrices") {
  const GridSpec g = make_grid(GridCase::NonAligned, 12);
  const FieldParams p{2.0, 4, 1e-4};
  const BlockSystem sys = assemble_system(g, p);
  oracle::Lcg rng(31);
  const std::vector<double> r = rng.vector(g.size());
  for (SchurVariant v : {SchurVariant::S1, SchurVariant::S2, SchurVariant::S3, SchurVariant::S4,
                         SchurVariant::S5, SchurVariant::Exact}) {
    const SchurOperator s = build_schur(v, sys);
    std::vector<double> x(g.size());
    s.apply_inverse(r, x);
    if (s.matrix.n_rows > 0) {
      CHECK(solve_residual(s.matrix, x, r) <= 1e-9);
    } else {
      // exact complement held densely
      const std::vector<double>& d = s.dense_matrix();
      Eigen::MatrixXd E(s.n, s.n);
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) E(i, j) = d[static_cast<size_t>(i) * s.n + j];
      const Eigen::VectorXd res = E * oracle::to_eigen(x) - oracle::to_eigen(r);
      CHECK(res.norm() / oracle::to_eigen(r).norm() <= 1e-9);
    }
  }
}

TEST_CASE("variant names round-trip") {
  for (SchurVariant v : {SchurVariant::S1, SchurVariant::S2, SchurVariant::S3, SchurVariant::S4,
                         SchurVariant::S5, SchurVariant::S6, SchurVariant::Exact}) {
    CHECK(variant_from_name(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(variant_from_name("s7"), UsageError);
}
