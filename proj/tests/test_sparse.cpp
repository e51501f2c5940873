#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "mm/errors.hpp"
#include "mm/sparse.hpp"
#include "support/oracles.hpp"

using namespace mm;

namespace {

SparseMatrix random_sparse(int rows, int cols, int per_row, oracle::Lcg& rng) {
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < per_row; ++k) {
      const int c = static_cast<int>((rng.uniform() + 1.0) / 2.0 * cols) % cols;
      t.push_back({r, c, rng.uniform()});
    }
  }
  return assemble(rows, cols, t);
}

}  // namespace

TEST_CASE("assemble sums duplicates") {
  const SparseMatrix A = assemble(2, 2, {{0, 0, 1.0}, {0, 0, 1.0}});
  CHECK(A.nnz() == 1);
  CHECK(A.values[0] == 2.0);
}

TEST_CASE("assemble of nothing is the zero matrix") {
  const SparseMatrix A = assemble(3, 3, {});
  CHECK(A.nnz() == 0);
  const std::vector<double> x = {1.0, 2.0, 3.0};
  for (double y : spmv(A, x)) CHECK(y == 0.0);
}

TEST_CASE("assemble rejects out-of-range entries") {
  CHECK_THROWS_AS(assemble(2, 2, {{2, 0, 1.0}}), AssemblyError);
  CHECK_THROWS_AS(assemble(2, 2, {{0, -1, 1.0}}), AssemblyError);
}

TEST_CASE("identity acts as identity") {
  oracle::Lcg rng(7);
  const std::vector<double> x = rng.vector(9);
  const std::vector<double> y = spmv(identity(9), x);
  for (int i = 0; i < 9; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("spmv against the dense oracle") {
  oracle::Lcg rng(11);
  const SparseMatrix A = random_sparse(5, 5, 3, rng);
  const Eigen::MatrixXd D = oracle::to_dense(A);
  for (int rep = 0; rep < 10; ++rep) {
    const std::vector<double> x = rng.vector(5);
    const std::vector<double> y = spmv(A, x);
    const Eigen::VectorXd ref = D * oracle::to_eigen(x);
    for (int i = 0; i < 5; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(spmv(A, std::vector<double>(4)), DimensionError);
}

TEST_CASE("add_scaled against the dense oracle") {
  oracle::Lcg rng(13);
  const SparseMatrix A = random_sparse(6, 6, 3, rng);
  const SparseMatrix B = random_sparse(6, 6, 3, rng);
  const SparseMatrix C = add_scaled(A, 0.37, B);
  const Eigen::MatrixXd ref = oracle::to_dense(A) + 0.37 * oracle::to_dense(B);
  CHECK((oracle::to_dense(C) - ref).cwiseAbs().maxCoeff() <= 1e-14);

  const SparseMatrix Z = add_scaled(A, -1.0, A);
  CHECK(oracle::to_dense(Z).cwiseAbs().maxCoeff() == 0.0);

  const SparseMatrix A0 = add_scaled(A, 0.0, B);
  CHECK((oracle::to_dense(A0) - oracle::to_dense(A)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("replace_rows and add_rows") {
  oracle::Lcg rng(17);
  const SparseMatrix A = random_sparse(6, 6, 3, rng);
  const SparseMatrix S = random_sparse(6, 6, 3, rng);

  const std::vector<int> none;
  CHECK((oracle::to_dense(replace_rows(A, none, S)) - oracle::to_dense(A)).norm() == 0.0);

  std::vector<int> all = {0, 1, 2, 3, 4, 5};
  CHECK((oracle::to_dense(replace_rows(A, all, S)) - oracle::to_dense(S)).norm() == 0.0);

  const std::vector<int> one = {2};
  Eigen::MatrixXd ref = oracle::to_dense(A);
  ref.row(2) = oracle::to_dense(S).row(2);
  CHECK((oracle::to_dense(replace_rows(A, one, S)) - ref).norm() == 0.0);

  Eigen::MatrixXd ref2 = oracle::to_dense(A);
  ref2.row(2) += oracle::to_dense(S).row(2);
  CHECK((oracle::to_dense(add_rows(A, one, S)) - ref2).cwiseAbs().maxCoeff() <= 1e-14);

  const SparseMatrix zero = assemble(6, 6, {});
  CHECK((oracle::to_dense(add_rows(A, one, zero)) - oracle::to_dense(A)).norm() == 0.0);

  CHECK_THROWS_AS(replace_rows(A, std::vector<int>{6}, S), IndexError);
}

TEST_CASE("add_rows can null a row") {
  const SparseMatrix A = assemble(2, 2, {{0, 0, 1.0}, {0, 1, -2.0}, {1, 1, 3.0}});
  const SparseMatrix M = assemble(2, 2, {{0, 0, -1.0}, {0, 1, 2.0}});
  const SparseMatrix C = add_rows(A, std::vector<int>{0}, M);
  CHECK(oracle::to_dense(C).row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("triple_product_diag against the dense oracle") {
  oracle::Lcg rng(19);
  const SparseMatrix A2 = random_sparse(6, 6, 3, rng);
  const SparseMatrix B = random_sparse(6, 6, 3, rng);
  std::vector<double> d(6);
  for (double& v : d) v = 1.0 + 0.5 * rng.uniform();

  const SparseMatrix C = triple_product_diag(A2, d, B);
  const Eigen::MatrixXd ref =
      oracle::to_dense(A2) * oracle::to_eigen(d).cwiseInverse().asDiagonal() * oracle::to_dense(B);
  CHECK((oracle::to_dense(C) - ref).cwiseAbs().maxCoeff() <= 1e-13);

  // D = I gives the plain product; A2 = B = I extracts 1/d.
  const std::vector<double> ones(6, 1.0);
  const SparseMatrix P = triple_product_diag(A2, ones, B);
  CHECK((oracle::to_dense(P) - oracle::to_dense(A2) * oracle::to_dense(B)).cwiseAbs().maxCoeff() <=
        1e-13);
  const SparseMatrix I6 = identity(6);
  const SparseMatrix Dinv = triple_product_diag(I6, d, I6);
  for (int i = 0; i < 6; ++i) {
    CHECK(oracle::to_dense(Dinv)(i, i) == doctest::Approx(1.0 / d[i]).epsilon(1e-15));
  }

  std::vector<double> bad = d;
  bad[3] = 0.0;
  CHECK_THROWS_AS(triple_product_diag(A2, bad, B), SingularDiagonalError);
}

TEST_CASE("transpose and symmetry defect") {
  oracle::Lcg rng(23);
  const SparseMatrix A = random_sparse(7, 7, 3, rng);
  CHECK((oracle::to_dense(transpose(A)) - oracle::to_dense(A).transpose()).norm() == 0.0);

  const SparseMatrix Sym = add_scaled(A, 1.0, transpose(A));
  CHECK(symmetry_defect(Sym) <= 1e-15);
  CHECK(symmetry_defect(A) > 0.0);
}
