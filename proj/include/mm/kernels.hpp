#pragma once

#include <span>

namespace mm {

struct SparseMatrix;

// OpenMP-parallel kernels. spmv and axpy are elementwise-partitioned and
// bitwise identical to the serial versions; dot/nrm2 sum fixed per-thread
// chunks in thread order, so results are reproducible for a fixed thread
// count.
namespace kernels {

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
/// y += alpha * x.
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);

}  // namespace kernels

// Serial reference implementations, kept for testing and benchmarking the
// parallel kernels against.
namespace ref {

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace ref

}  // namespace mm
