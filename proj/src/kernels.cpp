#include "mm/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mm/sparse.hpp"

namespace mm {
namespace kernels {

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
  const int n = A.n_rows;
  const int* offs = A.row_offsets.data();
  const int* cols = A.col_indices.data();
  const double* vals = A.values.data();
  const double* xp = x.data();
  double* yp = y.data();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int k = offs[r]; k < offs[r + 1]; ++k) sum += vals[k] * xp[cols[k]];
    yp[r] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
#ifdef _OPENMP
  const int nt = omp_get_max_threads();
#else
  const int nt = 1;
#endif
  if (nt == 1 || n < 4096) return ref::dot(x, y);
  std::vector<double> partial(nt, 0.0);
  const size_t chunk = (n + nt - 1) / nt;
#pragma omp parallel num_threads(nt)
  {
#ifdef _OPENMP
    const int t = omp_get_thread_num();
#else
    const int t = 0;
#endif
    const size_t lo = t * chunk;
    const size_t hi = std::min(n, lo + chunk);
    double s = 0.0;
    for (size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    partial[t] = s;
  }
  double sum = 0.0;
  for (int t = 0; t < nt; ++t) sum += partial[t];
  return sum;
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const size_t n = x.size();
  const double* xp = x.data();
  double* yp = y.data();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) yp[i] += alpha * xp[i];
}

void scal(double alpha, std::span<double> x) {
  double* xp = x.data();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(x.size()); ++i) xp[i] *= alpha;
}

}  // namespace kernels

namespace ref {

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < A.n_rows; ++r) {
    double sum = 0.0;
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      sum += A.values[k] * x[A.col_indices[k]];
    }
    y[r] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace ref
}  // namespace mm
