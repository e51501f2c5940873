// Timing comparison of the OpenMP kernels against the serial references on
// assembled operators of increasing size.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mm/assembly.hpp"
#include "mm/kernels.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_op(const F& f, int reps) {
  f();  // warm up
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

std::vector<double> ramp(int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 0.5 + 0.25 * ((i * 2654435761u) % 1000) / 1000.0;
  return v;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  for (int N : {64, 128, 256}) {
    const mm::GridSpec grid = mm::make_grid(mm::GridCase::NonAligned, N);
    const mm::FieldParams p{2.0, 4, 1e-6};
    const mm::BlockSystem sys = mm::assemble_system(grid, p);
    const mm::SparseMatrix A = sys.full_matrix();
    const int n = A.n_rows;
    const std::vector<double> x = ramp(n);
    std::vector<double> y(n);
    const int reps = N <= 128 ? 200 : 50;

    const double ts = time_op([&] { mm::ref::spmv(A, x, y); }, reps);
    const double tp = time_op([&] { mm::kernels::spmv(A, x, y); }, reps);
    std::printf("%-28s %10.3e %10.3e %8.2f\n",
                ("spmv 2n=" + std::to_string(n)).c_str(), ts, tp, ts / tp);

    const double ds = time_op([&] { volatile double s = mm::ref::dot(x, x); (void)s; }, reps);
    const double dp = time_op([&] { volatile double s = mm::kernels::dot(x, x); (void)s; }, reps);
    std::printf("%-28s %10.3e %10.3e %8.2f\n",
                ("dot  2n=" + std::to_string(n)).c_str(), ds, dp, ds / dp);

    const double as = time_op([&] { mm::ref::axpy(1e-3, x, y); }, reps);
    const double ap = time_op([&] { mm::kernels::axpy(1e-3, x, y); }, reps);
    std::printf("%-28s %10.3e %10.3e %8.2f\n",
                ("axpy 2n=" + std::to_string(n)).c_str(), as, ap, as / ap);
  }
  return 0;
}
