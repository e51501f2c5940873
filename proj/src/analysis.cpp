#include "mm/analysis.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"

namespace mm {

namespace {

// Deterministic start vector; no library RNG so runs are bit-reproducible.
std::vector<double> seeded_vector(int n, uint64_t seed) {
  std::vector<double> v(n);
  uint64_t s = seed;
  for (int i = 0; i < n; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v[i] = static_cast<double>(s % 2000001) / 1000000.0 - 1.0;
  }
  return v;
}

// Largest eigenvalue of the symmetric positive operator `apply` by power
// iteration. Returns the estimate and iterations used.
template <class Apply>
std::pair<double, int> power_iteration(int n, const Apply& apply, double tol, int cap,
                                       bool* hit_cap) {
  std::vector<double> v = seeded_vector(n, 0x9e3779b97f4a7c15ull);
  std::vector<double> w(n);
  double norm = ref::nrm2(v);
  kernels::scal(1.0 / norm, v);
  double lambda = 0.0;
  int it = 0;
  for (it = 1; it <= cap; ++it) {
    apply(v, w);
    const double next = ref::dot(v, w);
    const double wn = ref::nrm2(w);
    if (wn == 0.0) return {0.0, it};
    for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
    if (it > 1 && std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      return {lambda, it};
    }
    lambda = next;
  }
  *hit_cap = true;
  return {lambda, cap};
}

}  // namespace

CondEstimate cond_estimate(const SchurOperator& S, double tol) {
  if (S.matrix.n_rows == 0) {
    throw EstimateUnavailableError("condition estimate needs the assembled matrix");
  }
  const int n = S.matrix.n_rows;
  const SparseMatrix St = transpose(S.matrix);
  const int cap = 10000;
  bool approx = false;

  std::vector<double> tmp(n);
  auto normal_op = [&](const std::vector<double>& x, std::vector<double>& y) {
    kernels::spmv(S.matrix, x, tmp);
    kernels::spmv(St, tmp, y);
  };
  auto inverse_op = [&](const std::vector<double>& x, std::vector<double>& y) {
    // (S^T S)^{-1} = S^{-1} S^{-T}
    S.apply_inverse(x, tmp, /*transpose=*/true);
    S.apply_inverse(tmp, y, /*transpose=*/false);
  };

  CondEstimate est;
  auto [lmax, it1] = power_iteration(n, normal_op, tol, cap, &approx);
  auto [linv, it2] = power_iteration(n, inverse_op, tol, cap, &approx);
  est.sigma_max = std::sqrt(std::max(0.0, lmax));
  est.sigma_min = linv > 0.0 ? 1.0 / std::sqrt(linv) : 0.0;
  est.cond2 = est.sigma_min > 0.0 ? est.sigma_max / est.sigma_min
                                  : std::numeric_limits<double>::infinity();
  est.iterations_used = it1 + it2;
  est.approximate = approx;
  return est;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw EstimateUnavailableError("regression needs at least two points");
  }
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<SlopeRow> conjecture_check(GridCase grid_case, const std::vector<double>& betas,
                                       const std::vector<double>& epss,
                                       const std::vector<int>& Ns, SweepAxis axis,
                                       double cond_tol) {
  if (betas.empty() || epss.empty() || Ns.empty()) {
    throw EstimateUnavailableError("conjecture sweep needs nonempty parameter lists");
  }
  std::vector<SlopeRow> out;

  auto cond_at = [&](double beta, double eps, int N) {
    const GridSpec grid = make_grid(grid_case, N);
    const FieldParams p{beta, 4, eps};
    const SchurOperator s1 = build_s1(grid, p);
    return cond_estimate(s1, cond_tol).cond2;
  };
  auto geomean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::log(x);
    return std::exp(s / v.size());
  };

  if (axis == SweepAxis::MeshN) {
    for (double beta : betas) {
      for (double eps : epss) {
        std::vector<double> xs, ys;
        std::vector<SlopeRow> rows;
        for (int N : Ns) {
          const double c = cond_at(beta, eps, N);
          xs.push_back(N);
          ys.push_back(c);
          rows.push_back({grid_case, beta, eps, N, c, 0.0, 0.0});
        }
        // eps-dominated closure scales like 1/(eps h^2) -> N^2; the
        // beta-dominated regime adds another h^2 -> N^4.
        double hg = 0.0;
        for (int N : Ns) hg += std::log(1.0 / (N - 1.0));
        hg = std::exp(hg / Ns.size());
        const double predicted = eps >= beta * beta * hg * hg ? 2.0 : 4.0;
        const double slope = loglog_slope(xs, ys);
        for (auto& r : rows) {
          r.predicted_exponent = predicted;
          r.fitted_slope = slope;
          out.push_back(r);
        }
      }
    }
  } else if (axis == SweepAxis::InvEps) {
    for (double beta : betas) {
      for (int N : Ns) {
        const double h = 1.0 / (N - 1.0);
        std::vector<double> xs, ys;
        std::vector<SlopeRow> rows;
        for (double eps : epss) {
          const double c = cond_at(beta, eps, N);
          xs.push_back(1.0 / eps);
          ys.push_back(c);
          rows.push_back({grid_case, beta, eps, N, c, 0.0, 0.0});
        }
        const double predicted = geomean(epss) >= beta * beta * h * h ? 1.0 : 0.0;
        const double slope = loglog_slope(xs, ys);
        for (auto& r : rows) {
          r.predicted_exponent = predicted;
          r.fitted_slope = slope;
          out.push_back(r);
        }
      }
    }
  } else {
    for (double eps : epss) {
      for (int N : Ns) {
        const double h = 1.0 / (N - 1.0);
        std::vector<double> xs, ys;
        std::vector<SlopeRow> rows;
        for (double beta : betas) {
          const double c = cond_at(beta, eps, N);
          xs.push_back(1.0 / (beta * beta));
          ys.push_back(c);
          rows.push_back({grid_case, beta, eps, N, c, 0.0, 0.0});
        }
        const double gb = geomean(betas);
        const double predicted = gb * gb * h * h >= eps ? 1.0 : 0.0;
        const double slope = loglog_slope(xs, ys);
        for (auto& r : rows) {
          r.predicted_exponent = predicted;
          r.fitted_slope = slope;
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

ErrorNorms error_norms(std::span<const double> phi, const GridSpec& grid, const FieldParams& p) {
  if (static_cast<int>(phi.size()) != grid.size()) {
    throw DimensionError("solution length does not match the grid");
  }
  ErrorNorms norms;
  double sq = 0.0;
  for (int i = 1; i <= grid.nx; ++i) {
    for (int j = 1; j <= grid.nz; ++j) {
      const double e = phi[grid.idx0(i, j)] - phi_exact(grid.x(i), grid.z(j), p);
      norms.l_inf = std::max(norms.l_inf, std::abs(e));
      sq += e * e;
    }
  }
  norms.l2_grid = grid.h * std::sqrt(sq);
  return norms;
}

}  // namespace mm
