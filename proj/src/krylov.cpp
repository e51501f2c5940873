#include "mm/krylov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mm/errors.hpp"
#include "mm/kernels.hpp"

namespace mm {

void BlockOperator::operator()(std::span<const double> x, std::span<double> y) const {
  const int n = sys->block_size();
  std::vector<double> tmp(n);
  auto x1 = x.subspan(0, n), x2 = x.subspan(n, n);
  auto y1 = y.subspan(0, n), y2 = y.subspan(n, n);
  kernels::spmv(sys->A3, x1, y1);
  kernels::spmv(sys->B, x2, tmp);
  kernels::axpy(1.0, tmp, y1);
  kernels::spmv(sys->A2, x1, y2);
  kernels::spmv(sys->A1, x2, tmp);
  kernels::axpy(1.0, tmp, y2);
}

void BlockPreconditioner::operator()(std::span<const double> r, std::span<double> e) const {
  const int n = a3->size();
  auto r1 = r.subspan(0, n), r2 = r.subspan(n, n);
  auto e1 = e.subspan(0, n), e2 = e.subspan(n, n);
  a3->solve(r1, e1);
  std::vector<double> rhs(n);
  kernels::spmv(*a2, e1, rhs);
  for (int i = 0; i < n; ++i) rhs[i] = r2[i] - rhs[i];
  schur->apply_inverse(rhs, e2);
}

GmresReport gmres(const ApplyFn& op, const ApplyFn& prec, std::span<const double> b,
                  const SolverConfig& cfg, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  const int maxit = cfg.maxit;
  GmresReport rep;
  x.assign(n, 0.0);

  std::vector<double> z(n), w(n);
  prec(b, z);
  const double beta0 = ref::nrm2(z);
  rep.residual_history.push_back(1.0);
  if (beta0 == 0.0) {
    rep.converged = true;
    return rep;
  }

  // Krylov basis, rows of length n.
  std::vector<std::vector<double>> V;
  V.reserve(maxit + 1);
  V.push_back(z);
  kernels::scal(1.0 / beta0, V[0]);

  // Hessenberg in row-major (maxit+1) x maxit, plus its Givens-rotated copy.
  const int ld = maxit;
  std::vector<double> H(static_cast<size_t>(maxit + 1) * ld, 0.0);
  std::vector<double> R(static_cast<size_t>(maxit + 1) * ld, 0.0);
  std::vector<double> gc(maxit), gs(maxit);
  std::vector<double> g(maxit + 1, 0.0);
  g[0] = beta0;

  int k = 0;
  for (k = 1; k <= maxit; ++k) {
    const int col = k - 1;
    op(V[k - 1], w);
    prec(w, z);

    // Classical Gram-Schmidt with one reorthogonalization pass.
    std::vector<double> h(k + 1, 0.0);
    for (int i = 0; i < k; ++i) h[i] = ref::dot(V[i], z);
    for (int i = 0; i < k; ++i) kernels::axpy(-h[i], V[i], z);
    for (int i = 0; i < k; ++i) {
      const double c = ref::dot(V[i], z);
      kernels::axpy(-c, V[i], z);
      h[i] += c;
    }
    h[k] = ref::nrm2(z);
    for (int i = 0; i <= k; ++i) {
      H[static_cast<size_t>(i) * ld + col] = h[i];
      R[static_cast<size_t>(i) * ld + col] = h[i];
    }

    // Apply previous rotations, then eliminate the subdiagonal.
    for (int i = 0; i < col; ++i) {
      const double t1 = R[static_cast<size_t>(i) * ld + col];
      const double t2 = R[static_cast<size_t>(i + 1) * ld + col];
      R[static_cast<size_t>(i) * ld + col] = gc[i] * t1 + gs[i] * t2;
      R[static_cast<size_t>(i + 1) * ld + col] = -gs[i] * t1 + gc[i] * t2;
    }
    const double a = R[static_cast<size_t>(col) * ld + col];
    const double bb = R[static_cast<size_t>(col + 1) * ld + col];
    const double rho = std::hypot(a, bb);
    gc[col] = rho == 0.0 ? 1.0 : a / rho;
    gs[col] = rho == 0.0 ? 0.0 : bb / rho;
    R[static_cast<size_t>(col) * ld + col] = rho;
    R[static_cast<size_t>(col + 1) * ld + col] = 0.0;
    const double g1 = g[col];
    g[col] = gc[col] * g1;
    g[col + 1] = -gs[col] * g1;

    const double rel = std::abs(g[col + 1]) / beta0;
    rep.residual_history.push_back(rel);
    if (rel <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (h[k] <= 1e-14 * beta0) {
      // Happy breakdown: the Krylov space is invariant.
      rep.converged = true;
      break;
    }
    kernels::scal(1.0 / h[k], z);
    V.push_back(z);
  }
  if (k > maxit) {
    k = maxit;
    rep.converged = false;
  }
  rep.iterations = k;

  // Back substitution for y, then x = V y.
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= R[static_cast<size_t>(i) * ld + j] * y[j];
    const double d = R[static_cast<size_t>(i) * ld + i];
    y[i] = d == 0.0 ? 0.0 : s / d;
  }
  for (int i = 0; i < k; ++i) {
    if (static_cast<size_t>(i) < V.size()) kernels::axpy(y[i], V[i], x);
  }

  if (cfg.want_ritz) {
    std::vector<double> hm(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) hm[static_cast<size_t>(i) * k + j] = H[static_cast<size_t>(i) * ld + j];
    rep.ritz = ritz_values(hm, k);
  }
  return rep;
}

GmresReport gmres(const BlockOperator& op, const BlockPreconditioner& prec,
                  std::span<const double> b, const SolverConfig& cfg, std::vector<double>& x) {
  return gmres([&](std::span<const double> in, std::span<double> out) { op(in, out); },
               [&](std::span<const double> in, std::span<double> out) { prec(in, out); }, b, cfg,
               x);
}

std::vector<std::complex<double>> ritz_values(const std::vector<double>& hess_rowmajor, int m) {
  Eigen::MatrixXd H(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) H(i, j) = hess_rowmajor[static_cast<size_t>(i) * m + j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(H, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw EstimateUnavailableError("eigenvalue iteration on the Hessenberg block failed");
  }
  std::vector<std::complex<double>> out(m);
  for (int i = 0; i < m; ++i) out[i] = es.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace mm
