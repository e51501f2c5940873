#include "mm/assembly.hpp"

#include <cmath>

#include "mm/errors.hpp"

namespace mm {

namespace {

// Triplets of factor * h^2 * lap_par at row (i,j), flux form with the tensor
// sampled at half points. Valid on interior points.
void emit_par_laplacian(const GridSpec& g, double beta, int i, int j, double factor,
                        std::vector<Triplet>& out) {
  const int r = g.idx0(i, j);
  const double xi = g.x(i), zj = g.z(j);
  const double hx = 0.5 * g.h;
  const UnitField be = magnetic_field(xi + hx, zj, beta);   // (i+1/2, j)
  const UnitField bw = magnetic_field(xi - hx, zj, beta);   // (i-1/2, j)
  const UnitField bn = magnetic_field(xi, zj + hx, beta);   // (i, j+1/2)
  const UnitField bs = magnetic_field(xi, zj - hx, beta);   // (i, j-1/2)

  auto add = [&](int ii, int jj, double v) { out.push_back({r, g.idx0(ii, jj), factor * v}); };

  // G_{i+1/2,j}
  add(i + 1, j, be.b11);
  add(i, j, -be.b11);
  add(i + 1, j + 1, 0.25 * be.b12);
  add(i, j + 1, 0.25 * be.b12);
  add(i + 1, j - 1, -0.25 * be.b12);
  add(i, j - 1, -0.25 * be.b12);
  // -G_{i-1/2,j}
  add(i, j, -bw.b11);
  add(i - 1, j, bw.b11);
  add(i, j + 1, -0.25 * bw.b12);
  add(i - 1, j + 1, -0.25 * bw.b12);
  add(i, j - 1, 0.25 * bw.b12);
  add(i - 1, j - 1, 0.25 * bw.b12);
  // H_{i,j+1/2}
  add(i + 1, j + 1, 0.25 * bn.b21);
  add(i + 1, j, 0.25 * bn.b21);
  add(i - 1, j + 1, -0.25 * bn.b21);
  add(i - 1, j, -0.25 * bn.b21);
  add(i, j + 1, bn.b22);
  add(i, j, -bn.b22);
  // -H_{i,j-1/2}
  add(i + 1, j, -0.25 * bs.b21);
  add(i + 1, j - 1, -0.25 * bs.b21);
  add(i - 1, j, 0.25 * bs.b21);
  add(i - 1, j - 1, 0.25 * bs.b21);
  add(i, j, -bs.b22);
  add(i, j - 1, bs.b22);
}

// factor * h^2 * lap (5-point) at row (i,j).
void emit_laplacian5(const GridSpec& g, int i, int j, double factor, std::vector<Triplet>& out) {
  const int r = g.idx0(i, j);
  out.push_back({r, g.idx0(i + 1, j), factor});
  out.push_back({r, g.idx0(i - 1, j), factor});
  out.push_back({r, g.idx0(i, j + 1), factor});
  out.push_back({r, g.idx0(i, j - 1), factor});
  out.push_back({r, g.idx0(i, j), -4.0 * factor});
}

// One-sided boundary derivative rows, scaled by h. cx multiplies the central
// x-difference, cz the 3-point one-sided z-difference pointing into the domain.
void emit_boundary_row(const GridSpec& g, int i, int j, bool bottom, double cx, double cz,
                       std::vector<Triplet>& out) {
  const int r = g.idx0(i, j);
  out.push_back({r, g.idx0(i + 1, j), cx});
  out.push_back({r, g.idx0(i - 1, j), -cx});
  if (bottom) {
    out.push_back({r, g.idx0(i, 1), -3.0 * cz});
    out.push_back({r, g.idx0(i, 2), 4.0 * cz});
    out.push_back({r, g.idx0(i, 3), -cz});
  } else {
    out.push_back({r, g.idx0(i, g.nz), 3.0 * cz});
    out.push_back({r, g.idx0(i, g.nz - 1), -4.0 * cz});
    out.push_back({r, g.idx0(i, g.nz - 2), cz});
  }
}

struct Blocks {
  std::vector<Triplet> a3, b, a2, a1;
};

Blocks assemble_aligned_blocks(const GridSpec& g, const FieldParams& p, bool inflow) {
  Blocks t;
  const double eps = p.eps;
  for (int i = 1; i <= g.nx; ++i) {
    for (int j = 1; j <= g.nz; ++j) {
      const int r = g.idx0(i, j);
      // First group: flux balance rows.
      if (i == 1 || i == g.nx) {
        t.a3.push_back({r, r, 1.0});
      } else if (j == 1) {
        // Without the inflow condition the bottom row of this group is void:
        // the flux condition already sits in the bottom row of the second
        // group, so the first-group row is dropped and A3 becomes singular.
        if (inflow) t.a3.push_back({r, r, 1.0});
      } else if (j == g.nz) {
        t.a3.push_back({r, g.idx0(i, g.nz - 1), -1.0});
        t.a3.push_back({r, g.idx0(i, g.nz), 1.0});
      } else {
        // The j=2 coupling to the inflow row and the x-couplings to the
        // Dirichlet columns are dropped, which makes A3 and B symmetric.
        if (!(j == 2 && inflow)) t.a3.push_back({r, g.idx0(i, j - 1), -1.0});
        t.a3.push_back({r, g.idx0(i, j), 2.0});
        t.a3.push_back({r, g.idx0(i, j + 1), -1.0});
        if (i != 2) t.b.push_back({r, g.idx0(i - 1, j), -1.0});
        t.b.push_back({r, g.idx0(i, j), 2.0});
        if (i != g.nx - 1) t.b.push_back({r, g.idx0(i + 1, j), -1.0});
      }
      // Second group: parallel-gradient rows.
      if (i == 1 || i == g.nx) {
        t.a1.push_back({r, r, 1.0});
      } else if (j == 1) {
        t.a2.push_back({r, g.idx0(i, 1), 1.0});
        t.a2.push_back({r, g.idx0(i, 2), -1.0});
      } else if (j == g.nz) {
        t.a1.push_back({r, g.idx0(i, g.nz - 1), -1.0});
        t.a1.push_back({r, g.idx0(i, g.nz), 1.0});
      } else {
        t.a2.push_back({r, g.idx0(i, j - 1), eps});
        t.a2.push_back({r, g.idx0(i, j), -2.0 * eps});
        t.a2.push_back({r, g.idx0(i, j + 1), eps});
        t.a1.push_back({r, g.idx0(i, j - 1), -1.0});
        t.a1.push_back({r, g.idx0(i, j), 2.0});
        t.a1.push_back({r, g.idx0(i, j + 1), -1.0});
      }
    }
  }
  return t;
}

Blocks assemble_nonaligned_blocks(const GridSpec& g, const FieldParams& p, bool inflow) {
  Blocks t;
  const double eps = p.eps;
  const double beta = p.beta;
  for (int i = 1; i <= g.nx; ++i) {
    for (int j = 1; j <= g.nz; ++j) {
      const int r = g.idx0(i, j);
      // First group.
      if (i == 1 || i == g.nx) {
        t.a3.push_back({r, r, 1.0});
      } else if (j == 1 && inflow) {
        t.a3.push_back({r, r, 1.0});
      } else if (j == 1) {
        // Void without inflow; see the aligned branch.
      } else if (j == g.nz) {
        // n.grad_par q + n.grad_perp phi = 0, one-sided toward the interior.
        const UnitField b = magnetic_field(g.x(i), g.z(j), beta);
        emit_boundary_row(g, i, j, false, 0.5 * b.b21, 0.5 * b.b22, t.a3);
        emit_boundary_row(g, i, j, false, -0.5 * b.b12, 0.5 * b.b11, t.b);
      } else {
        emit_par_laplacian(g, beta, i, j, -1.0, t.a3);
        emit_par_laplacian(g, beta, i, j, 1.0, t.b);
        emit_laplacian5(g, i, j, -1.0, t.b);
      }
      // Second group.
      if (i == 1 || i == g.nx) {
        t.a1.push_back({r, r, 1.0});
      } else if (j == 1) {
        const UnitField b = magnetic_field(g.x(i), g.z(1), beta);
        emit_boundary_row(g, i, 1, true, 0.5 * b.b21, 0.5 * b.b22, t.a2);
        emit_boundary_row(g, i, 1, true, -0.5 * b.b12, 0.5 * b.b11, t.a1);
      } else if (j == g.nz) {
        const UnitField b = magnetic_field(g.x(i), g.z(g.nz), beta);
        emit_boundary_row(g, i, g.nz, false, eps * 0.5 * b.b21, eps * 0.5 * b.b22, t.a2);
        emit_boundary_row(g, i, g.nz, false, -0.5 * b.b21, -0.5 * b.b22, t.a1);
      } else {
        emit_par_laplacian(g, beta, i, j, eps, t.a2);
        emit_par_laplacian(g, beta, i, j, -1.0, t.a1);
      }
    }
  }
  return t;
}

}  // namespace

BlockSystem assemble_system(const GridSpec& grid, const FieldParams& p, bool inflow) {
  if (grid.kind == GridCase::Aligned && p.beta != 0.0) {
    throw AssemblyError("the aligned discretization requires beta = 0");
  }
  const Blocks t = grid.kind == GridCase::Aligned ? assemble_aligned_blocks(grid, p, inflow)
                                                  : assemble_nonaligned_blocks(grid, p, inflow);
  const int n = grid.size();
  BlockSystem sys;
  sys.A3 = assemble(n, n, t.a3);
  sys.B = assemble(n, n, t.b);
  sys.A2 = assemble(n, n, t.a2);
  sys.A1 = assemble(n, n, t.a1);
  sys.F = build_rhs(grid, p);
  sys.grid = grid;
  sys.params = p;
  sys.inflow = inflow;
  return sys;
}

SparseMatrix assemble_nonap(const GridSpec& grid, const FieldParams& p) {
  if (grid.kind == GridCase::Aligned && p.beta != 0.0) {
    throw AssemblyError("the aligned discretization requires beta = 0");
  }
  const Blocks t = grid.kind == GridCase::Aligned
                       ? assemble_aligned_blocks(grid, p, true)
                       : assemble_nonaligned_blocks(grid, p, true);
  const int n = grid.size();
  const SparseMatrix A1 = assemble(n, n, t.a1);
  const SparseMatrix B = assemble(n, n, t.b);
  SparseMatrix base = add_scaled(A1, p.eps, B);

  // Flux rows n.grad_par phi + eps * n.grad_perp phi = 0 on top and bottom,
  // oriented row-for-row like the phi-equations of the block assembly (the
  // top group carries the - sign there).
  std::vector<Triplet> rows;
  for (int i = 2; i <= grid.nx - 1; ++i) {
    if (grid.kind == GridCase::Aligned) {
      rows.push_back({grid.idx0(i, 1), grid.idx0(i, 1), 1.0});
      rows.push_back({grid.idx0(i, 1), grid.idx0(i, 2), -1.0});
      rows.push_back({grid.idx0(i, grid.nz), grid.idx0(i, grid.nz - 1), -1.0});
      rows.push_back({grid.idx0(i, grid.nz), grid.idx0(i, grid.nz), 1.0});
    } else {
      const UnitField bb = magnetic_field(grid.x(i), grid.z(1), p.beta);
      emit_boundary_row(grid, i, 1, true, 0.5 * bb.b21 - p.eps * 0.5 * bb.b12,
                        0.5 * bb.b22 + p.eps * 0.5 * bb.b11, rows);
      const UnitField bt = magnetic_field(grid.x(i), grid.z(grid.nz), p.beta);
      emit_boundary_row(grid, i, grid.nz, false, -(0.5 * bt.b21 - p.eps * 0.5 * bt.b12),
                        -(0.5 * bt.b22 + p.eps * 0.5 * bt.b11), rows);
    }
  }
  SparseMatrix flux = assemble(n, n, rows);
  std::vector<int> surgery = rows_of_class(grid, BoundaryClass::NeumannBottom);
  const std::vector<int> top = rows_of_class(grid, BoundaryClass::NeumannTop);
  surgery.insert(surgery.end(), top.begin(), top.end());
  return replace_rows(base, surgery, flux);
}

std::vector<double> build_rhs(const GridSpec& grid, const FieldParams& p) {
  std::vector<double> F(grid.size(), 0.0);
  const double h2 = grid.h * grid.h;
  for (int i = 2; i <= grid.nx - 1; ++i) {
    for (int j = 2; j <= grid.nz - 1; ++j) {
      F[grid.idx0(i, j)] = h2 * forcing_f(grid.x(i), grid.z(j), p);
    }
  }
  return F;
}

SparseMatrix BlockSystem::full_matrix() const {
  const int n = block_size();
  std::vector<Triplet> t;
  t.reserve(2 * (A3.nnz() + B.nnz() + A2.nnz() + A1.nnz()));
  auto put = [&](const SparseMatrix& M, int roff, int coff) {
    for (int r = 0; r < M.n_rows; ++r) {
      for (int k = M.row_offsets[r]; k < M.row_offsets[r + 1]; ++k) {
        t.push_back({r + roff, M.col_indices[k] + coff, M.values[k]});
      }
    }
  };
  put(A3, 0, 0);
  put(B, 0, n);
  put(A2, n, 0);
  put(A1, n, n);
  return assemble(2 * n, 2 * n, t);
}

std::vector<double> BlockSystem::full_rhs() const {
  std::vector<double> b(2 * block_size(), 0.0);
  std::copy(F.begin(), F.end(), b.begin());
  return b;
}

}  // namespace mm
