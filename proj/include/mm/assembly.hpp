#pragma once

#include <vector>

#include "mm/field.hpp"
#include "mm/grid.hpp"
#include "mm/sparse.hpp"

namespace mm {

/// The 2x2 block system
///   [ A3  B  ] [ Q   ]   [ F ]
///   [ A2  A1 ] [ Phi ] = [ 0 ]
/// with each block n x n, n = nx*nz. A3 carries the q-equations of the flux
/// balance group, A1 the phi-equations of the parallel-gradient group.
struct BlockSystem {
  SparseMatrix A3, B, A2, A1;
  std::vector<double> F;  // length n; the second block row is homogeneous
  GridSpec grid;
  FieldParams params;
  bool inflow = true;

  int block_size() const { return grid.size(); }

  /// Full 2n x 2n operator with (Q, Phi) unknown ordering.
  SparseMatrix full_matrix() const;
  /// Full right-hand side (F, 0).
  std::vector<double> full_rhs() const;
};

/// Assemble the block system for the grid's case. With inflow=false the
/// bottom rows of the first block group carry the flux condition instead of
/// q = 0, which makes A3 (and the full system) singular.
BlockSystem assemble_system(const GridSpec& grid, const FieldParams& p, bool inflow = true);

/// Discretization of -lap_par - eps*lap_perp with Dirichlet rows on the
/// x-sides and flux rows on top and bottom; the natural non-AP operator.
SparseMatrix assemble_nonap(const GridSpec& grid, const FieldParams& p);

/// h^2 f at interior rows of the first block group, zero elsewhere.
std::vector<double> build_rhs(const GridSpec& grid, const FieldParams& p);

}  // namespace mm
