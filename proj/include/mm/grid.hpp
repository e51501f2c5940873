#pragma once

#include <utility>
#include <vector>

namespace mm {

enum class GridCase { Aligned, NonAligned };

enum class BoundaryClass { Interior, DirichletX, NeumannBottom, NeumannTop };

/// Structured mesh on the unit square with lexicographic flat indexing,
/// counting first in z, then in x. Semantic indices are 1-based.
///
/// Aligned meshes are cell-staggered in z: the first and last z layers
/// straddle the Neumann boundaries z=0 and z=1.
struct GridSpec {
  GridCase kind = GridCase::Aligned;
  int N = 0;   // mesh parameter
  int nx = 0;  // points in x
  int nz = 0;  // points in z
  double h = 0.0;

  int size() const { return nx * nz; }

  double x(int i) const;  // i in [1, nx]
  double z(int j) const;  // j in [1, nz]

  /// Flat 1-based index: j + (i-1)*nz.
  int lexico(int i, int j) const;
  /// Inverse of lexico.
  std::pair<int, int> inverse(int iline) const;
  /// 0-based storage index.
  int idx0(int i, int j) const { return lexico(i, j) - 1; }
};

GridSpec make_grid(GridCase kind, int N);

BoundaryClass classify(int i, int j, const GridSpec& grid);

/// 0-based row indices of every grid point of the given class, ascending.
std::vector<int> rows_of_class(const GridSpec& grid, BoundaryClass cls);

}  // namespace mm
