#include "mm/grid.hpp"

#include <string>

#include "mm/errors.hpp"

namespace mm {

GridSpec make_grid(GridCase kind, int N) {
  if (N < 4) {
    throw InvalidGridError("mesh parameter N must be >= 4, got " + std::to_string(N));
  }
  GridSpec g;
  g.kind = kind;
  g.N = N;
  if (kind == GridCase::Aligned) {
    g.nx = N;
    g.nz = N + 1;
  } else {
    g.nx = N;
    g.nz = N;
  }
  g.h = 1.0 / (N - 1);
  return g;
}

double GridSpec::x(int i) const { return (i - 1) * h; }

double GridSpec::z(int j) const {
  if (kind == GridCase::Aligned) return (j - 1.5) * h;
  return (j - 1) * h;
}

int GridSpec::lexico(int i, int j) const {
  if (i < 1 || i > nx || j < 1 || j > nz) {
    throw IndexError("grid index (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range for " + std::to_string(nx) + "x" + std::to_string(nz));
  }
  return j + (i - 1) * nz;
}

std::pair<int, int> GridSpec::inverse(int iline) const {
  if (iline < 1 || iline > size()) {
    throw IndexError("flat index " + std::to_string(iline) + " out of range");
  }
  int i = (iline - 1) / nz + 1;
  int j = iline - (i - 1) * nz;
  return {i, j};
}

BoundaryClass classify(int i, int j, const GridSpec& grid) {
  grid.lexico(i, j);  // range check
  if (i == 1 || i == grid.nx) return BoundaryClass::DirichletX;
  if (j == 1) return BoundaryClass::NeumannBottom;
  if (j == grid.nz) return BoundaryClass::NeumannTop;
  return BoundaryClass::Interior;
}

std::vector<int> rows_of_class(const GridSpec& grid, BoundaryClass cls) {
  std::vector<int> rows;
  for (int i = 1; i <= grid.nx; ++i) {
    for (int j = 1; j <= grid.nz; ++j) {
      if (classify(i, j, grid) == cls) rows.push_back(grid.idx0(i, j));
    }
  }
  return rows;
}

}  // namespace mm
