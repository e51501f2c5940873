#pragma once

#include <string>
#include <vector>

#include "mm/sparse.hpp"

namespace mm {

/// Matrix Market coordinate real general, 1-based indices.
void write_matrix_market(const std::string& path, const SparseMatrix& A);
SparseMatrix read_matrix_market(const std::string& path);

/// Vectors are written as n x 1 coordinate files.
void write_vector_market(const std::string& path, const std::vector<double>& v);

}  // namespace mm
