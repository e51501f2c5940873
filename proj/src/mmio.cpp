#include "mm/mmio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mm/errors.hpp"

namespace mm {

namespace {

void write_header(std::ofstream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
}

}  // namespace

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_header(out);
  out << A.n_rows << " " << A.n_cols << " " << A.nnz() << "\n";
  out.precision(17);
  for (int r = 0; r < A.n_rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      out << r + 1 << " " << A.col_indices[k] + 1 << " " << A.values[k] << "\n";
    }
  }
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw Error("'" + path + "' is not a Matrix Market file");
  }
  {
    std::istringstream hdr(line);
    std::string tag, object, format, field, symmetry;
    hdr >> tag >> object >> format >> field >> symmetry;
    if (object != "matrix" || format != "coordinate" || field != "real" ||
        symmetry != "general") {
      throw Error("unsupported Matrix Market header in '" + path + "'");
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  int n_rows = 0, n_cols = 0;
  long long nnz = 0;
  sizes >> n_rows >> n_cols >> nnz;
  if (!sizes || n_rows <= 0 || n_cols <= 0) throw Error("bad size line in '" + path + "'");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (long long k = 0; k < nnz; ++k) {
    int r, c;
    double v;
    if (!(in >> r >> c >> v)) throw Error("truncated entries in '" + path + "'");
    t.push_back({r - 1, c - 1, v});
  }
  return assemble(n_rows, n_cols, t);
}

void write_vector_market(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_header(out);
  int nnz = 0;
  for (double x : v) nnz += x != 0.0;
  out << v.size() << " " << 1 << " " << nnz << "\n";
  out.precision(17);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out << i + 1 << " 1 " << v[i] << "\n";
  }
}

}  // namespace mm
