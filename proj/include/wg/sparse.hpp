#pragma once

#include <Eigen/Sparse>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

using SparseMatrixC = Eigen::SparseMatrix<cplx>;
using TripletC = Eigen::Triplet<cplx>;

/// Triplet accumulator for the complex system matrix. Duplicate entries
/// are summed on compression; the insertion order is preserved inside
/// each (i,j) bucket, which assembly relies on for exact A = A^T symmetry.
struct SparseBuilder {
  int n = 0;
  std::vector<TripletC> triplets;

  explicit SparseBuilder(int size) : n(size) {}

  void add(int i, int j, cplx v) { triplets.emplace_back(i, j, v); }

  SparseMatrixC compressed() const {
    SparseMatrixC a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
  }
};

/// Coordinate-format dump: "i j re im" per stored entry, 1-based indices,
/// 17 significant digits. Row-major traversal so the file is stable.
inline void write_coordinate(std::ostream& os, const SparseMatrixC& a) {
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> rm(a);
  rm.makeCompressed();
  os << rm.rows() << " " << rm.cols() << " " << rm.nonZeros() << "\n";
  char buf[128];
  for (int r = 0; r < rm.outerSize(); ++r)
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(rm, r);
         it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", r + 1,
                    static_cast<int>(it.col()) + 1, it.value().real(),
                    it.value().imag());
      os << buf;
    }
}

inline SparseMatrixC read_coordinate(std::istream& is) {
  int rows = 0, cols = 0;
  long nnz = 0;
  if (!(is >> rows >> cols >> nnz))
    throw std::runtime_error("read_coordinate: bad header");
  std::vector<TripletC> trip;
  trip.reserve(static_cast<size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double re = 0, im = 0;
    if (!(is >> i >> j >> re >> im))
      throw std::runtime_error("read_coordinate: truncated entry list");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw std::runtime_error("read_coordinate: index out of range");
    trip.emplace_back(i - 1, j - 1, cplx(re, im));
  }
  SparseMatrixC a(rows, cols);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

inline void write_coordinate_file(const std::string& path,
                                  const SparseMatrixC& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_coordinate(os, a);
}

inline SparseMatrixC read_coordinate_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_coordinate(is);
}

}  // namespace wg
