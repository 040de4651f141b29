#pragma once

#include "grassmann/scalar.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace sq::grassmann {

using SparseRow = std::map<std::size_t, Rational>;

struct SparseMatrix {
  std::size_t columns = 0;
  std::vector<SparseRow> rows;
};

/// Rank over the rationals.
std::size_t rank(const SparseMatrix& m);

/// Basis of {v : M v = 0}, one vector per free column, in column order.
std::vector<SparseRow> nullspace(const SparseMatrix& m);

}  // namespace sq::grassmann
