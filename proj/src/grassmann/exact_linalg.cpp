#include "grassmann/exact_linalg.hpp"

#include "common/error.hpp"

namespace sq::grassmann {

namespace {

void axpy(SparseRow& y, const Rational& a, const SparseRow& x) {
  for (const auto& [col, v] : x) {
    auto [it, inserted] = y.try_emplace(col, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second == 0) y.erase(it);
    }
  }
}

/// Reduced row echelon form, keyed by pivot column. Every stored row has a
/// unit pivot and no entries in other pivot columns.
std::map<std::size_t, SparseRow> rref(const SparseMatrix& m) {
  std::map<std::size_t, SparseRow> pivots;
  for (const auto& input : m.rows) {
    SparseRow row;
    for (const auto& [col, v] : input) {
      if (col >= m.columns) throw Error(ErrorKind::Dimension, "sparse entry beyond column count");
      if (v != 0) row.emplace(col, v);
    }
    for (const auto& [pc, prow] : pivots) {
      auto it = row.find(pc);
      if (it == row.end()) continue;
      Rational f = -it->second;
      axpy(row, f, prow);
    }
    if (row.empty()) continue;
    const std::size_t pc = row.begin()->first;
    const Rational inv = 1 / row.begin()->second;
    for (auto& [col, v] : row) v *= inv;
    for (auto& [other, orow] : pivots) {
      auto it = orow.find(pc);
      if (it == orow.end()) continue;
      Rational f = -it->second;
      axpy(orow, f, row);
    }
    pivots.emplace(pc, std::move(row));
  }
  return pivots;
}

}  // namespace

std::size_t rank(const SparseMatrix& m) { return rref(m).size(); }

std::vector<SparseRow> nullspace(const SparseMatrix& m) {
  const auto pivots = rref(m);
  std::vector<SparseRow> basis;
  for (std::size_t free = 0; free < m.columns; ++free) {
    if (pivots.count(free)) continue;
    SparseRow v;
    v.emplace(free, Rational(1));
    for (const auto& [pc, prow] : pivots) {
      auto it = prow.find(free);
      if (it != prow.end()) v.emplace(pc, -it->second);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace sq::grassmann
