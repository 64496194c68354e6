#include "pivotlab/exact_linalg.hpp"

#include <utility>

#include "pivotlab/errors.hpp"

namespace pivotlab {

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

namespace {

// Reduces a (and the optional right-hand side) to reduced row echelon form.
// Returns the pivot column of each pivot row.
std::vector<std::size_t> reduce(RationalMatrix& a, std::vector<Rational>* b) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && sgn(a(sel, col)) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
      if (b) std::swap((*b)[sel], (*b)[row]);
    }
    const Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    if (b) (*b)[row] *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || sgn(a(i, col)) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
      if (b) (*b)[i] -= f * (*b)[row];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(RationalMatrix a) { return reduce(a, nullptr).size(); }

std::optional<std::vector<Rational>> solve_unique(RationalMatrix a,
                                                  std::vector<Rational> b) {
  if (b.size() != a.rows())
    throw PreconditionError("solve_unique: right-hand side size mismatch");
  const auto pivots = reduce(a, &b);
  if (pivots.size() < a.cols()) return std::nullopt;
  for (std::size_t i = pivots.size(); i < a.rows(); ++i)
    if (sgn(b[i]) != 0) return std::nullopt;
  std::vector<Rational> x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i];
  return x;
}

std::vector<std::vector<Rational>> null_space(RationalMatrix a) {
  const auto pivots = reduce(a, nullptr);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(a.cols());
    x[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -a(i, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

Rational determinant(RationalMatrix a) {
  if (a.rows() != a.cols()) throw PreconditionError("determinant: matrix not square");
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && sgn(a(sel, col)) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(sel, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (sgn(a(i, col)) == 0) continue;
      const Rational f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace pivotlab
