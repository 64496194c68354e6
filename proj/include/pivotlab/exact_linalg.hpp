#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pivotlab/rational.hpp"

namespace pivotlab {

// Dense row-major matrix over the rationals. Sizes here are tiny (at most a
// handful of rows), so no attempt is made at fraction-free elimination.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Rank via exact Gaussian elimination.
std::size_t rank(RationalMatrix a);

// Unique solution x of a*x = b, or nullopt when the columns of a are
// linearly dependent or the system is inconsistent. a may be tall.
std::optional<std::vector<Rational>> solve_unique(RationalMatrix a,
                                                  std::vector<Rational> b);

// Basis of the right null space {x : a*x = 0}.
std::vector<std::vector<Rational>> null_space(RationalMatrix a);

// Determinant of a square matrix.
Rational determinant(RationalMatrix a);

}  // namespace pivotlab
