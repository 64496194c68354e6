#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pivotlab/exact_linalg.hpp"

using namespace pivotlab;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  RationalMatrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = Rational(rows[i][j]);
  return a;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(rank(from_rows({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(from_rows({{1, 0}, {0, 1}})) == 2);
  CHECK(rank(from_rows({{0, 0, 0}})) == 0);
  CHECK(rank(RationalMatrix(0, 3)) == 0);
}

TEST_CASE("solve_unique on square, tall and singular systems") {
  auto x = solve_unique(from_rows({{2, 1}, {1, 3}}), {Rational(3), Rational(5)});
  REQUIRE(x);
  CHECK((*x)[0] == Rational(4, 5));
  CHECK((*x)[1] == Rational(7, 5));

  auto tall = solve_unique(from_rows({{1, 0}, {0, 1}, {1, 1}}), {Rational(1), Rational(2), Rational(3)});
  REQUIRE(tall);
  CHECK((*tall)[1] == 2);

  CHECK_FALSE(solve_unique(from_rows({{1, 0}, {0, 1}, {1, 1}}),
                           {Rational(1), Rational(2), Rational(4)}));
  CHECK_FALSE(solve_unique(from_rows({{1, 2}, {2, 4}}), {Rational(1), Rational(2)}));
}

TEST_CASE("null space and determinant") {
  const auto ns = null_space(from_rows({{1, 1, 0}, {0, 1, 1}}));
  REQUIRE(ns.size() == 1);
  const auto& v = ns[0];
  CHECK(v[0] - v[1] + v[2] == v[0] + v[2] - v[1]);
  CHECK(v[0] + v[1] == 0);
  CHECK(v[1] + v[2] == 0);
  CHECK(null_space(RationalMatrix(0, 1)).size() == 1);

  CHECK(determinant(from_rows({{11, 0}, {-8, 1}})) == 11);
  CHECK(determinant(from_rows({{1, 2}, {2, 4}})) == 0);
  CHECK(determinant(from_rows({{0, 1}, {1, 0}})) == -1);
}

TEST_CASE("transpose") {
  const auto t = from_rows({{1, 2, 3}}).transposed();
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == 3);
}
