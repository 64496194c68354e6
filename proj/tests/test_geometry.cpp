#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pivotlab/errors.hpp"
#include "pivotlab/geometry.hpp"

using namespace pivotlab;

namespace {

Point pt(std::initializer_list<long> c) {
  Point p;
  for (long x : c) p.coords.emplace_back(x);
  return p;
}

std::size_t idx(const PointSet& ps, int i, int j, int k) { return *ps.find(PointId{i, j, k}); }

Transversal make(const PointSet& ps, std::initializer_list<PointId> ids) {
  std::vector<std::size_t> members;
  for (const auto& id : ids) members.push_back(*ps.find(id));
  return Transversal::make(ps, members);
}

bool pierced(std::initializer_list<Point> pts, int dim) {
  std::vector<Point> own(pts);
  std::vector<const Point*> ptrs;
  for (const auto& p : own) ptrs.push_back(&p);
  return is_pierced_subset(ptrs, dim);
}

}  // namespace

TEST_CASE("point coordinates") {
  CHECK(make_point(3, 4, {1, 3, 2}) == pt({2, 0, 0}));
  CHECK(make_point(3, 4, {1, 1, 1}) == pt({1097, -1024, -64}));
  CHECK(make_point(2, 2, {1, 1, 2}) == pt({12, -8}));
  CHECK(make_point(2, 3, {2, 2, 3}) == pt({0, 3}));
  const std::vector<std::int64_t> alphas{5, 6};
  CHECK(make_point(2, 3, {2, 2, 4}, alphas) == pt({0, 6}));
  CHECK_THROWS(make_point(2, 3, {2, 1, 1}));
  CHECK_THROWS(make_point(2, 3, {1, 1, 4}));
}

TEST_CASE("point sets") {
  const auto a = PointSet::construction(3, 4);
  CHECK(a.size() == 24);
  for (std::size_t q = 0; q < a.size(); ++q)
    if (a.id(q).layer <= 2) CHECK(a.point(q).coords[2] == -64);
  CHECK(a.transversal_count() == 12 * 8 * 4);

  const auto line = PointSet::construction(1, 5);
  REQUIRE(line.size() == 5);
  for (int k = 1; k <= 5; ++k) CHECK(line.point(idx(line, 1, 1, k)) == pt({k}));

  const std::vector<std::int64_t> ok{5, 5, 6};
  const auto aug = a.augmented(ok);
  CHECK(aug.size() == 27);
  CHECK(aug.point(idx(aug, 3, 3, 5)) == pt({0, 0, 6}));
  const std::vector<std::int64_t> low{3, 5, 5}, equal{4, 5, 5};
  CHECK_THROWS_AS(a.augmented(low), PreconditionError);
  CHECK_THROWS_AS(a.augmented(equal), PreconditionError);
}

TEST_CASE("pierced subsets") {
  CHECK(pierced({pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})}, 3));
  CHECK_FALSE(pierced({pt({1, 0}), pt({2, 0})}, 2));
  CHECK_FALSE(pierced({pt({1, 0})}, 2));
  CHECK(pierced({pt({1, 1})}, 2));
  const auto a = PointSet::construction(2, 3);
  for (const auto& s : all_transversals(a)) {
    std::vector<const Point*> pts;
    for (auto q : s.members()) pts.push_back(&a.point(q));
    CHECK(is_pierced_subset(pts, 2));
  }
}

TEST_CASE("axis intersections") {
  const auto a = PointSet::construction(2, 2);
  const auto axes = Transversal::axis_start(a, 2);
  CHECK(axes.t()[0] == 2);
  CHECK(axes.t()[1] == 2);

  const auto s = make(a, {{1, 1, 1}, {2, 2, 1}});
  CHECK(s.t()[0] == Rational(11, 9));
  CHECK(s.t()[1] == 1);
  CHECK(s.normal()[0] == Rational(9, 11));
  CHECK(a.point(s.member(2)) == pt({0, 1}));

  CHECK_THROWS_AS(make(a, {{2, 2, 1}, {1, 1, 1}}), PreconditionError);
}

TEST_CASE("side_of and below sets") {
  const auto a = PointSet::construction(2, 2);
  const auto s = Transversal::axis_start(a, 2);
  CHECK(side_of(s, pt({1, 0})) == Side::below);
  CHECK(side_of(s, pt({2, 0})) == Side::on);
  CHECK(side_of(s, pt({11, -8})) == Side::above);

  const auto below = below_set(a, s);
  CHECK(below == std::vector<std::size_t>{idx(a, 1, 2, 1), idx(a, 2, 2, 1)});

  const auto s2 = make(a, {{1, 2, 2}, {2, 2, 1}});
  const auto b2 = below_set(a, s2);
  CHECK(std::count(b2.begin(), b2.end(), idx(a, 1, 1, 1)) == 1);
  CHECK(std::count(b2.begin(), b2.end(), idx(a, 1, 1, 2)) == 1);

  const auto line = PointSet::construction(1, 4);
  CHECK(below_set(line, Transversal::axis_start(line, 3)) ==
        std::vector<std::size_t>{idx(line, 1, 1, 1), idx(line, 1, 1, 2)});
}

TEST_CASE("ties off the adversary hyperplanes are errors") {
  // (1,0) lies on the line through (2,0) and (0,2) shifted onto it.
  const auto ps = PointSet::custom(2, 2, 2, {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}},
                                   {pt({1, 1}), pt({2, 0}), pt({0, 2})});
  const auto s = make(ps, {{1, 2, 1}, {2, 2, 1}});
  CHECK_THROWS_AS(below_set(ps, s), DegeneracyError);

  const auto aug = PointSet::construction(2, 3).augmented(std::vector<std::int64_t>{4, 4});
  const auto start = Transversal::axis_start(aug, 4);
  CHECK(side_of(start, aug.point(idx(aug, 1, 1, 1))) == Side::on);
  const auto below = below_set(aug, start);
  CHECK(below.size() == 6);
}

TEST_CASE("pivots") {
  const auto a = PointSet::construction(2, 2);
  const auto s = Transversal::axis_start(a, 2);
  const auto s1 = pivot(a, s, idx(a, 1, 2, 1));
  CHECK(s1 == make(a, {{1, 2, 1}, {2, 2, 2}}));
  const auto s2 = pivot(a, s, idx(a, 2, 2, 1));
  CHECK(s2 == make(a, {{1, 2, 2}, {2, 2, 1}}));
  CHECK(s2.t()[0] == 2);
  CHECK(s2.t()[1] == 1);
  CHECK(pivot(a, s, idx(a, 2, 2, 1), PivotMethod::facet_search) == s2);
  CHECK_THROWS_AS(pivot(a, s, idx(a, 1, 1, 1)), PreconditionError);

  const auto b = PointSet::construction(2, 4);
  for (const auto& t : all_transversals(b))
    for (auto p : below_set(b, t)) {
      const auto next = pivot_color_swap(b, t, p);
      auto swapped = std::vector<std::size_t>(next.members().begin(), next.members().end());
      std::sort(swapped.begin(), swapped.end());
      CHECK(pivot_facet_search(b, t, p) == swapped);
      CHECK(next.t_sum() < t.t_sum());
    }
}

TEST_CASE("deep projection") {
  const auto b = PointSet::project_deep(2, 3, 1);
  REQUIRE(b.size() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(b.point(idx(b, 1, 1, k)) == pt({30 + k}));
  CHECK(b.deep_source() == 2);
  CHECK(PointSet::project_deep(4, 3, 2).size() == 9);
  CHECK_THROWS_AS(PointSet::project_deep(2, 3, 2), PreconditionError);
  CHECK_THROWS_AS(PointSet::project_deep(3, 2, 2), PreconditionError);
}

TEST_CASE("custom sets reject duplicates") {
  CHECK_THROWS_AS(PointSet::custom(1, 2, 1, {{1, 1, 1}, {1, 1, 2}}, {pt({1}), pt({1})}),
                  PreconditionError);
}
