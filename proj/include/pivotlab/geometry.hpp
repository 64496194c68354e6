#pragma once

// Exact point-set geometry for the "one line and n points" pivoting process:
// the construction A(r, m) with optional adversary points on the axes, its
// projection onto lower layers, and the pierced / below / pivot predicates
// relative to the requirement line R * (1, ..., 1).

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pivotlab/rational.hpp"

namespace pivotlab {

// Color i, layer j, phase k. Construction points have 1 <= i <= j <= r and
// 1 <= k <= m; adversary points have layer r and phase m + 1.
struct PointId {
  int color = 1;
  int layer = 1;
  int phase = 1;

  auto operator<=>(const PointId&) const = default;
};

struct Point {
  std::vector<Integer> coords;

  bool operator==(const Point&) const = default;
};

// Coordinates of a_{i,j,k} in A(r, m); for phase m + 1 the adversary point
// alpha_i * e_i, which needs alphas[i-1].
Point make_point(int r, int m, const PointId& id, std::span<const std::int64_t> alphas = {});

class PointSet {
 public:
  // A(r, m), ordered by (color, layer, phase).
  static PointSet construction(int r, int m);
  // Points of A(big_r, m) in layers 1..r, truncated to their first r
  // coordinates; labels are kept.
  static PointSet project_deep(int big_r, int m, int r);
  // Arbitrary labelled points (used for fault injection); top_layer is the
  // layer whose points lie on the coordinate axes.
  static PointSet custom(int dim, int m, int top_layer, std::vector<PointId> ids,
                         std::vector<Point> points);

  // Adds alpha_i * e_i with color i, layer r, phase m + 1. Each alpha must be
  // at least m + 1: alpha = m would coincide with a_{i,r,m}.
  PointSet augmented(std::span<const std::int64_t> alphas) const;

  int dimension() const noexcept { return dim_; }
  int m() const noexcept { return m_; }
  int top_layer() const noexcept { return top_layer_; }
  // A(big_r, m) for projected sets, 0 otherwise.
  int deep_source() const noexcept { return deep_source_; }
  std::span<const std::int64_t> alphas() const noexcept { return alphas_; }
  bool is_augmented() const noexcept { return !alphas_.empty(); }

  std::size_t size() const noexcept { return points_.size(); }
  const PointId& id(std::size_t idx) const { return ids_.at(idx); }
  const Point& point(std::size_t idx) const { return points_.at(idx); }
  std::optional<std::size_t> find(const PointId& id) const;

  // Indices of all points of color c, ascending.
  const std::vector<std::size_t>& color_class(int c) const {
    return color_classes_.at(static_cast<std::size_t>(c - 1));
  }
  // Product of the color class sizes (number of transversals).
  std::uint64_t transversal_count() const;

 private:
  PointSet() = default;
  void index();

  int dim_ = 0;
  int m_ = 0;
  int top_layer_ = 0;
  int deep_source_ = 0;
  std::vector<std::int64_t> alphas_;
  std::vector<PointId> ids_;
  std::vector<Point> points_;
  std::map<PointId, std::size_t> by_id_;
  std::vector<std::vector<std::size_t>> color_classes_;
};

// Whether conv(points) meets the line R * 1_dim, decided exactly by
// enumerating basic solutions of
//   sum lambda_x x = mu 1,  sum lambda_x = 1,  lambda >= 0.
bool is_pierced_subset(std::span<const Point* const> points, int dim);

struct AxisIntersections {
  // t[i] with t[i] e_i = B * weights[i], B the matrix whose columns are the
  // transversal points ordered by color; weights sum to 1.
  std::vector<Rational> t;
  std::vector<std::vector<Rational>> weights;
};

// Solves B lambda = e_i for each axis and rescales. Throws DegeneracyError if
// B is singular or the weights do not sum to a positive value.
AxisIntersections axis_intersections(std::span<const Point* const> by_color, int dim);

// Normal w with w . x = 1 for every point, from B^T w = 1 (so w_i = 1 / t_i).
// Independent route to the hyperplane used to cross-check axis_intersections.
std::vector<Rational> hyperplane_normal(std::span<const Point* const> by_color, int dim);

// A pierced simplex with one point per color. Identity is the member list;
// axis intersections are derived.
class Transversal {
 public:
  // members[c-1] is the index of the point of color c. Throws
  // PreconditionError on a color mismatch and DegeneracyError when the
  // points are not a non-degenerate pierced simplex with positive t.
  static Transversal make(const PointSet& ps, std::vector<std::size_t> members);
  // The points {alpha_i e_i} (augmented sets) or {layer-top, phase-k e_i}.
  static Transversal axis_start(const PointSet& ps, int phase);

  std::span<const std::size_t> members() const noexcept { return members_; }
  std::size_t member(int color) const { return members_.at(static_cast<std::size_t>(color - 1)); }
  std::span<const Rational> t() const noexcept { return t_; }
  // Componentwise 1 / t.
  std::span<const Rational> normal() const noexcept { return normal_; }
  Rational t_sum() const;

  bool contains(std::size_t idx) const;

  bool operator==(const Transversal& o) const { return members_ == o.members_; }

 private:
  std::vector<std::size_t> members_;
  std::vector<Rational> t_;
  std::vector<Rational> normal_;
};

enum class Side { below = -1, on = 0, above = 1 };

// Sign of sum x_i / t_i - 1.
Side side_of(const Transversal& s, const Point& x);

// Indices of all points strictly below s, ascending. Throws DegeneracyError
// when a non-member lies on the hyperplane of s, unless s contains an
// adversary point: equal alphas put points of lower layers on such
// hyperplanes, and those points are then simply not below.
std::vector<std::size_t> below_set(const PointSet& ps, const Transversal& s);

enum class PivotMethod { color_swap, facet_search };

// Facet of conv(s + p) other than s that is pierced by the requirement line.
std::vector<std::size_t> pivot_facet_search(const PointSet& ps, const Transversal& s,
                                            std::size_t p);
// Replaces the member with color(p) by p.
Transversal pivot_color_swap(const PointSet& ps, const Transversal& s, std::size_t p);

// Requires p strictly below s (PreconditionError otherwise).
Transversal pivot(const PointSet& ps, const Transversal& s, std::size_t p,
                  PivotMethod method = PivotMethod::color_swap);

// All transversals, in lexicographic order of member indices.
std::vector<Transversal> all_transversals(const PointSet& ps);

}  // namespace pivotlab
