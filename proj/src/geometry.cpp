#include "pivotlab/geometry.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "pivotlab/errors.hpp"
#include "pivotlab/exact_linalg.hpp"

namespace pivotlab {

namespace {

Integer ipow(int base, int exp) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return z;
}

std::string describe(const PointId& id) {
  return "(" + std::to_string(id.color) + "," + std::to_string(id.layer) + "," +
         std::to_string(id.phase) + ")";
}

}  // namespace

Point make_point(int r, int m, const PointId& id, std::span<const std::int64_t> alphas) {
  if (r < 1 || m < 1) throw PreconditionError("point set needs r >= 1 and m >= 1");
  const auto [i, j, k] = id;
  if (i < 1 || i > j || j > r || k < 1 || k > m + 1)
    throw PreconditionError("invalid point id " + describe(id));
  Point p;
  p.coords.assign(static_cast<std::size_t>(r), Integer(0));
  if (k == m + 1) {
    if (j != r) throw PreconditionError("adversary points live in the top layer");
    if (alphas.size() != static_cast<std::size_t>(r))
      throw PreconditionError("adversary point requested without alphas");
    const std::int64_t a = alphas[static_cast<std::size_t>(i - 1)];
    if (a < m) throw PreconditionError("adversary alpha must be at least m");
    p.coords[static_cast<std::size_t>(i - 1)] = Integer(std::to_string(a));
    return p;
  }
  // Leading entry: m^3 + m^5 + ... + m^(2(r-j)+1) + (r-j) m + k; then the
  // tail -m^(2(r-j)+1), ..., -m^3 in positions j+1..r.
  Integer lead = (r - j) * m + k;
  for (int e = 3; e <= 2 * (r - j) + 1; e += 2) lead += ipow(m, e);
  p.coords[static_cast<std::size_t>(i - 1)] = lead;
  for (int pos = j + 1; pos <= r; ++pos) {
    const int e = 2 * (r - pos) + 3;
    p.coords[static_cast<std::size_t>(pos - 1)] = -ipow(m, e);
  }
  return p;
}

// ---------------------------------------------------------------------------
// PointSet

PointSet PointSet::construction(int r, int m) {
  if (r < 1 || m < 1) throw PreconditionError("point set needs r >= 1 and m >= 1");
  PointSet ps;
  ps.dim_ = r;
  ps.m_ = m;
  ps.top_layer_ = r;
  for (int i = 1; i <= r; ++i)
    for (int j = i; j <= r; ++j)
      for (int k = 1; k <= m; ++k) {
        ps.ids_.push_back({i, j, k});
        ps.points_.push_back(make_point(r, m, {i, j, k}));
      }
  ps.index();
  return ps;
}

PointSet PointSet::project_deep(int big_r, int m, int r) {
  if (r < 1 || big_r <= r) throw PreconditionError("projection needs R > r >= 1");
  if (m < 3) throw PreconditionError("projection needs m >= 3");
  PointSet ps;
  ps.dim_ = r;
  ps.m_ = m;
  ps.top_layer_ = r;
  ps.deep_source_ = big_r;
  for (int i = 1; i <= r; ++i)
    for (int j = i; j <= r; ++j)
      for (int k = 1; k <= m; ++k) {
        Point full = make_point(big_r, m, {i, j, k});
        full.coords.resize(static_cast<std::size_t>(r));
        ps.ids_.push_back({i, j, k});
        ps.points_.push_back(std::move(full));
      }
  ps.index();
  return ps;
}

PointSet PointSet::custom(int dim, int m, int top_layer, std::vector<PointId> ids,
                          std::vector<Point> points) {
  if (ids.size() != points.size()) throw PreconditionError("ids and points differ in length");
  PointSet ps;
  ps.dim_ = dim;
  ps.m_ = m;
  ps.top_layer_ = top_layer;
  ps.ids_ = std::move(ids);
  ps.points_ = std::move(points);
  ps.index();
  return ps;
}

PointSet PointSet::augmented(std::span<const std::int64_t> alphas) const {
  if (is_augmented()) throw PreconditionError("point set is already augmented");
  if (alphas.size() != static_cast<std::size_t>(dim_))
    throw PreconditionError("need one alpha per coordinate axis");
  for (auto a : alphas) {
    if (a < m_) throw PreconditionError("adversary alpha must be at least m");
    if (a == m_)
      throw PreconditionError("adversary alpha = m coincides with an existing top-layer point");
  }
  PointSet ps = *this;
  ps.alphas_.assign(alphas.begin(), alphas.end());
  for (int i = 1; i <= dim_; ++i) {
    Point p;
    p.coords.assign(static_cast<std::size_t>(dim_), Integer(0));
    p.coords[static_cast<std::size_t>(i - 1)] =
        Integer(std::to_string(alphas[static_cast<std::size_t>(i - 1)]));
    ps.ids_.push_back({i, top_layer_, m_ + 1});
    ps.points_.push_back(std::move(p));
  }
  // Keep (color, layer, phase) order.
  std::vector<std::size_t> perm(ps.ids_.size());
  for (std::size_t q = 0; q < perm.size(); ++q) perm[q] = q;
  std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return ps.ids_[a] < ps.ids_[b]; });
  std::vector<PointId> ids;
  std::vector<Point> pts;
  for (auto q : perm) {
    ids.push_back(ps.ids_[q]);
    pts.push_back(ps.points_[q]);
  }
  ps.ids_ = std::move(ids);
  ps.points_ = std::move(pts);
  ps.index();
  return ps;
}

void PointSet::index() {
  by_id_.clear();
  color_classes_.assign(static_cast<std::size_t>(dim_), {});
  std::set<std::vector<Integer>> seen;
  for (std::size_t q = 0; q < ids_.size(); ++q) {
    const PointId& id = ids_[q];
    if (points_[q].coords.size() != static_cast<std::size_t>(dim_))
      throw PreconditionError("point dimension mismatch");
    if (id.color < 1 || id.color > dim_) throw PreconditionError("point color out of range");
    if (!by_id_.emplace(id, q).second) throw PreconditionError("duplicate point id");
    if (!seen.insert(points_[q].coords).second)
      throw PreconditionError("duplicate point coordinates at " + describe(id));
    color_classes_[static_cast<std::size_t>(id.color - 1)].push_back(q);
  }
}

std::optional<std::size_t> PointSet::find(const PointId& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t PointSet::transversal_count() const {
  std::uint64_t n = 1;
  for (const auto& c : color_classes_) n *= c.size();
  return n;
}

// ---------------------------------------------------------------------------
// Predicates

bool is_pierced_subset(std::span<const Point* const> points, int dim) {
  const std::size_t k = points.size();
  if (k == 0) return false;
  if (k > 20) throw PreconditionError("pierced test limited to 20 points");
  const auto rows = static_cast<std::size_t>(dim) + 1;
  // A vertex of the feasible region has linearly independent support columns
  // together with the (free) mu column.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < k; ++q)
      if (mask >> q & 1u) support.push_back(q);
    const std::size_t cols = support.size() + 1;
    if (cols > rows) continue;
    RationalMatrix a(rows, cols);
    for (std::size_t s = 0; s < support.size(); ++s) {
      const Point& p = *points[support[s]];
      for (std::size_t c = 0; c < static_cast<std::size_t>(dim); ++c) a(c, s) = p.coords[c];
      a(static_cast<std::size_t>(dim), s) = 1;
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(dim); ++c) a(c, cols - 1) = -1;
    std::vector<Rational> b(rows, Rational(0));
    b.back() = 1;
    const auto sol = solve_unique(std::move(a), std::move(b));
    if (!sol) continue;
    if (std::all_of(sol->begin(), sol->end() - 1, [](const Rational& x) { return sgn(x) >= 0; }))
      return true;
  }
  return false;
}

namespace {

RationalMatrix column_matrix(std::span<const Point* const> by_color, int dim) {
  const auto n = static_cast<std::size_t>(dim);
  if (by_color.size() != n) throw PreconditionError("need exactly one point per color");
  RationalMatrix b(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < n; ++row) b(row, col) = by_color[col]->coords[row];
  return b;
}

}  // namespace

AxisIntersections axis_intersections(std::span<const Point* const> by_color, int dim) {
  const RationalMatrix b = column_matrix(by_color, dim);
  const auto n = static_cast<std::size_t>(dim);
  AxisIntersections res;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> e(n, Rational(0));
    e[i] = 1;
    auto lambda = solve_unique(b, std::move(e));
    if (!lambda) throw DegeneracyError("transversal matrix is singular");
    Rational total = 0;
    for (const auto& x : *lambda) total += x;
    if (sgn(total) <= 0)
      throw DegeneracyError("transversal does not meet coordinate axis " +
                            std::to_string(i + 1) + " on the positive side");
    const Rational t = 1 / total;
    for (auto& x : *lambda) x *= t;
    res.t.push_back(t);
    res.weights.push_back(std::move(*lambda));
  }
  return res;
}

std::vector<Rational> hyperplane_normal(std::span<const Point* const> by_color, int dim) {
  const RationalMatrix bt = column_matrix(by_color, dim).transposed();
  auto w = solve_unique(bt, std::vector<Rational>(static_cast<std::size_t>(dim), Rational(1)));
  if (!w) throw DegeneracyError("transversal matrix is singular");
  return std::move(*w);
}

// ---------------------------------------------------------------------------
// Transversal

Transversal Transversal::make(const PointSet& ps, std::vector<std::size_t> members) {
  const int dim = ps.dimension();
  if (members.size() != static_cast<std::size_t>(dim))
    throw PreconditionError("transversal needs one point per color");
  std::vector<const Point*> pts;
  for (int c = 1; c <= dim; ++c) {
    const std::size_t idx = members[static_cast<std::size_t>(c - 1)];
    if (idx >= ps.size() || ps.id(idx).color != c)
      throw PreconditionError("transversal member " + std::to_string(c) + " has the wrong color");
    pts.push_back(&ps.point(idx));
  }
  AxisIntersections ax = axis_intersections(pts, dim);
  for (std::size_t i = 0; i < ax.t.size(); ++i)
    for (const auto& w : ax.weights[i])
      if (sgn(w) < 0)
        throw DegeneracyError("axis point t_" + std::to_string(i + 1) +
                              " e_i lies outside the transversal's hull");
  Transversal s;
  s.members_ = std::move(members);
  s.t_ = std::move(ax.t);
  s.normal_.reserve(s.t_.size());
  for (const auto& t : s.t_) s.normal_.push_back(1 / t);
  return s;
}

Transversal Transversal::axis_start(const PointSet& ps, int phase) {
  std::vector<std::size_t> members;
  for (int c = 1; c <= ps.dimension(); ++c) {
    const auto idx = ps.find({c, ps.top_layer(), phase});
    if (!idx) throw PreconditionError("no top-layer point of phase " + std::to_string(phase));
    members.push_back(*idx);
  }
  return make(ps, std::move(members));
}

Rational Transversal::t_sum() const {
  Rational s = 0;
  for (const auto& t : t_) s += t;
  return s;
}

bool Transversal::contains(std::size_t idx) const {
  return std::find(members_.begin(), members_.end(), idx) != members_.end();
}

Side side_of(const Transversal& s, const Point& x) {
  const auto normal = s.normal();
  if (x.coords.size() != normal.size()) throw PreconditionError("point dimension mismatch");
  Rational v = -1;
  for (std::size_t i = 0; i < normal.size(); ++i) v += normal[i] * x.coords[i];
  const int sg = sgn(v);
  return sg < 0 ? Side::below : (sg > 0 ? Side::above : Side::on);
}

std::vector<std::size_t> below_set(const PointSet& ps, const Transversal& s) {
  std::vector<std::size_t> out;
  const bool adversary = std::any_of(s.members().begin(), s.members().end(),
                                     [&](auto q) { return ps.id(q).phase > ps.m(); });
  for (std::size_t q = 0; q < ps.size(); ++q) {
    if (s.contains(q)) continue;
    const Side side = side_of(s, ps.point(q));
    if (side == Side::on && !adversary)
      throw DegeneracyError("general position violated: point " + describe(ps.id(q)) +
                            " lies on the hyperplane of the current position");
    if (side == Side::below) out.push_back(q);
  }
  return out;
}

std::vector<std::size_t> pivot_facet_search(const PointSet& ps, const Transversal& s,
                                            std::size_t p) {
  const auto members = s.members();
  std::vector<std::vector<std::size_t>> pierced;
  for (std::size_t drop = 0; drop < members.size(); ++drop) {
    std::vector<std::size_t> facet;
    for (std::size_t q = 0; q < members.size(); ++q)
      if (q != drop) facet.push_back(members[q]);
    facet.push_back(p);
    std::vector<const Point*> pts;
    for (auto idx : facet) pts.push_back(&ps.point(idx));
    if (is_pierced_subset(pts, ps.dimension())) {
      std::sort(facet.begin(), facet.end());
      pierced.push_back(std::move(facet));
    }
  }
  if (pierced.size() != 1)
    throw DegeneracyError("expected exactly one pierced facet besides the current position, found " +
                          std::to_string(pierced.size()));
  return pierced.front();
}

Transversal pivot_color_swap(const PointSet& ps, const Transversal& s, std::size_t p) {
  std::vector<std::size_t> members(s.members().begin(), s.members().end());
  members[static_cast<std::size_t>(ps.id(p).color - 1)] = p;
  return Transversal::make(ps, std::move(members));
}

Transversal pivot(const PointSet& ps, const Transversal& s, std::size_t p, PivotMethod method) {
  if (p >= ps.size()) throw PreconditionError("pivot index out of range");
  if (s.contains(p) || side_of(s, ps.point(p)) != Side::below)
    throw PreconditionError("pivot point " + describe(ps.id(p)) +
                            " is not strictly below the current position");
  if (method == PivotMethod::color_swap) return pivot_color_swap(ps, s, p);

  const auto facet = pivot_facet_search(ps, s, p);
  std::vector<std::size_t> members(static_cast<std::size_t>(ps.dimension()), ps.size());
  for (auto idx : facet) {
    auto& slot = members[static_cast<std::size_t>(ps.id(idx).color - 1)];
    if (slot != ps.size()) throw DegeneracyError("pierced facet repeats a color");
    slot = idx;
  }
  return Transversal::make(ps, std::move(members));
}

std::vector<Transversal> all_transversals(const PointSet& ps) {
  const int dim = ps.dimension();
  std::vector<Transversal> out;
  std::vector<std::size_t> cursor(static_cast<std::size_t>(dim), 0);
  for (int c = 1; c <= dim; ++c)
    if (ps.color_class(c).empty()) return out;
  for (;;) {
    std::vector<std::size_t> members;
    for (int c = 1; c <= dim; ++c)
      members.push_back(ps.color_class(c)[cursor[static_cast<std::size_t>(c - 1)]]);
    out.push_back(Transversal::make(ps, std::move(members)));
    int c = dim;
    for (; c >= 1; --c) {
      auto& pos = cursor[static_cast<std::size_t>(c - 1)];
      if (++pos < ps.color_class(c).size()) break;
      pos = 0;
    }
    if (c == 0) break;
  }
  return out;
}

}  // namespace pivotlab
