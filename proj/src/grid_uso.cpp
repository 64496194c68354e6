#include "pivotlab/grid_uso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pivotlab/errors.hpp"

namespace pivotlab {

long GridSpec::size() const noexcept {
  return std::accumulate(factor_sizes.begin(), factor_sizes.end(), 0L);
}

std::uint64_t GridSpec::vertex_count() const noexcept {
  std::uint64_t n = 1;
  for (int f : factor_sizes) n *= static_cast<std::uint64_t>(f);
  return n;
}

std::uint64_t vertex_index(const GridSpec& spec, const GridVertex& v) {
  if (v.coords.size() != spec.factor_sizes.size())
    throw PreconditionError("vertex dimension does not match grid");
  std::uint64_t index = 0;
  for (std::size_t c = spec.factor_sizes.size(); c-- > 0;) {
    const int x = v.coords[c];
    if (x < 1 || x > spec.factor_sizes[c])
      throw PreconditionError("vertex coordinate out of range");
    index = index * static_cast<std::uint64_t>(spec.factor_sizes[c]) +
            static_cast<std::uint64_t>(x - 1);
  }
  return index;
}

GridVertex vertex_at(const GridSpec& spec, std::uint64_t index) {
  GridVertex v;
  v.coords.resize(spec.factor_sizes.size());
  for (std::size_t c = 0; c < spec.factor_sizes.size(); ++c) {
    const auto f = static_cast<std::uint64_t>(spec.factor_sizes[c]);
    v.coords[c] = static_cast<int>(index % f) + 1;
    index /= f;
  }
  return v;
}

// ---------------------------------------------------------------------------
// CombOrientation

CombOrientation::CombOrientation(int m) : dimension_(0), m_(m) {
  if (m < 1) throw PreconditionError("comb factor size must be at least 1");
}

CombOrientation::CombOrientation(int m, std::vector<int> ranks,
                                 std::vector<CombOrientation> children)
    : m_(m), ranks_(std::move(ranks)), children_(std::move(children)) {
  if (m < 1) throw PreconditionError("comb factor size must be at least 1");
  if (ranks_.size() != static_cast<std::size_t>(m) ||
      children_.size() != static_cast<std::size_t>(m))
    throw PreconditionError("comb level needs m ranks and m children");
  std::vector<int> sorted = ranks_;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < m; ++i)
    if (sorted[static_cast<std::size_t>(i)] != i + 1)
      throw PreconditionError("comb ranks are not a permutation of 1..m");
  const int child_dim = children_.front().dimension();
  for (const auto& c : children_)
    if (c.dimension() != child_dim || c.factor_size() != m)
      throw PreconditionError("comb children disagree in shape");
  dimension_ = child_dim + 1;
}

GridSpec CombOrientation::spec() const {
  return GridSpec{std::vector<int>(static_cast<std::size_t>(dimension_), m_)};
}

const CombOrientation& CombOrientation::child(int value) const {
  if (dimension_ == 0) throw PreconditionError("leaf comb has no children");
  return children_.at(static_cast<std::size_t>(value - 1));
}

CombOrientation identity_comb(int r, int m) {
  if (r < 0) throw PreconditionError("comb dimension must be nonnegative");
  if (r == 0) return CombOrientation(m);
  std::vector<int> ranks(static_cast<std::size_t>(m));
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<CombOrientation> children(static_cast<std::size_t>(m), identity_comb(r - 1, m));
  return CombOrientation(m, std::move(ranks), std::move(children));
}

CombOrientation build_comb(int r, int m, Rng& rng) {
  if (r < 0) throw PreconditionError("comb dimension must be nonnegative");
  if (r == 0) return CombOrientation(m);
  std::vector<int> ranks(static_cast<std::size_t>(m));
  std::iota(ranks.begin(), ranks.end(), 1);
  rng.shuffle(ranks);
  std::vector<CombOrientation> children;
  children.reserve(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) children.push_back(build_comb(r - 1, m, rng));
  return CombOrientation(m, std::move(ranks), std::move(children));
}

namespace {

void check_vertex(const CombOrientation& comb, const GridVertex& v) {
  if (static_cast<int>(v.coords.size()) != comb.dimension())
    throw PreconditionError("vertex dimension does not match comb");
  for (int x : v.coords)
    if (x < 1 || x > comb.factor_size())
      throw PreconditionError("vertex coordinate out of range");
}

// Out-neighbors of vertex index v, appended to out.
void comb_out(const CombOrientation& comb, std::uint64_t v,
              std::vector<std::uint64_t>& out) {
  const int r = comb.dimension();
  const auto m = static_cast<std::uint64_t>(comb.factor_size());
  std::uint64_t stride = 1;
  for (int c = 1; c < r; ++c) stride *= m;
  const CombOrientation* node = &comb;
  for (int level = r; level >= 1; --level) {
    const int w = static_cast<int>((v / stride) % m) + 1;
    const int rank_w = node->rank_of(w);
    for (int x = 1; x <= comb.factor_size(); ++x) {
      if (x != w && node->rank_of(x) < rank_w) {
        out.push_back(v - static_cast<std::uint64_t>(w - 1) * stride +
                      static_cast<std::uint64_t>(x - 1) * stride);
      }
    }
    node = &node->child(w);
    stride /= m;
  }
}

std::uint64_t terminal_multiplicity(const AugmentedConfig& cfg, std::size_t outdeg) {
  if (!cfg.augmented) return 0;
  if (cfg.delta == 0) return outdeg == 0 ? 1 : 0;
  return cfg.delta;
}

template <typename OutFn>
WalkOutcome walk_impl(const GridSpec& spec, OutFn&& out_of, const AugmentedConfig& cfg,
                      const WalkStart& start, Rng& rng, const WalkOptions& opts) {
  const std::uint64_t n = spec.vertex_count();
  std::uint64_t v = std::holds_alternative<UniformStart>(start)
                        ? rng.below(n)
                        : vertex_index(spec, std::get<GridVertex>(start));
  const std::uint64_t budget = opts.step_budget ? opts.step_budget : n + 1;
  WalkOutcome res;
  if (opts.record) res.visited.push_back(vertex_at(spec, v));
  std::vector<std::uint64_t> out;
  for (;;) {
    out.clear();
    out_of(v, out);
    const std::uint64_t mult = terminal_multiplicity(cfg, out.size());
    const std::uint64_t total = out.size() + mult;
    if (total == 0) break;  // sink of the base graph
    if (res.steps == budget)
      throw InvariantError("walk exceeded its step budget; orientation has a cycle");
    ++res.steps;
    const std::uint64_t pick = rng.below(total);
    if (pick >= out.size()) {
      res.reached_terminal = true;
      break;
    }
    v = out[pick];
    if (opts.record) res.visited.push_back(vertex_at(spec, v));
  }
  return res;
}

}  // namespace

EdgeDirection orient_edge(const CombOrientation& comb, const GridVertex& u,
                          const GridVertex& v) {
  check_vertex(comb, u);
  check_vertex(comb, v);
  int differing = -1;
  for (int c = 0; c < comb.dimension(); ++c) {
    if (u.coords[static_cast<std::size_t>(c)] != v.coords[static_cast<std::size_t>(c)]) {
      if (differing >= 0)
        throw PreconditionError("vertices differ in more than one coordinate");
      differing = c;
    }
  }
  if (differing < 0) throw PreconditionError("vertices are identical");
  const CombOrientation* node = &comb;
  for (int c = comb.dimension() - 1; c > differing; --c)
    node = &node->child(u.coords[static_cast<std::size_t>(c)]);
  const auto d = static_cast<std::size_t>(differing);
  return node->rank_of(u.coords[d]) > node->rank_of(v.coords[d]) ? EdgeDirection::forward
                                                                 : EdgeDirection::backward;
}

OutNeighbors out_neighbors(const CombOrientation& comb, const AugmentedConfig& cfg,
                           const GridVertex& v) {
  check_vertex(comb, v);
  const GridSpec spec = comb.spec();
  std::vector<std::uint64_t> out;
  comb_out(comb, vertex_index(spec, v), out);
  std::sort(out.begin(), out.end());
  OutNeighbors res;
  for (auto w : out) res.grid.push_back(vertex_at(spec, w));
  res.terminal = terminal_multiplicity(cfg, out.size());
  return res;
}

// ---------------------------------------------------------------------------
// DirectedGrid

DirectedGrid::DirectedGrid(GridSpec spec, std::vector<std::vector<std::uint64_t>> out)
    : spec_(std::move(spec)), out_(std::move(out)) {
  if (out_.size() != spec_.vertex_count())
    throw PreconditionError("adjacency size does not match grid vertex count");
}

DirectedGrid materialize(const CombOrientation& comb) {
  const GridSpec spec = comb.spec();
  std::vector<std::vector<std::uint64_t>> out(spec.vertex_count());
  for (std::uint64_t v = 0; v < out.size(); ++v) {
    comb_out(comb, v, out[v]);
    std::sort(out[v].begin(), out[v].end());
  }
  return DirectedGrid(spec, std::move(out));
}

DirectedGrid reverse_top_rank_in_slice(const CombOrientation& comb) {
  const int r = comb.dimension();
  if (r < 2) throw PreconditionError("the slice mutation needs r >= 2");
  const DirectedGrid g = materialize(comb);
  const GridSpec spec = g.spec();
  std::vector<std::vector<std::uint64_t>> out(g.vertex_count());
  const auto last = static_cast<std::size_t>(r - 1);
  for (std::uint64_t u = 0; u < g.vertex_count(); ++u) {
    const GridVertex uv = vertex_at(spec, u);
    for (auto w : g.out(u)) {
      const GridVertex wv = vertex_at(spec, w);
      const bool flip = uv.coords[0] == 1 && wv.coords[0] == 1 && uv.coords[last] != wv.coords[last];
      out[flip ? w : u].push_back(flip ? u : w);
    }
  }
  for (auto& o : out) std::sort(o.begin(), o.end());
  return DirectedGrid(spec, std::move(out));
}

DirectedGrid embed_padded(const CombOrientation& comb, int n) {
  const int r = comb.dimension();
  const int m = comb.factor_size();
  if (n <= r) throw PreconditionError("no valid grid: size must exceed the dimension");
  if (n == r * m) return materialize(comb);
  if (n / r != m)
    throw PreconditionError("comb factor size must equal floor(n / r) for padding");

  GridSpec spec{std::vector<int>(static_cast<std::size_t>(r), m)};
  for (int c = 0; c < n - r * m; ++c) spec.factor_sizes[static_cast<std::size_t>(c)] += 1;
  const GridSpec inner = comb.spec();

  auto is_old = [m](const GridVertex& v) {
    return std::all_of(v.coords.begin(), v.coords.end(), [m](int x) { return x <= m; });
  };

  std::vector<std::vector<std::uint64_t>> out(spec.vertex_count());
  std::vector<std::uint64_t> comb_targets;
  for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
    const GridVertex v = vertex_at(spec, idx);
    const bool v_old = is_old(v);
    std::vector<std::uint64_t>& targets = out[idx];
    if (v_old) {
      comb_targets.clear();
      comb_out(comb, vertex_index(inner, v), comb_targets);
      for (auto w : comb_targets) targets.push_back(vertex_index(spec, vertex_at(inner, w)));
    }
    for (int c = 0; c < r; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      for (int x = 1; x < v.coords[cc]; ++x) {
        GridVertex w = v;
        w.coords[cc] = x;
        if (v_old && is_old(w)) continue;  // comb edge, handled above
        targets.push_back(vertex_index(spec, w));
      }
    }
    std::sort(targets.begin(), targets.end());
  }
  return DirectedGrid(spec, std::move(out));
}

std::optional<std::vector<std::uint64_t>> topological_order(const DirectedGrid& g) {
  const std::uint64_t n = g.vertex_count();
  std::vector<std::uint64_t> indeg(n, 0);
  for (std::uint64_t v = 0; v < n; ++v)
    for (auto w : g.out(v)) ++indeg[w];
  std::vector<std::uint64_t> order;
  order.reserve(n);
  for (std::uint64_t v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (auto w : g.out(order[head]))
      if (--indeg[w] == 0) order.push_back(w);
  if (order.size() != n) return std::nullopt;
  return order;
}

bool is_acyclic(const DirectedGrid& g) { return topological_order(g).has_value(); }

std::optional<std::string> find_unique_sink_violation(const DirectedGrid& g) {
  const GridSpec& spec = g.spec();
  const int r = spec.dimension();
  for (int f : spec.factor_sizes)
    if (f > 20) throw PreconditionError("subgrid enumeration limited to factors of size <= 20");

  const std::uint64_t n = g.vertex_count();
  std::vector<GridVertex> coords(n);
  for (std::uint64_t v = 0; v < n; ++v) coords[v] = vertex_at(spec, v);

  // masks[c] is a nonempty subset of the values of factor c.
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(r), 1);
  auto in_subgrid = [&](const GridVertex& v) {
    for (int c = 0; c < r; ++c)
      if (!(masks[static_cast<std::size_t>(c)] >> (v.coords[static_cast<std::size_t>(c)] - 1) & 1u))
        return false;
    return true;
  };
  for (;;) {
    std::size_t sinks = 0;
    for (std::uint64_t v = 0; v < n; ++v) {
      if (!in_subgrid(coords[v])) continue;
      const auto out = g.out(v);
      if (std::none_of(out.begin(), out.end(),
                       [&](std::uint64_t w) { return in_subgrid(coords[w]); }))
        ++sinks;
    }
    if (sinks != 1) {
      std::ostringstream os;
      os << "subgrid with value masks [";
      for (int c = 0; c < r; ++c) os << (c ? "," : "") << masks[static_cast<std::size_t>(c)];
      os << "] has " << sinks << " sinks";
      return os.str();
    }
    int c = 0;
    for (; c < r; ++c) {
      auto& mask = masks[static_cast<std::size_t>(c)];
      const std::uint32_t full = (1u << spec.factor_sizes[static_cast<std::size_t>(c)]) - 1;
      if (mask < full) {
        ++mask;
        break;
      }
      mask = 1;
    }
    if (c == r) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Walks and exact durations

WalkOutcome walk(const CombOrientation& comb, const AugmentedConfig& cfg,
                 const WalkStart& start, Rng& rng, const WalkOptions& opts) {
  if (const auto* v = std::get_if<GridVertex>(&start)) check_vertex(comb, *v);
  return walk_impl(
      comb.spec(),
      [&comb](std::uint64_t v, std::vector<std::uint64_t>& out) { comb_out(comb, v, out); }, cfg,
      start, rng, opts);
}

WalkOutcome walk(const DirectedGrid& g, const AugmentedConfig& cfg, const WalkStart& start,
                 Rng& rng, const WalkOptions& opts) {
  return walk_impl(
      g.spec(),
      [&g](std::uint64_t v, std::vector<std::uint64_t>& out) {
        const auto o = g.out(v);
        out.assign(o.begin(), o.end());
      },
      cfg, start, rng, opts);
}

std::vector<Rational> expected_durations_exact(const DirectedGrid& g,
                                               const AugmentedConfig& cfg) {
  const auto order = topological_order(g);
  if (!order) throw InvariantError("orientation has a directed cycle");
  std::vector<Rational> e(g.vertex_count());
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    const auto out = g.out(*it);
    const std::uint64_t mult = terminal_multiplicity(cfg, out.size());
    const std::uint64_t total = out.size() + mult;
    if (total == 0) continue;  // base sink: zero further steps
    Rational sum = 0;
    for (auto w : out) sum += e[w];
    e[*it] = 1 + sum / Rational(static_cast<unsigned long>(total));
  }
  return e;
}

namespace {

Rational pick_start(const GridSpec& spec, const std::vector<Rational>& e, const WalkStart& start) {
  if (const auto* v = std::get_if<GridVertex>(&start)) return e.at(vertex_index(spec, *v));
  Rational sum = 0;
  for (const auto& x : e) sum += x;
  return sum / Rational(static_cast<unsigned long>(e.size()));
}

void check_cap(std::uint64_t count, std::uint64_t cap) {
  if (count > cap)
    throw CapacityError("instance too large for exact mode (" + std::to_string(count) +
                        " states, cap " + std::to_string(cap) + "); use Monte Carlo mode");
}

}  // namespace

Rational expected_duration_exact(const CombOrientation& comb, const AugmentedConfig& cfg,
                                 const WalkStart& start, std::uint64_t state_cap) {
  check_cap(comb.spec().vertex_count(), state_cap);
  if (const auto* v = std::get_if<GridVertex>(&start)) check_vertex(comb, *v);
  const DirectedGrid g = materialize(comb);
  return pick_start(g.spec(), expected_durations_exact(g, cfg), start);
}

Rational expected_duration_exact(const DirectedGrid& g, const AugmentedConfig& cfg,
                                 const WalkStart& start, std::uint64_t state_cap) {
  check_cap(g.vertex_count(), state_cap);
  return pick_start(g.spec(), expected_durations_exact(g, cfg), start);
}

double uso_lemma_bound(int r, int m, std::uint64_t delta) {
  if (r < 0 || m < 1) throw PreconditionError("uso bound needs r >= 0 and m >= 1");
  const double d = static_cast<double>(delta);
  const double gap = std::log(m + d + 1.0) - std::log(d + 1.0);
  return std::pow(gap, r) / std::tgamma(r + 1.0);
}

double uso_theorem_bound(int r, int m) { return uso_lemma_bound(r, m, 0) - 1.0; }

}  // namespace pivotlab
