#pragma once

// Unique sink orientations of grids (Cartesian products of complete graphs):
// the recursive random "comb" construction, its augmentation with escape
// edges to a terminal vertex, directed random walks, and exact expected
// durations by back-substitution along a topological order.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pivotlab/random.hpp"
#include "pivotlab/rational.hpp"

namespace pivotlab {

inline constexpr std::uint64_t kDefaultStateCap = 1'000'000;

struct GridSpec {
  std::vector<int> factor_sizes;

  int dimension() const noexcept { return static_cast<int>(factor_sizes.size()); }
  // Sum of the factor sizes.
  long size() const noexcept;
  std::uint64_t vertex_count() const noexcept;

  bool operator==(const GridSpec&) const = default;
};

// Coordinates are 1-based: coords[i] lies in [1, factor_sizes[i]].
struct GridVertex {
  std::vector<int> coords;

  bool operator==(const GridVertex&) const = default;
};

// Vertices are numbered in mixed radix with coords[0] least significant.
std::uint64_t vertex_index(const GridSpec& spec, const GridVertex& v);
GridVertex vertex_at(const GridSpec& spec, std::uint64_t index);

// The comb orientation of K_m^r. At each level the last coordinate is ranked
// by a permutation: rank(v) is the label of value v under that permutation, and an
// edge between hyperplanes goes from the higher-ranked value to the lower one.
// Inside hyperplane {last coordinate = v} the orientation is child(v).
class CombOrientation {
 public:
  // Leaf of dimension 0 over factor size m.
  explicit CombOrientation(int m);
  // ranks[v-1] = rank of value v (a permutation of 1..m); children holds the
  // m hyperplane combs of dimension r-1, all of the same factor size.
  CombOrientation(int m, std::vector<int> ranks, std::vector<CombOrientation> children);

  int dimension() const noexcept { return dimension_; }
  int factor_size() const noexcept { return m_; }
  GridSpec spec() const;

  std::span<const int> ranks() const noexcept { return ranks_; }
  int rank_of(int value) const { return ranks_.at(static_cast<std::size_t>(value - 1)); }
  // Child comb for the hyperplane whose last coordinate equals value.
  const CombOrientation& child(int value) const;
  std::span<const CombOrientation> children() const noexcept { return children_; }

  bool operator==(const CombOrientation&) const = default;

 private:
  int dimension_ = 0;
  int m_ = 1;
  std::vector<int> ranks_;
  std::vector<CombOrientation> children_;
};

// Same construction with every permutation the identity.
CombOrientation identity_comb(int r, int m);

// Uniformly random permutation per level, children built independently.
CombOrientation build_comb(int r, int m, Rng& rng);

enum class EdgeDirection { forward, backward };  // forward: u -> v

// Direction of the grid edge {u, v}; u and v must differ in exactly one
// coordinate.
EdgeDirection orient_edge(const CombOrientation& comb, const GridVertex& u,
                          const GridVertex& v);

// Base graph, or augmented multigraph with delta escape edges per vertex to
// the terminal (delta == 0: one escape edge at each sink only).
struct AugmentedConfig {
  bool augmented = false;
  std::uint64_t delta = 0;

  static AugmentedConfig base() { return {}; }
  static AugmentedConfig with_delta(std::uint64_t d) { return {true, d}; }
};

struct OutNeighbors {
  std::vector<GridVertex> grid;
  std::uint64_t terminal = 0;  // multiplicity of edges to the terminal
};

OutNeighbors out_neighbors(const CombOrientation& comb, const AugmentedConfig& cfg,
                           const GridVertex& v);

// Explicit orientation of a grid, stored as out-adjacency over vertex indices.
class DirectedGrid {
 public:
  DirectedGrid(GridSpec spec, std::vector<std::vector<std::uint64_t>> out);

  const GridSpec& spec() const noexcept { return spec_; }
  std::uint64_t vertex_count() const noexcept { return out_.size(); }
  std::span<const std::uint64_t> out(std::uint64_t v) const { return out_.at(v); }

 private:
  GridSpec spec_;
  std::vector<std::vector<std::uint64_t>> out_;
};

DirectedGrid materialize(const CombOrientation& comb);

// Pads an r-dimensional comb over K_m up to a grid of total size n (the first
// n - r*m factors get one extra vertex). Edges between two comb vertices keep
// the comb direction; every other edge points toward the smaller value of the
// coordinate in which its endpoints differ, so edges leaving the new vertices
// all point into the embedded comb. n == r*m returns the comb unchanged.
DirectedGrid embed_padded(const CombOrientation& comb, int n);

// Fault injection: the comb with the top-level rank rule reversed inside the
// slice {first coordinate = 1}. Requires r >= 2.
DirectedGrid reverse_top_rank_in_slice(const CombOrientation& comb);

// Kahn's algorithm; nullopt when the orientation has a directed cycle.
std::optional<std::vector<std::uint64_t>> topological_order(const DirectedGrid& g);
bool is_acyclic(const DirectedGrid& g);

// Checks every subgrid U_1 x ... x U_r for exactly one sink. Returns a
// description of the first violating subgrid, or nullopt if none.
std::optional<std::string> find_unique_sink_violation(const DirectedGrid& g);

struct UniformStart {};
using WalkStart = std::variant<GridVertex, UniformStart>;

struct WalkOutcome {
  std::uint64_t steps = 0;
  bool reached_terminal = false;
  // Grid vertices visited (recorded on request); the terminal, when reached,
  // is the implicit final position, so steps == visited.size() - 1 + reached_terminal.
  std::vector<GridVertex> visited;
};

struct WalkOptions {
  bool record = false;
  // 0 selects the default budget of vertex_count + 1 steps.
  std::uint64_t step_budget = 0;
};

WalkOutcome walk(const CombOrientation& comb, const AugmentedConfig& cfg,
                 const WalkStart& start, Rng& rng, const WalkOptions& opts = {});
WalkOutcome walk(const DirectedGrid& g, const AugmentedConfig& cfg,
                 const WalkStart& start, Rng& rng, const WalkOptions& opts = {});

// Exact expected steps from every vertex, indexed by vertex_index.
std::vector<Rational> expected_durations_exact(const DirectedGrid& g,
                                               const AugmentedConfig& cfg);

Rational expected_duration_exact(const CombOrientation& comb, const AugmentedConfig& cfg,
                                 const WalkStart& start,
                                 std::uint64_t state_cap = kDefaultStateCap);
Rational expected_duration_exact(const DirectedGrid& g, const AugmentedConfig& cfg,
                                 const WalkStart& start,
                                 std::uint64_t state_cap = kDefaultStateCap);

// (1/r!) (ln(m + delta + 1) - ln(delta + 1))^r.
double uso_lemma_bound(int r, int m, std::uint64_t delta);
// (1/r!) ln^r(m + 1) - 1.
double uso_theorem_bound(int r, int m);

}  // namespace pivotlab
