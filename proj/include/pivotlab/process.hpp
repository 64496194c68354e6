#pragma once

// The random pivoting process on a point set and its augmented variant with
// an escape pivot to the terminal position.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pivotlab/geometry.hpp"
#include "pivotlab/random.hpp"
#include "pivotlab/rational.hpp"

namespace pivotlab {

struct ProcessConfig {
  std::shared_ptr<const PointSet> points;
  // nullopt: the plain process, which stops when nothing lies below.
  // A value: the augmented process with that escape weight.
  std::optional<std::uint64_t> delta;
  Transversal start;
  // Augmented process only: whether the final pivot to the terminal counts.
  bool count_terminal_step = true;

  bool augmented() const noexcept { return delta.has_value(); }
};

// Plain process on A(r, m) from {m e_1, ..., m e_r}.
ProcessConfig main_theorem_config(int r, int m);
// Augmented process on A(r, m) plus {alpha_i e_i}, starting there. Empty
// alphas selects the default alpha_i = m + 1.
ProcessConfig augmented_config(int r, int m, std::uint64_t delta,
                               std::vector<std::int64_t> alphas = {});

// nullopt: the terminal pivot.
using Pivot = std::optional<std::size_t>;

enum class StepKind { pivot, terminal, stop };

struct StepOutcome {
  StepKind kind = StepKind::stop;
  Pivot pivot;
  std::optional<Transversal> next;
};

StepOutcome step(const ProcessConfig& cfg, const Transversal& s, Rng& rng);

struct TraceStep {
  std::size_t t = 0;
  std::vector<std::size_t> position;
  // Pivot drawn at this position: a point, the terminal (nullopt inside), or
  // absent when the plain process stops here.
  bool has_pivot = false;
  Pivot pivot;
  std::size_t below_count = 0;
  int phase = 0;
  std::vector<std::size_t> below;  // filled in verbose mode only
};

struct PhaseChange {
  std::size_t time = 0;  // sigma_i: first time at the new phase
  int phase = 0;
  Pivot pivot;  // the pivot that caused the change
};

struct Trace {
  std::vector<TraceStep> steps;
  bool reached_terminal = false;
  bool count_terminal_step = true;

  // Number of point pivots.
  std::size_t pivot_count() const noexcept;
  // Pivots including the final hop to the terminal.
  std::size_t augmented_steps() const noexcept;
  // Step count under the trace's counting convention.
  std::size_t duration() const noexcept;
  int initial_phase() const { return steps.front().phase; }
  // Strict phase decreases, with the terminal (phase 0) as the last change
  // when it was reached.
  std::vector<PhaseChange> phase_changes() const;
};

struct RunOptions {
  bool verbose = false;
  // 0 selects transversal_count + 1.
  std::uint64_t step_budget = 0;
};

Trace run(const ProcessConfig& cfg, Rng& rng, const RunOptions& opts = {});

// Minimum phase among top-layer members.
int phase_of(const PointSet& ps, const Transversal& s);
// The terminal position has phase 0.
inline int phase_of(const PointSet& ps, const std::optional<Transversal>& s) {
  return s ? phase_of(ps, *s) : 0;
}
// min t_i; equals phase_of on A(r, m).
Rational phase_by_axis(const Transversal& s);

struct GoodPhase {
  int phase = 0;
  std::size_t entry_time = 0;
  std::size_t duration = 0;  // time until the next phase change
  // Every point of layer r-1 was strictly below the entry position.
  bool lower_layer_below = false;
};

// Phases k in [m] that are visited, entered by a pivot of color r, and whose
// entry position has no point of layer r - 1. Empty for r == 1.
std::vector<GoodPhase> good_phases(const Trace& trace, const PointSet& ps);

// Memoizes below sets per position so repeated runs over the same config are
// cheap. Not thread-safe; use one chain per thread.
class ProcessChain {
 public:
  explicit ProcessChain(ProcessConfig cfg);

  const ProcessConfig& config() const noexcept { return cfg_; }

  struct State {
    Transversal position;
    std::vector<std::size_t> below;
    int phase = 0;
  };

  std::size_t state_id(const Transversal& s);
  const State& state(std::size_t id) const { return *states_.at(id); }
  std::size_t state_count() const noexcept { return states_.size(); }
  // Successor state of pivoting the n-th point of below(id).
  std::size_t successor(std::size_t id, std::size_t n);

  Trace run(Rng& rng, const RunOptions& opts = {});

 private:
  ProcessConfig cfg_;
  std::map<std::vector<std::size_t>, std::size_t> ids_;
  std::vector<std::unique_ptr<State>> states_;
  std::vector<std::vector<std::size_t>> successors_;  // lazily filled, SIZE_MAX = unknown
};

// Same, reusing the chain's cached positions.
std::vector<GoodPhase> good_phases(const Trace& trace, ProcessChain& chain);

// Exact expected duration from cfg.start by solving the finite chain; states
// are reached by search and back-substituted in increasing order of sum t_i,
// which every pivot strictly decreases.
Rational exact_expected_steps(const ProcessConfig& cfg, std::uint64_t state_cap = 1'000'000);

}  // namespace pivotlab
