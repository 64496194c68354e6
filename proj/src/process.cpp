#include "pivotlab/process.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pivotlab/errors.hpp"

namespace pivotlab {

namespace {

constexpr std::size_t kUnknown = std::numeric_limits<std::size_t>::max();

std::uint64_t weight_of_terminal(const ProcessConfig& cfg) { return cfg.delta.value_or(0); }

// Draws from below + terminal with weights 1 per point and delta for the
// terminal. Returns the index into below, below_count for the terminal, or
// nullopt when the plain process stops.
std::optional<std::size_t> draw(const ProcessConfig& cfg, std::size_t below_count, Rng& rng) {
  const std::uint64_t total = below_count + weight_of_terminal(cfg);
  if (total == 0) {
    if (cfg.augmented()) return below_count;  // forced terminal pivot
    return std::nullopt;
  }
  return static_cast<std::size_t>(rng.below(total));
}

}  // namespace

ProcessConfig main_theorem_config(int r, int m) {
  auto ps = std::make_shared<const PointSet>(PointSet::construction(r, m));
  Transversal start = Transversal::axis_start(*ps, m);
  return ProcessConfig{std::move(ps), std::nullopt, std::move(start), true};
}

ProcessConfig augmented_config(int r, int m, std::uint64_t delta,
                               std::vector<std::int64_t> alphas) {
  if (alphas.empty()) alphas.assign(static_cast<std::size_t>(r), m + 1);
  auto ps = std::make_shared<const PointSet>(PointSet::construction(r, m).augmented(alphas));
  Transversal start = Transversal::axis_start(*ps, m + 1);
  return ProcessConfig{std::move(ps), delta, std::move(start), true};
}

StepOutcome step(const ProcessConfig& cfg, const Transversal& s, Rng& rng) {
  const auto below = below_set(*cfg.points, s);
  const auto pick = draw(cfg, below.size(), rng);
  StepOutcome out;
  if (!pick) return out;
  if (*pick >= below.size()) {
    out.kind = StepKind::terminal;
    return out;
  }
  out.kind = StepKind::pivot;
  out.pivot = below[*pick];
  out.next = pivot(*cfg.points, s, below[*pick]);
  return out;
}

// ---------------------------------------------------------------------------
// Trace

std::size_t Trace::pivot_count() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }

std::size_t Trace::augmented_steps() const noexcept {
  return pivot_count() + (reached_terminal ? 1 : 0);
}

std::size_t Trace::duration() const noexcept {
  return count_terminal_step ? augmented_steps() : pivot_count();
}

std::vector<PhaseChange> Trace::phase_changes() const {
  std::vector<PhaseChange> out;
  for (std::size_t t = 1; t < steps.size(); ++t)
    if (steps[t].phase < steps[t - 1].phase) out.push_back({t, steps[t].phase, steps[t - 1].pivot});
  if (reached_terminal) out.push_back({steps.size(), 0, std::nullopt});
  return out;
}

// ---------------------------------------------------------------------------
// Phases

int phase_of(const PointSet& ps, const Transversal& s) {
  int best = std::numeric_limits<int>::max();
  for (auto idx : s.members()) {
    const PointId& id = ps.id(idx);
    if (id.layer == ps.top_layer()) best = std::min(best, id.phase);
  }
  if (best == std::numeric_limits<int>::max())
    throw InvariantError("position has no top-layer member");
  return best;
}

Rational phase_by_axis(const Transversal& s) {
  const auto t = s.t();
  return *std::min_element(t.begin(), t.end());
}

namespace {

template <typename PositionFn>
std::vector<GoodPhase> good_phases_impl(const Trace& trace, const PointSet& ps,
                                        PositionFn&& position_at) {
  std::vector<GoodPhase> out;
  const int r = ps.dimension();
  if (r < 2 || trace.steps.empty()) return out;
  const auto changes = trace.phase_changes();
  const std::size_t end_time =
      trace.reached_terminal ? trace.steps.size() : trace.steps.size() - 1;
  for (std::size_t j = 0; j < changes.size(); ++j) {
    const PhaseChange& ch = changes[j];
    if (ch.phase < 1 || ch.phase > ps.m() || !ch.pivot) continue;
    if (ps.id(*ch.pivot).color != r) continue;
    const auto& pos = trace.steps[ch.time].position;
    const bool has_lower =
        std::any_of(pos.begin(), pos.end(), [&](auto idx) { return ps.id(idx).layer == r - 1; });
    if (has_lower) continue;
    GoodPhase g;
    g.phase = ch.phase;
    g.entry_time = ch.time;
    g.duration = (j + 1 < changes.size() ? changes[j + 1].time : end_time) - ch.time;
    const Transversal& s = position_at(pos);
    g.lower_layer_below = true;
    for (std::size_t q = 0; q < ps.size(); ++q)
      if (ps.id(q).layer == r - 1 && side_of(s, ps.point(q)) != Side::below)
        g.lower_layer_below = false;
    out.push_back(g);
  }
  return out;
}

}  // namespace

std::vector<GoodPhase> good_phases(const Trace& trace, const PointSet& ps) {
  std::optional<Transversal> scratch;
  return good_phases_impl(trace, ps, [&](const std::vector<std::size_t>& pos) -> const Transversal& {
    scratch = Transversal::make(ps, pos);
    return *scratch;
  });
}

std::vector<GoodPhase> good_phases(const Trace& trace, ProcessChain& chain) {
  const PointSet& ps = *chain.config().points;
  return good_phases_impl(trace, ps, [&](const std::vector<std::size_t>& pos) -> const Transversal& {
    return chain.state(chain.state_id(Transversal::make(ps, pos))).position;
  });
}

// ---------------------------------------------------------------------------
// ProcessChain

ProcessChain::ProcessChain(ProcessConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.points) throw PreconditionError("process config has no point set");
}

std::size_t ProcessChain::state_id(const Transversal& s) {
  std::vector<std::size_t> key(s.members().begin(), s.members().end());
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  auto st = std::make_unique<State>(State{s, below_set(*cfg_.points, s), phase_of(*cfg_.points, s)});
  const std::size_t id = states_.size();
  successors_.emplace_back(st->below.size(), kUnknown);
  states_.push_back(std::move(st));
  ids_.emplace(std::move(key), id);
  return id;
}

std::size_t ProcessChain::successor(std::size_t id, std::size_t n) {
  if (successors_.at(id).at(n) == kUnknown) {
    const State& st = *states_[id];
    const Transversal next = pivot_color_swap(*cfg_.points, st.position, st.below[n]);
    const std::size_t next_id = state_id(next);  // may grow successors_
    successors_[id][n] = next_id;
  }
  return successors_[id][n];
}

Trace ProcessChain::run(Rng& rng, const RunOptions& opts) {
  const std::uint64_t budget =
      opts.step_budget ? opts.step_budget : cfg_.points->transversal_count() + 1;
  Trace trace;
  trace.count_terminal_step = cfg_.count_terminal_step;
  std::size_t cur = state_id(cfg_.start);
  for (std::size_t t = 0;; ++t) {
    if (t > budget)
      throw InvariantError("process exceeded its step budget; positions must be repeating");
    const State& st = *states_[cur];
    TraceStep rec;
    rec.t = t;
    rec.position.assign(st.position.members().begin(), st.position.members().end());
    rec.below_count = st.below.size();
    rec.phase = st.phase;
    if (opts.verbose) rec.below = st.below;
    const auto pick = draw(cfg_, st.below.size(), rng);
    if (!pick) {
      trace.steps.push_back(std::move(rec));
      break;
    }
    rec.has_pivot = true;
    if (*pick >= st.below.size()) {
      trace.steps.push_back(std::move(rec));
      trace.reached_terminal = true;
      break;
    }
    rec.pivot = st.below[*pick];
    const std::size_t n = *pick;
    trace.steps.push_back(std::move(rec));
    cur = successor(cur, n);
  }
  return trace;
}

Trace run(const ProcessConfig& cfg, Rng& rng, const RunOptions& opts) {
  ProcessChain chain(cfg);
  return chain.run(rng, opts);
}

// ---------------------------------------------------------------------------
// Exact solve

Rational exact_expected_steps(const ProcessConfig& cfg, std::uint64_t state_cap) {
  if (!cfg.points) throw PreconditionError("process config has no point set");
  const std::uint64_t total = cfg.points->transversal_count();
  if (total > state_cap)
    throw CapacityError("instance too large for exact mode (" + std::to_string(total) +
                        " states, cap " + std::to_string(state_cap) + "); use Monte Carlo mode");
  ProcessChain chain(cfg);
  const std::size_t root = chain.state_id(cfg.start);
  std::vector<std::size_t> stack{root};
  std::vector<bool> expanded;
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (expanded.size() <= id) expanded.resize(id + 1, false);
    if (expanded[id]) continue;
    expanded[id] = true;
    for (std::size_t n = 0; n < chain.state(id).below.size(); ++n) {
      const std::size_t next = chain.successor(id, n);
      if (next >= expanded.size() || !expanded[next]) stack.push_back(next);
    }
  }

  const std::size_t count = chain.state_count();
  std::vector<Rational> sums(count);
  for (std::size_t id = 0; id < count; ++id) sums[id] = chain.state(id).position.t_sum();
  std::vector<std::size_t> order(count);
  for (std::size_t id = 0; id < count; ++id) order[id] = id;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sums[a] < sums[b]; });

  const Rational delta(static_cast<unsigned long>(weight_of_terminal(cfg)));
  const Rational terminal_cost = cfg.augmented() && cfg.count_terminal_step ? 1 : 0;
  std::vector<Rational> e(count);
  std::vector<bool> done(count, false);
  for (auto id : order) {
    const auto& st = chain.state(id);
    const std::size_t b = st.below.size();
    const Rational weight = Rational(static_cast<unsigned long>(b)) + delta;
    if (sgn(weight) == 0) {
      e[id] = cfg.augmented() ? terminal_cost : Rational(0);
      done[id] = true;
      continue;
    }
    Rational acc = delta * terminal_cost;
    for (std::size_t n = 0; n < b; ++n) {
      const std::size_t next = chain.successor(id, n);
      const auto t_now = st.position.t();
      const auto t_next = chain.state(next).position.t();
      for (std::size_t i = 0; i < t_now.size(); ++i)
        if (t_next[i] > t_now[i])
          throw InvariantError("pivot increased an axis intersection");
      if (!(sums[next] < sums[id]) || !done[next])
        throw InvariantError("pivot did not strictly decrease the axis-intersection sum");
      acc += 1 + e[next];
    }
    e[id] = acc / weight;
    done[id] = true;
  }
  return e[root];
}

}  // namespace pivotlab
