#include "pivotlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "pivotlab/errors.hpp"
#include "pivotlab/exact_linalg.hpp"

namespace pivotlab {

// ---------------------------------------------------------------------------
// Bounds

std::string to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::uso_lemma: return "uso_lemma";
    case BoundFamily::uso_theorem_eq1: return "uso_theorem_eq1";
    case BoundFamily::corollary: return "corollary";
    case BoundFamily::augmented_theorem: return "augmented_theorem";
    case BoundFamily::main_theorem: return "main_theorem";
  }
  return "unknown";
}

BoundFamily parse_bound_family(const std::string& s) {
  for (auto f : {BoundFamily::uso_lemma, BoundFamily::uso_theorem_eq1, BoundFamily::corollary,
                 BoundFamily::augmented_theorem, BoundFamily::main_theorem})
    if (to_string(f) == s) return f;
  throw PreconditionError("unknown bound family '" + s + "'");
}

namespace {

double factorial(int r) { return std::tgamma(static_cast<double>(r) + 1.0); }

double process_bound(int r, int m, std::uint64_t delta) {
  const double c = static_cast<double>(r) * (r - 1) / 2.0;
  const double d = static_cast<double>(delta);
  const double f = factorial(r);
  return std::pow(std::log(m + c + d) - std::log(1.0 + c + d), r) / (f * f * f);
}

}  // namespace

double bound(const BoundParams& p) {
  switch (p.family) {
    case BoundFamily::uso_lemma:
      if (p.r < 0 || p.m < 1) throw PreconditionError("uso_lemma needs r >= 0 and m >= 1");
      return uso_lemma_bound(p.r, p.m, p.delta);
    case BoundFamily::uso_theorem_eq1:
      if (p.r < 0 || p.m < 1) throw PreconditionError("uso_theorem_eq1 needs r >= 0 and m >= 1");
      return uso_theorem_bound(p.r, p.m);
    case BoundFamily::corollary:
      if (p.r < 1 || p.n <= p.r) throw PreconditionError("corollary needs r >= 1 and n > r");
      return std::pow(std::log(static_cast<double>(p.n) / p.r), p.r) / factorial(p.r) - 1.0;
    case BoundFamily::augmented_theorem:
      if (p.r < 1 || p.m < 1) throw PreconditionError("augmented_theorem needs r >= 1 and m >= 1");
      return process_bound(p.r, p.m, p.delta);
    case BoundFamily::main_theorem:
      if (p.r < 1 || p.m < 1) throw PreconditionError("main_theorem needs r >= 1 and m >= 1");
      if (p.delta != 0) throw PreconditionError("main_theorem is evaluated at delta = 0 only");
      return process_bound(p.r, p.m, 0);
  }
  throw PreconditionError("unknown bound family");
}

// ---------------------------------------------------------------------------
// Statistics

SampleStats summarize(const std::vector<double>& xs) {
  SampleStats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  }
  return s;
}

namespace {

ExpectationReport mc_report(const std::vector<double>& xs, std::uint64_t seed) {
  const SampleStats st = summarize(xs);
  ExpectationReport rep;
  rep.method = EstimateMethod::monte_carlo;
  rep.value = st.mean;
  rep.trials = st.n;
  rep.std_error = st.std_error;
  rep.ci_low = st.mean - kZ99 * st.std_error;
  rep.ci_high = st.mean + kZ99 * st.std_error;
  rep.seed = seed;
  return rep;
}

}  // namespace

ExpectationReport mc_estimate(const std::function<double(Rng&)>& sample, std::size_t trials,
                              std::uint64_t seed) {
  if (trials < 2) throw PreconditionError("Monte Carlo estimation needs at least 2 trials");
  std::vector<double> xs(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    xs[i] = sample(rng);
  }
  return mc_report(xs, seed);
}

ExpectationReport mc_estimate(const CombOrientation& comb, const AugmentedConfig& cfg,
                              const WalkStart& start, std::size_t trials, std::uint64_t seed) {
  const DirectedGrid g = materialize(comb);
  return mc_estimate(
      [&](Rng& rng) { return static_cast<double>(walk(g, cfg, start, rng).steps); }, trials,
      seed);
}

ExpectationReport mc_estimate(ProcessChain& chain, std::size_t trials, std::uint64_t seed) {
  return mc_estimate([&](Rng& rng) { return static_cast<double>(chain.run(rng).duration()); },
                     trials, seed);
}

ExpectationReport exact_report(const Rational& value) {
  ExpectationReport rep;
  rep.method = EstimateMethod::exact;
  rep.exact_value = value;
  rep.value = value.get_d();
  rep.ci_low = rep.ci_high = rep.value;
  return rep;
}

ExpectationReport compare_to_bound(const Rational& exact, const BoundParams& params) {
  ExpectationReport rep = exact_report(exact);
  rep.params = params;
  rep.bound = bound(params);
  rep.satisfied = exact >= Rational(rep.bound);
  return rep;
}

ExpectationReport compare_to_bound(ExpectationReport mc, const BoundParams& params) {
  mc.params = params;
  mc.bound = bound(params);
  mc.satisfied = mc.value - 3.0 * mc.std_error >= mc.bound;
  mc.inconclusive = !mc.satisfied && mc.ci_high >= mc.bound;
  return mc;
}

// ---------------------------------------------------------------------------
// Orientation sampling

UsoSample sample_comb_durations(int r, int m, const AugmentedConfig& cfg, std::size_t combs,
                                std::uint64_t seed) {
  UsoSample out;
  out.augmented.reserve(combs);
  out.base.reserve(combs);
  for (std::size_t c = 0; c < combs; ++c) {
    Rng rng(derive_seed(seed, c));
    const DirectedGrid g = materialize(build_comb(r, m, rng));
    out.augmented.push_back(expected_duration_exact(g, cfg, UniformStart{}));
    out.base.push_back(expected_duration_exact(g, AugmentedConfig::base(), UniformStart{}));
  }
  return out;
}

ExpectationReport compare_uso_average(int r, int m, const AugmentedConfig& cfg,
                                      std::size_t combs, std::uint64_t seed) {
  if (combs < 2) throw PreconditionError("orientation averaging needs at least 2 combs");
  const UsoSample sample = sample_comb_durations(r, m, cfg, combs, seed);
  const auto& values = cfg.augmented ? sample.augmented : sample.base;
  std::vector<double> xs;
  xs.reserve(values.size());
  for (const auto& v : values) xs.push_back(v.get_d());
  ExpectationReport rep = mc_report(xs, seed);
  const SampleStats st = summarize(xs);
  rep.sample_min = st.min;
  rep.sample_max = st.max;
  BoundParams p;
  p.family = cfg.augmented ? BoundFamily::uso_lemma : BoundFamily::uso_theorem_eq1;
  p.r = r;
  p.m = m;
  p.delta = cfg.augmented ? cfg.delta : 0;
  return compare_to_bound(rep, p);
}

ExpectationReport compare_corollary_average(int r, int n, std::size_t combs, std::uint64_t seed) {
  if (r < 1 || n <= r) throw PreconditionError("corollary needs r >= 1 and n > r");
  if (combs < 2) throw PreconditionError("orientation averaging needs at least 2 combs");
  const int m = n / r;
  std::vector<double> xs;
  for (std::size_t c = 0; c < combs; ++c) {
    Rng rng(derive_seed(seed, c));
    const DirectedGrid g = embed_padded(build_comb(r, m, rng), n);
    xs.push_back(expected_duration_exact(g, AugmentedConfig::base(), UniformStart{}).get_d());
  }
  ExpectationReport rep = mc_report(xs, seed);
  const SampleStats st = summarize(xs);
  rep.sample_min = st.min;
  rep.sample_max = st.max;
  BoundParams p;
  p.family = BoundFamily::corollary;
  p.r = r;
  p.m = m;
  p.n = n;
  return compare_to_bound(rep, p);
}

AdversaryResult best_case_augmented(int r, int m, std::uint64_t delta, std::int64_t lo,
                                    std::int64_t hi, std::uint64_t state_cap) {
  if (lo > hi) throw PreconditionError("empty alpha range");
  std::vector<std::int64_t> alphas(static_cast<std::size_t>(r), lo);
  std::optional<AdversaryResult> best;
  for (;;) {
    const Rational v = exact_expected_steps(augmented_config(r, m, delta, alphas), state_cap);
    if (!best || v < best->value) best = AdversaryResult{v, alphas};
    std::size_t i = 0;
    while (i < alphas.size() && alphas[i] == hi) alphas[i++] = lo;
    if (i == alphas.size()) break;
    ++alphas[i];
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Lemma verification

bool LemmaReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* LemmaReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::string describe_id(const PointId& id) {
  std::ostringstream os;
  os << "a(" << id.color << "," << id.layer << "," << id.phase << ")";
  return os.str();
}

std::string describe(const PointSet& ps, std::span<const std::size_t> idxs) {
  std::string s = "{";
  for (std::size_t q = 0; q < idxs.size(); ++q) {
    if (q) s += ", ";
    s += describe_id(ps.id(idxs[q]));
  }
  return s + "}";
}

CheckResult named_check(const std::string& name) {
  CheckResult c;
  c.name = name;
  return c;
}

// Records the first failure; later failures only count.
void fail(CheckResult& c, const std::string& what) {
  if (c.passed) c.counterexample = what;
  c.passed = false;
}

// Calls fn for each subset of {0..n-1} with 1 <= size <= k, exhaustively or
// as `cap` random subsets when there are more than cap.
template <typename Fn>
void for_each_small_subset(std::size_t n, std::size_t k, std::size_t cap, Rng& rng, Fn&& fn) {
  double total = 0.0;
  for (std::size_t s = 1; s <= std::min(k, n); ++s) {
    double c = 1.0;
    for (std::size_t q = 0; q < s; ++q) c = c * static_cast<double>(n - q) / static_cast<double>(q + 1);
    total += c;
  }
  std::vector<std::size_t> subset;
  if (total > static_cast<double>(cap)) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t trial = 0; trial < cap; ++trial) {
      const std::size_t size = 1 + static_cast<std::size_t>(rng.below(std::min(k, n)));
      rng.shuffle(all);
      subset.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(subset.begin(), subset.end());
      fn(subset);
    }
    return;
  }
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!subset.empty()) fn(subset);
    if (subset.size() == k) return;
    for (std::size_t i = from; i < n; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
}

// Member lists of every transversal (index c-1 holds the color-c point), in
// lexicographic order, exhaustively or as `cap` random draws.
template <typename Fn>
void for_each_transversal(const PointSet& ps, std::size_t cap, Rng& rng, Fn&& fn) {
  const int r = ps.dimension();
  std::vector<std::size_t> members(static_cast<std::size_t>(r));
  if (ps.transversal_count() > cap) {
    for (std::size_t trial = 0; trial < cap; ++trial) {
      for (int c = 1; c <= r; ++c) {
        const auto& cls = ps.color_class(c);
        members[static_cast<std::size_t>(c - 1)] = cls[rng.below(cls.size())];
      }
      fn(members);
    }
    return;
  }
  for (int c = 1; c <= r; ++c)
    if (ps.color_class(c).empty()) return;
  std::vector<std::size_t> pos(static_cast<std::size_t>(r), 0);
  for (;;) {
    for (int c = 1; c <= r; ++c)
      members[static_cast<std::size_t>(c - 1)] = ps.color_class(c)[pos[static_cast<std::size_t>(c - 1)]];
    fn(members);
    int c = r;
    while (c >= 1) {
      auto& p = pos[static_cast<std::size_t>(c - 1)];
      if (++p < ps.color_class(c).size()) break;
      p = 0;
      --c;
    }
    if (c < 1) break;
  }
}

std::optional<Transversal> try_make(const PointSet& ps, const std::vector<std::size_t>& members,
                                    CheckResult& c) {
  try {
    return Transversal::make(ps, members);
  } catch (const std::exception& e) {
    fail(c, describe(ps, members) + ": " + e.what());
    return std::nullopt;
  }
}

CheckResult check_sign_structure(const PointSet& ps) {
  CheckResult c = named_check("sign structure");
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const auto& x = ps.point(q).coords;
    const int color = ps.id(q).color;
    Integer sum = 0;
    bool ok = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += x[i];
      const bool positive = sgn(x[i]) > 0;
      if (positive != (static_cast<int>(i) + 1 == color)) ok = false;
    }
    if (sgn(sum) <= 0) ok = false;
    ++c.cases;
    if (!ok) fail(c, describe_id(ps.id(q)) + " violates the sign pattern");
  }
  return c;
}

std::vector<CheckResult> check_subsets(const PointSet& ps, const LemmaOptions& opts, Rng& rng) {
  CheckResult colors = named_check("colors");
  CheckResult pierced = named_check("pierced");
  const int r = ps.dimension();
  for_each_small_subset(ps.size(), static_cast<std::size_t>(r), opts.exhaustive_cap, rng,
                        [&](const std::vector<std::size_t>& subset) {
    std::vector<const Point*> pts;
    std::vector<bool> seen(static_cast<std::size_t>(r), false);
    for (auto q : subset) {
      pts.push_back(&ps.point(q));
      seen[static_cast<std::size_t>(ps.id(q).color - 1)] = true;
    }
    const bool full = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    const bool is_pierced = is_pierced_subset(pts, r);
    ++colors.cases;
    if (is_pierced && !full) fail(colors, describe(ps, subset) + " is pierced but misses a color");
    if (!full) return;
    ++pierced.cases;
    if (!is_pierced) {
      fail(pierced, describe(ps, subset) + " has every color but is not pierced");
      return;
    }
    std::vector<std::size_t> members(static_cast<std::size_t>(r));
    for (auto q : subset) members[static_cast<std::size_t>(ps.id(q).color - 1)] = q;
    try_make(ps, members, pierced);
  });
  return {colors, pierced};
}

CheckResult check_non_degenerate(const PointSet& ps, const LemmaOptions& opts, Rng& rng) {
  CheckResult c = named_check("non-degenerate");
  const int r = ps.dimension();
  const auto ur = static_cast<std::size_t>(r);
  for_each_transversal(ps, opts.exhaustive_cap, rng, [&](const std::vector<std::size_t>& members) {
    ++c.cases;
    RationalMatrix diff(ur - 1, ur);
    for (std::size_t a = 1; a < ur; ++a)
      for (std::size_t i = 0; i < ur; ++i)
        diff(a - 1, i) = Rational(ps.point(members[a]).coords[i] - ps.point(members[0]).coords[i]);
    if (rank(diff) != ur - 1) {
      fail(c, describe(ps, members) + " is affinely dependent");
      return;
    }
    const auto normals = null_space(diff);
    Rational dot = 0;
    for (const auto& w : normals.front()) dot += w;
    if (normals.size() != 1 || sgn(dot) == 0) {
      fail(c, describe(ps, members) + " spans a hyperplane parallel to the line");
      return;
    }
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << ur); ++mask) {
      std::vector<const Point*> pts;
      for (std::size_t a = 0; a < ur; ++a)
        if (mask >> a & 1) pts.push_back(&ps.point(members[a]));
      if (is_pierced_subset(pts, r)) {
        fail(c, describe(ps, members) + " has a pierced proper subset");
        return;
      }
    }
    const auto t = try_make(ps, members, c);
    if (!t) return;
    const auto w = hyperplane_normal([&] {
      std::vector<const Point*> pts;
      for (auto q : members) pts.push_back(&ps.point(q));
      return pts;
    }(), r);
    for (std::size_t i = 0; i < ur; ++i)
      if (w[i] * t->t()[i] != 1) {
        fail(c, describe(ps, members) + ": normal and axis intersections disagree");
        return;
      }
  });
  return c;
}

// Monotone and pivot-agreement checks over each (S, p below S) pair.
std::vector<CheckResult> check_pivots(const PointSet& ps, const LemmaOptions& opts, Rng& rng) {
  CheckResult mono = named_check("monotone");
  CheckResult agree = named_check("pivot agreement");
  const auto ur = static_cast<std::size_t>(ps.dimension());
  auto check_pair = [&](const Transversal& s, std::size_t p) {
    ++mono.cases;
    ++agree.cases;
    std::vector<std::size_t> pair_members(s.members().begin(), s.members().end());
    const std::string where = describe(ps, pair_members) + " with pivot " + describe_id(ps.id(p));
    try {
      const Transversal next = pivot_color_swap(ps, s, p);
      bool strict = false;
      for (std::size_t i = 0; i < ur; ++i) {
        if (next.t()[i] > s.t()[i]) fail(mono, where + ": t increased at axis " + std::to_string(i + 1));
        if (next.t()[i] < s.t()[i]) strict = true;
      }
      if (!strict) fail(mono, where + ": no axis intersection decreased");
      try {
        const auto facet = pivot_facet_search(ps, s, p);
        std::vector<std::size_t> swapped(next.members().begin(), next.members().end());
        std::sort(swapped.begin(), swapped.end());
        if (facet != swapped) fail(agree, where + ": facet search found " + describe(ps, facet));
      } catch (const std::exception& e) {
        fail(agree, where + ": " + e.what());
      }
    } catch (const std::exception& e) {
      fail(mono, where + ": " + e.what());
      fail(agree, where + ": " + e.what());
    }
  };

  std::size_t pairs = 0;
  bool capped = false;
  for_each_transversal(ps, opts.exhaustive_cap, rng, [&](const std::vector<std::size_t>& members) {
    if (capped) return;
    std::optional<Transversal> s;
    try {
      s = Transversal::make(ps, members);
    } catch (const std::exception& e) {
      fail(mono, describe(ps, members) + ": " + e.what());
      return;
    }
    std::vector<std::size_t> below;
    try {
      below = below_set(ps, *s);
    } catch (const std::exception& e) {
      fail(mono, describe(ps, members) + ": " + e.what());
      return;
    }
    for (auto p : below) {
      if (pairs++ >= opts.exhaustive_cap) {
        capped = true;
        return;
      }
      check_pair(*s, p);
    }
  });

  for (std::size_t trial = 0, attempts = 0;
       trial < opts.random_pivot_pairs && attempts < 100 * opts.random_pivot_pairs + 100;
       ++attempts) {
    std::vector<std::size_t> members(ur);
    for (std::size_t c = 0; c < ur; ++c) {
      const auto& cls = ps.color_class(static_cast<int>(c + 1));
      members[c] = cls[rng.below(cls.size())];
    }
    std::optional<Transversal> s;
    std::vector<std::size_t> below;
    try {
      s = Transversal::make(ps, members);
      below = below_set(ps, *s);
    } catch (const std::exception& e) {
      fail(agree, describe(ps, members) + ": " + e.what());
      ++trial;
      continue;
    }
    if (below.empty()) continue;
    check_pair(*s, below[rng.below(below.size())]);
    ++trial;
  }
  return {mono, agree};
}

CheckResult check_layer(const PointSet& ps, const LemmaOptions& opts, Rng& rng) {
  CheckResult c = named_check("layer r-1");
  const int r = ps.dimension();
  const int top = ps.top_layer();
  if (r < 2 || ps.m() < 2) {
    c.skipped = true;
    return c;
  }
  for_each_transversal(ps, opts.exhaustive_cap, rng, [&](const std::vector<std::size_t>& members) {
    const auto s = try_make(ps, members, c);
    if (!s) return;
    ++c.cases;
    const auto t = s->t();
    const Rational tr = t[static_cast<std::size_t>(r - 1)];
    const Rational tmin = *std::min_element(t.begin(), t.end());
    const std::string where = describe(ps, members);
    for (int i = 1; i <= r; ++i) {
      const Rational& ti = t[static_cast<std::size_t>(i - 1)];
      for (auto q : ps.color_class(i)) {
        const PointId& id = ps.id(q);
        const Side side = side_of(*s, ps.point(q));
        if (id.layer == top - 1 && ti <= tr && side != Side::above)
          fail(c, where + ": (a) fails for " + describe_id(id));
        if (id.layer == top - 1 && ti >= tr + 1 && side != Side::below)
          fail(c, where + ": (b) fails for " + describe_id(id));
        if (id.layer != top && ti == tmin && side != Side::above)
          fail(c, where + ": (c) fails for " + describe_id(id));
      }
      if (ti == tmin) {
        const std::size_t q = s->member(i);
        const auto& x = ps.point(q).coords;
        bool on_axis = ps.id(q).layer == top;
        for (std::size_t a = 0; a < x.size(); ++a)
          if (Rational(x[a]) != (static_cast<int>(a) == i - 1 ? ti : Rational(0))) on_axis = false;
        if (!on_axis) fail(c, where + ": (c) t_i e_i is not a member for color " + std::to_string(i));
      }
    }
  });
  return c;
}

}  // namespace

LemmaReport verify_geometry_lemmas(const PointSet& ps, const LemmaOptions& opts) {
  LemmaReport rep;
  rep.subject = "point set of dimension " + std::to_string(ps.dimension()) + ", m = " +
                std::to_string(ps.m());
  Rng rng(opts.seed);
  rep.checks.push_back(check_sign_structure(ps));
  for (auto& c : check_subsets(ps, opts, rng)) rep.checks.push_back(std::move(c));
  rep.checks.push_back(check_non_degenerate(ps, opts, rng));
  for (auto& c : check_pivots(ps, opts, rng)) rep.checks.push_back(std::move(c));
  rep.checks.push_back(check_layer(ps, opts, rng));
  return rep;
}

LemmaReport verify_lemmas(int r, int m, const LemmaOptions& opts) {
  LemmaReport rep = verify_geometry_lemmas(PointSet::construction(r, m), opts);
  rep.subject = "A(" + std::to_string(r) + "," + std::to_string(m) + ")";
  return rep;
}

LemmaReport verify_deep_lemmas(int big_r, int m, int r, const LemmaOptions& opts) {
  LemmaReport rep = verify_geometry_lemmas(PointSet::project_deep(big_r, m, r), opts);
  rep.subject = "A(" + std::to_string(big_r) + "," + std::to_string(m) + ") projected to dimension " +
                std::to_string(r);
  return rep;
}

double chi_square_critical(double df, double significance) {
  if (df <= 0) throw PreconditionError("chi-square needs positive degrees of freedom");
  boost::math::chi_squared dist(df);
  return boost::math::quantile(boost::math::complement(dist, significance));
}

LemmaReport verify_process_lemmas(int r, int m, std::uint64_t delta,
                                  const ProcessLemmaOptions& opts) {
  LemmaReport rep;
  rep.subject = "augmented process r=" + std::to_string(r) + " m=" + std::to_string(m) +
                " delta=" + std::to_string(delta);
  ProcessChain chain(augmented_config(r, m, delta));
  const PointSet& ps = *chain.config().points;
  const int top = ps.top_layer();

  CheckResult invariants = named_check("trace invariants");
  CheckResult phase_agree = named_check("phase agreement");
  CheckResult law = named_check("phase transition law");
  CheckResult color = named_check("phase-change pivot color");
  CheckResult good = named_check("good-phase frequency");
  CheckResult entry = named_check("good-phase entry");
  CheckResult coupling = named_check("good-phase duration");

  // transitions[prev][next]
  std::vector<std::vector<std::uint64_t>> transitions(
      static_cast<std::size_t>(m + 2), std::vector<std::uint64_t>(static_cast<std::size_t>(m + 2), 0));
  std::vector<std::uint64_t> colors(static_cast<std::size_t>(r), 0);
  std::vector<std::uint64_t> good_counts(static_cast<std::size_t>(m + 1), 0);
  std::vector<std::vector<double>> good_durations(static_cast<std::size_t>(m + 1));

  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    Rng rng(derive_seed(opts.seed, trial));
    Trace tr;
    try {
      tr = chain.run(rng);
    } catch (const std::exception& e) {
      fail(invariants, "trial " + std::to_string(trial) + ": " + e.what());
      continue;
    }
    ++invariants.cases;
    const std::string where = "trial " + std::to_string(trial);
    if (tr.steps.size() >= ps.transversal_count() + 1)
      fail(invariants, where + ": trace longer than the number of positions");
    std::vector<std::vector<std::size_t>> positions;
    for (const auto& st : tr.steps) positions.push_back(st.position);
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
      fail(invariants, where + ": a position repeats");
    for (std::size_t t = 1; t < tr.steps.size(); ++t) {
      if (tr.steps[t].phase > tr.steps[t - 1].phase) fail(invariants, where + ": phase increased");
      if (tr.steps[t].phase < tr.steps[t - 1].phase &&
          ps.id(*tr.steps[t - 1].pivot).layer != top)
        fail(invariants, where + ": phase changed at a pivot outside the top layer");
    }
    int prev = tr.initial_phase();
    if (prev != m + 1) fail(invariants, where + ": initial phase is not m + 1");
    for (const auto& ch : tr.phase_changes()) {
      if (ch.phase >= prev) fail(invariants, where + ": visited phases do not decrease");
      else transitions[static_cast<std::size_t>(prev)][static_cast<std::size_t>(ch.phase)]++;
      if (ch.phase > 0) {
        colors[static_cast<std::size_t>(ps.id(*ch.pivot).color - 1)]++;
      }
      prev = ch.phase;
    }
    if (!tr.reached_terminal) fail(invariants, where + ": terminal not reached");
    if (r >= 2) {
      for (const auto& g : good_phases(tr, chain)) {
        good_counts[static_cast<std::size_t>(g.phase)]++;
        good_durations[static_cast<std::size_t>(g.phase)].push_back(static_cast<double>(g.duration));
        ++entry.cases;
        if (!g.lower_layer_below)
          fail(entry, where + ": layer r-1 not below on entry to good phase " +
                          std::to_string(g.phase));
      }
    }
  }

  for (std::size_t id = 0; id < chain.state_count(); ++id) {
    const auto& st = chain.state(id);
    ++phase_agree.cases;
    if (Rational(st.phase) != phase_by_axis(st.position))
      fail(phase_agree, describe(ps, st.position.members()) + ": phase differs from min t");
  }

  // Law (a): chi-square over each previous phase with enough data.
  {
    double stat = 0.0;
    double df = 0.0;
    const double d = static_cast<double>(delta);
    for (int p = 1; p <= m + 1; ++p) {
      const auto& row = transitions[static_cast<std::size_t>(p)];
      const double n = static_cast<double>(std::accumulate(row.begin(), row.end(), std::uint64_t{0}));
      if (n == 0) continue;
      const double denom = static_cast<double>(r) * (p - 1) + d;
      std::vector<double> probs(static_cast<std::size_t>(p), 0.0);
      if (denom == 0) {
        probs[0] = 1.0;
      } else {
        probs[0] = d / denom;
        for (int x = 1; x < p; ++x) probs[static_cast<std::size_t>(x)] = r / denom;
      }
      bool enough = true;
      std::size_t cells = 0;
      for (int x = 0; x < p; ++x) {
        const double pr = probs[static_cast<std::size_t>(x)];
        if (pr == 0.0) {
          if (row[static_cast<std::size_t>(x)] > 0)
            fail(law, "transition " + std::to_string(p) + " -> " + std::to_string(x) +
                          " has probability 0 but was observed");
          continue;
        }
        ++cells;
        if (n * pr < 5.0) enough = false;
      }
      for (int x = p; x <= m + 1; ++x)
        if (row[static_cast<std::size_t>(x)] > 0) fail(law, "phase did not decrease");
      if (!enough || cells < 2) continue;
      for (int x = 0; x < p; ++x) {
        const double pr = probs[static_cast<std::size_t>(x)];
        if (pr == 0.0) continue;
        const double e = n * pr;
        const double o = static_cast<double>(row[static_cast<std::size_t>(x)]);
        stat += (o - e) * (o - e) / e;
      }
      df += static_cast<double>(cells - 1);
      law.cases += static_cast<std::size_t>(n);
    }
    if (df > 0) {
      const double crit = chi_square_critical(df, opts.significance);
      if (stat > crit) {
        std::ostringstream os;
        os << "chi-square " << stat << " exceeds critical value " << crit << " at df " << df;
        fail(law, os.str());
      }
    } else {
      law.skipped = true;
    }
  }

  // Law (b): uniform color.
  if (r >= 2) {
    const double n = static_cast<double>(std::accumulate(colors.begin(), colors.end(), std::uint64_t{0}));
    color.cases = static_cast<std::size_t>(n);
    if (n > 0) {
      double stat = 0.0;
      const double e = n / r;
      for (auto o : colors) stat += (static_cast<double>(o) - e) * (static_cast<double>(o) - e) / e;
      const double crit = chi_square_critical(r - 1, opts.significance);
      if (stat > crit) {
        std::ostringstream os;
        os << "chi-square " << stat << " exceeds critical value " << crit << " at df " << r - 1;
        fail(color, os.str());
      }
    }
  } else {
    color.skipped = true;
  }

  // Good-phase frequencies for 1 <= k <= m - 1.
  if (r >= 2) {
    const double n = static_cast<double>(opts.trials);
    for (int k = 1; k <= m - 1; ++k) {
      ++good.cases;
      const double phat = static_cast<double>(good_counts[static_cast<std::size_t>(k)]) / n;
      const double se = std::sqrt(phat * (1.0 - phat) / n);
      const double lower = 1.0 / (r * (static_cast<double>(delta) + static_cast<double>(k) * r));
      if (phat < lower - opts.se_margin * se) {
        std::ostringstream os;
        os << "phase " << k << ": frequency " << phat << " below " << lower;
        fail(good, os.str());
      }
    }
  } else {
    good.skipped = true;
    entry.skipped = true;
  }

  // Mean duration of good phase k against the best case of the augmented
  // process one dimension down with escape weight delta + (k - 1) r.
  if (r >= 2) {
    for (int k = 1; k <= m; ++k) {
      const auto& xs = good_durations[static_cast<std::size_t>(k)];
      if (xs.size() < 30) continue;
      ++coupling.cases;
      const SampleStats st = summarize(xs);
      const auto best = best_case_augmented(r - 1, m, delta + static_cast<std::uint64_t>((k - 1) * r),
                                            m + 1, m + 3);
      if (st.mean + opts.se_margin * st.std_error < best.value.get_d()) {
        std::ostringstream os;
        os << "phase " << k << ": mean duration " << st.mean << " below " << best.value.get_d();
        fail(coupling, os.str());
      }
    }
    if (coupling.cases == 0) coupling.skipped = true;
  } else {
    coupling.skipped = true;
  }

  rep.checks = {invariants, phase_agree, law, color, good, entry, coupling};
  return rep;
}

}  // namespace pivotlab
