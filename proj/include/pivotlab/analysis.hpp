#pragma once

// Lower-bound formulas, Monte Carlo estimation, and the verification suite
// that checks the construction's lemmas exhaustively on small instances.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pivotlab/geometry.hpp"
#include "pivotlab/grid_uso.hpp"
#include "pivotlab/process.hpp"
#include "pivotlab/random.hpp"
#include "pivotlab/rational.hpp"

namespace pivotlab {

enum class BoundFamily { uso_lemma, uso_theorem_eq1, corollary, augmented_theorem, main_theorem };

std::string to_string(BoundFamily f);
BoundFamily parse_bound_family(const std::string& s);

struct BoundParams {
  BoundFamily family = BoundFamily::main_theorem;
  int r = 1;
  int m = 1;
  std::uint64_t delta = 0;
  int n = 0;  // grid size, corollary only
};

// Natural logarithms throughout. main_theorem only accepts delta == 0.
double bound(const BoundParams& p);

enum class EstimateMethod { exact, monte_carlo };

struct ExpectationReport {
  EstimateMethod method = EstimateMethod::exact;
  std::optional<Rational> exact_value;
  double value = 0.0;
  std::size_t trials = 0;
  double std_error = 0.0;
  double ci_low = 0.0;  // 99% normal-approximation interval
  double ci_high = 0.0;
  std::optional<BoundParams> params;
  double bound = 0.0;
  bool satisfied = false;
  bool inconclusive = false;
  std::uint64_t seed = 0;
  // Orientation-averaged reports: extremes over the sampled orientations.
  std::optional<double> sample_min;
  std::optional<double> sample_max;
};

inline constexpr double kZ99 = 2.5758293035489004;

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SampleStats summarize(const std::vector<double>& xs);

// Runs sample(trial_rng) for each trial; trial i draws from
// Rng(derive_seed(seed, i)).
ExpectationReport mc_estimate(const std::function<double(Rng&)>& sample, std::size_t trials,
                              std::uint64_t seed);
ExpectationReport mc_estimate(const CombOrientation& comb, const AugmentedConfig& cfg,
                              const WalkStart& start, std::size_t trials, std::uint64_t seed);
ExpectationReport mc_estimate(ProcessChain& chain, std::size_t trials, std::uint64_t seed);

ExpectationReport exact_report(const Rational& value);

// satisfied = value >= bound, compared exactly against the double bound.
ExpectationReport compare_to_bound(const Rational& exact, const BoundParams& params);
// satisfied = mean - 3 SE >= bound; inconclusive when the CI straddles it.
ExpectationReport compare_to_bound(ExpectationReport mc, const BoundParams& params);

// Exact expected durations of independently sampled combs (uniform start).
struct UsoSample {
  std::vector<Rational> augmented;  // under cfg
  std::vector<Rational> base;       // base graph, for the augmentation identity
};
UsoSample sample_comb_durations(int r, int m, const AugmentedConfig& cfg, std::size_t combs,
                                std::uint64_t seed);
// Mean over sampled combs against uso_lemma (cfg augmented) or
// uso_theorem_eq1 (base graph); satisfied = mean - 3 SE >= bound.
ExpectationReport compare_uso_average(int r, int m, const AugmentedConfig& cfg,
                                      std::size_t combs, std::uint64_t seed);

// Mean exact base-graph duration (uniform start) of sampled combs over
// K_{n/r}^r padded to size n, against the corollary bound.
ExpectationReport compare_corollary_average(int r, int n, std::size_t combs, std::uint64_t seed);

// Minimum exact augmented duration over alpha in {lo, ..., hi}^r.
struct AdversaryResult {
  Rational value;
  std::vector<std::int64_t> alphas;
};
AdversaryResult best_case_augmented(int r, int m, std::uint64_t delta, std::int64_t lo,
                                    std::int64_t hi, std::uint64_t state_cap = 1'000'000);

// ---------------------------------------------------------------------------
// Lemma verification

struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  std::size_t cases = 0;
  std::string counterexample;
};

struct LemmaReport {
  std::string subject;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct LemmaOptions {
  // Exhaustive enumeration up to this many cases per check, sampling above.
  std::size_t exhaustive_cap = 100'000;
  // Random (position, pivot) pairs for the pivot-agreement check; 0 disables.
  std::size_t random_pivot_pairs = 0;
  std::uint64_t seed = 1;
};

// Sign structure, colors, pierced, non-degenerate, monotone, layer r-1
// (a)/(b)/(c), and pivot agreement on an arbitrary labelled point set.
LemmaReport verify_geometry_lemmas(const PointSet& ps, const LemmaOptions& opts = {});
// On A(r, m).
LemmaReport verify_lemmas(int r, int m, const LemmaOptions& opts = {});
// The same suite on the projection of A(big_r, m) onto dimension r.
LemmaReport verify_deep_lemmas(int big_r, int m, int r, const LemmaOptions& opts = {});

struct ProcessLemmaOptions {
  std::size_t trials = 100'000;
  std::uint64_t seed = 1;
  double significance = 1e-3;
  double se_margin = 3.0;
};

// Empirical checks on the augmented process from alpha = (m+1, ..., m+1):
// the visited-phase transition law, uniform color of phase-change pivots,
// good-phase frequencies, trace invariants, and the entry condition of good
// phases.
LemmaReport verify_process_lemmas(int r, int m, std::uint64_t delta,
                                  const ProcessLemmaOptions& opts = {});

// Upper critical value of the chi-square distribution.
double chi_square_critical(double df, double significance);

}  // namespace pivotlab
