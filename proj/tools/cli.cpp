#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "pivotlab/analysis.hpp"
#include "pivotlab/errors.hpp"
#include "pivotlab/geometry.hpp"
#include "pivotlab/grid_uso.hpp"
#include "pivotlab/process.hpp"
#include "pivotlab/serialize.hpp"

namespace pivotlab::cli {

namespace {

struct Options {
  int r = 2;
  int m = 3;
  std::optional<std::uint64_t> delta;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 100'000;
  bool exact = false;
  std::string out;
  std::string format;
  std::vector<std::int64_t> alphas;
  std::string start = "uniform";
  int deep = 0;
  int n = 0;
  std::size_t combs = 200;
  bool combs_given = false;
  bool identity = false;
  bool mutate = false;
  bool verbose = false;
  bool process = false;
  std::size_t pairs = 0;
  std::size_t cap = 100'000;
  std::string families = "uso_lemma,uso_theorem_eq1,corollary,augmented_theorem,main_theorem";
  std::string r_list = "1,2";
  std::string m_list = "2..6";
  std::string delta_list = "0";
  std::string n_list = "5,7";
};

struct Context {
  Options opts;
  std::ostream& out;
  std::ostream& err;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end) throw UsageError(std::string(name) + " must be a nonnegative integer");
  return x;
}

std::uint64_t state_cap() { return env_u64("PIVOTLAB_STATE_CAP", kDefaultStateCap); }
std::uint64_t step_budget() { return env_u64("PIVOTLAB_STEP_BUDGET", 0); }

std::uint64_t resolve_seed(Context& ctx) {
  if (ctx.opts.seed) return *ctx.opts.seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  ctx.err << "seed: " << seed << "\n";
  ctx.opts.seed = seed;
  return seed;
}

void emit(Context& ctx, const std::string& text) {
  if (ctx.opts.out.empty()) {
    ctx.out << text;
    return;
  }
  std::ofstream f(ctx.opts.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + ctx.opts.out);
  f << text;
}

void emit_json(Context& ctx, const Json& j) { emit(ctx, j.dump(2) + "\n"); }

std::string format_or(const Context& ctx, const std::string& fallback,
                      std::initializer_list<const char*> allowed) {
  const std::string f = ctx.opts.format.empty() ? fallback : ctx.opts.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("unsupported --format '" + f + "' for this command");
}

std::vector<int> parse_int_list(const std::string& s, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoi(item));
        continue;
      }
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  } catch (const std::logic_error&) {
    throw UsageError(std::string("malformed list for ") + flag + ": '" + s + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void require_rm(const Options& o, int min_r) {
  if (o.r < min_r) throw UsageError("--r must be at least " + std::to_string(min_r));
  if (o.m < 1) throw UsageError("--m must be at least 1");
}

AugmentedConfig walk_config(const Options& o) {
  return o.delta ? AugmentedConfig::with_delta(*o.delta) : AugmentedConfig::base();
}

WalkStart parse_start(const Options& o) {
  if (o.start == "uniform") return UniformStart{};
  GridVertex v;
  for (int x : parse_int_list(o.start, "--start")) v.coords.push_back(x);
  if (static_cast<int>(v.coords.size()) != o.r)
    throw UsageError("--start needs r coordinates or 'uniform'");
  for (int x : v.coords)
    if (x < 1 || x > o.m) throw UsageError("--start coordinates must lie in 1..m");
  return v;
}

Json start_json(const Options& o) {
  if (o.start == "uniform") return "uniform";
  return Json(parse_int_list(o.start, "--start"));
}

Json delta_json(const Options& o) { return o.delta ? Json(*o.delta) : Json(nullptr); }

CombOrientation make_comb(Context& ctx, std::optional<std::uint64_t>& seed) {
  const Options& o = ctx.opts;
  if (o.identity) return identity_comb(o.r, o.m);
  seed = resolve_seed(ctx);
  Rng rng(derive_seed(*seed, 0));
  return build_comb(o.r, o.m, rng);
}

Json seed_json(const std::optional<std::uint64_t>& seed) {
  return seed ? Json(*seed) : Json(nullptr);
}

int verdict(const ExpectationReport& rep) {
  return rep.params && !rep.satisfied && !rep.inconclusive ? kExitVerification : kExitOk;
}

// ---------------------------------------------------------------------------
// uso

int uso_build(Context& ctx) {
  require_rm(ctx.opts, 0);
  format_or(ctx, "json", {"json"});
  std::optional<std::uint64_t> seed;
  const CombOrientation comb = make_comb(ctx, seed);
  Json j;
  j["seed"] = seed_json(seed);
  j["comb"] = comb_to_json(comb);
  emit_json(ctx, j);
  return kExitOk;
}

int uso_walk(Context& ctx) {
  const Options& o = ctx.opts;
  require_rm(o, 0);
  const std::string fmt = format_or(ctx, "json", {"json", "jsonl"});
  std::optional<std::uint64_t> seed;
  const CombOrientation comb = make_comb(ctx, seed);
  if (!seed) seed = resolve_seed(ctx);
  const WalkStart start = parse_start(o);
  Rng rng(derive_seed(*seed, 1));
  WalkOptions wopts;
  wopts.record = fmt == "jsonl";
  wopts.step_budget = step_budget();
  const WalkOutcome w = walk(materialize(comb), walk_config(o), start, rng, wopts);
  Json head;
  head["seed"] = *seed;
  head["r"] = o.r;
  head["m"] = o.m;
  head["delta"] = delta_json(o);
  head["start"] = start_json(o);
  head["steps"] = w.steps;
  head["reached_terminal"] = w.reached_terminal;
  if (fmt == "json") emit_json(ctx, head);
  else emit(ctx, head.dump() + "\n" + walk_to_jsonl(w));
  return kExitOk;
}

int uso_expect(Context& ctx) {
  const Options& o = ctx.opts;
  require_rm(o, 0);
  format_or(ctx, "json", {"json"});
  const AugmentedConfig cfg = walk_config(o);
  Json j;
  ExpectationReport rep;
  if (o.combs_given) {
    if (o.identity) throw UsageError("--combs averages random combs; drop --identity");
    const std::uint64_t seed = resolve_seed(ctx);
    rep = compare_uso_average(o.r, o.m, cfg, o.combs, seed);
    j["seed"] = seed;
    j["combs"] = o.combs;
  } else {
    std::optional<std::uint64_t> seed;
    const CombOrientation comb = make_comb(ctx, seed);
    const WalkStart start = parse_start(o);
    if (o.exact) {
      rep = exact_report(expected_duration_exact(comb, cfg, start, state_cap()));
    } else {
      if (!seed) seed = resolve_seed(ctx);
      rep = mc_estimate(comb, cfg, start, o.trials, derive_seed(*seed, 1));
      rep.seed = *seed;
    }
    j["seed"] = seed_json(seed);
    j["start"] = start_json(o);
  }
  j["r"] = o.r;
  j["m"] = o.m;
  j["delta"] = delta_json(o);
  j["report"] = report_to_json(rep);
  emit_json(ctx, j);
  return verdict(rep);
}

int uso_verify(Context& ctx) {
  const Options& o = ctx.opts;
  require_rm(o, 0);
  format_or(ctx, "json", {"json"});
  std::optional<std::uint64_t> seed;
  const CombOrientation comb = make_comb(ctx, seed);
  if (o.mutate && o.n) throw UsageError("--mutate and --n cannot be combined");
  const DirectedGrid base = o.mutate ? reverse_top_rank_in_slice(comb) : materialize(comb);
  const DirectedGrid g = o.n ? embed_padded(comb, o.n) : base;
  Json j;
  j["seed"] = seed_json(seed);
  j["r"] = o.r;
  j["m"] = o.m;
  if (o.n) j["n"] = o.n;
  if (o.mutate) j["mutated"] = true;
  bool passed = true;

  const bool acyclic = is_acyclic(g);
  j["acyclic"] = acyclic;
  passed = passed && acyclic;

  double subgrids = 1.0;
  for (int f : g.spec().factor_sizes) subgrids *= std::pow(2.0, f) - 1.0;
  if (subgrids * static_cast<double>(g.vertex_count()) <= 1e8) {
    const auto violation = find_unique_sink_violation(g);
    j["unique_sink"] = !violation;
    if (violation) j["unique_sink_violation"] = *violation;
    passed = passed && !violation;
  } else {
    j["unique_sink"] = "skipped";
  }

  if (acyclic && g.vertex_count() <= state_cap()) {
    const Rational e_base = expected_duration_exact(g, AugmentedConfig::base(), UniformStart{});
    const Rational e_aug = expected_duration_exact(g, AugmentedConfig::with_delta(0), UniformStart{});
    const bool identity = e_aug == e_base + 1;
    j["expected_base"] = to_string(e_base);
    j["augmentation_identity"] = identity;
    passed = passed && identity;
    if (o.n) {
      const Rational e_inner = expected_duration_exact(base, AugmentedConfig::base(), UniformStart{});
      j["expected_embedded"] = to_string(e_inner);
      j["padded_not_shorter"] = e_base >= e_inner;
      passed = passed && e_base >= e_inner;
    }
  }
  j["passed"] = passed;
  emit_json(ctx, j);
  return passed ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// points

int points_dump(Context& ctx) {
  const Options& o = ctx.opts;
  require_rm(o, 1);
  const std::string fmt = format_or(ctx, "json", {"json", "csv"});
  PointSet ps = o.deep ? PointSet::project_deep(o.deep, o.m, o.r) : PointSet::construction(o.r, o.m);
  if (!o.alphas.empty()) ps = ps.augmented(o.alphas);
  if (fmt == "csv") emit(ctx, point_set_to_csv(ps));
  else emit_json(ctx, point_set_to_json(ps));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// process

ProcessConfig process_config(const Options& o) {
  require_rm(o, 1);
  if (!o.delta) {
    if (!o.alphas.empty()) throw UsageError("--alphas needs --delta (the augmented process)");
    return main_theorem_config(o.r, o.m);
  }
  return augmented_config(o.r, o.m, *o.delta, o.alphas);
}

BoundParams process_params(const Options& o) {
  BoundParams p;
  p.family = o.delta ? BoundFamily::augmented_theorem : BoundFamily::main_theorem;
  p.r = o.r;
  p.m = o.m;
  p.delta = o.delta.value_or(0);
  return p;
}

Json process_head(const Options& o, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  j["r"] = o.r;
  j["m"] = o.m;
  j["delta"] = delta_json(o);
  j["alphas"] = o.alphas;
  return j;
}

int process_run(Context& ctx) {
  const std::string fmt = format_or(ctx, "jsonl", {"json", "jsonl"});
  const ProcessConfig cfg = process_config(ctx.opts);
  const std::uint64_t seed = resolve_seed(ctx);
  Rng rng(derive_seed(seed, 0));
  RunOptions ropts;
  ropts.verbose = ctx.opts.verbose;
  ropts.step_budget = step_budget();
  ProcessChain chain(cfg);
  const Trace tr = chain.run(rng, ropts);
  Json head = process_head(ctx.opts, seed);
  head["pivots"] = tr.pivot_count();
  head["duration"] = tr.duration();
  head["reached_terminal"] = tr.reached_terminal;
  if (fmt == "jsonl") {
    emit(ctx, head.dump() + "\n" + trace_to_jsonl(tr, *cfg.points));
    return kExitOk;
  }
  head["phase_changes"] = Json::array();
  for (const auto& ch : tr.phase_changes())
    head["phase_changes"].push_back({{"time", ch.time}, {"phase", ch.phase}});
  head["good_phases"] = Json::array();
  for (const auto& g : good_phases(tr, chain))
    head["good_phases"].push_back({{"phase", g.phase},
                                   {"entry_time", g.entry_time},
                                   {"duration", g.duration},
                                   {"lower_layer_below", g.lower_layer_below}});
  emit_json(ctx, head);
  return kExitOk;
}

int process_expect(Context& ctx) {
  format_or(ctx, "json", {"json"});
  const ProcessConfig cfg = process_config(ctx.opts);
  const BoundParams params = process_params(ctx.opts);
  ExpectationReport rep;
  Json j;
  if (ctx.opts.exact) {
    rep = compare_to_bound(exact_expected_steps(cfg, state_cap()), params);
    j["seed"] = nullptr;
  } else {
    const std::uint64_t seed = resolve_seed(ctx);
    ProcessChain chain(cfg);
    rep = compare_to_bound(mc_estimate(chain, ctx.opts.trials, seed), params);
    j["seed"] = seed;
  }
  j["r"] = ctx.opts.r;
  j["m"] = ctx.opts.m;
  j["delta"] = delta_json(ctx.opts);
  j["alphas"] = ctx.opts.alphas;
  j["report"] = report_to_json(rep);
  emit_json(ctx, j);
  return verdict(rep);
}

// ---------------------------------------------------------------------------
// verify

int verify_lemmas_cmd(Context& ctx) {
  const Options& o = ctx.opts;
  require_rm(o, 1);
  format_or(ctx, "json", {"json"});
  const bool randomized = o.process || o.pairs > 0;
  const std::uint64_t seed = randomized ? resolve_seed(ctx) : o.seed.value_or(1);
  LemmaOptions lopts;
  lopts.exhaustive_cap = o.cap;
  lopts.random_pivot_pairs = o.pairs;
  lopts.seed = seed;
  Json j;
  j["seed"] = seed;
  j["reports"] = Json::array();
  bool passed = true;
  auto add = [&](const LemmaReport& rep) {
    passed = passed && rep.all_passed();
    j["reports"].push_back(lemma_report_to_json(rep));
  };
  add(o.deep ? verify_deep_lemmas(o.deep, o.m, o.r, lopts) : verify_lemmas(o.r, o.m, lopts));
  if (o.process) {
    ProcessLemmaOptions popts;
    popts.trials = o.trials;
    popts.seed = seed;
    add(verify_process_lemmas(o.r, o.m, o.delta.value_or(0), popts));
  }
  j["passed"] = passed;
  emit_json(ctx, j);
  return passed ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// bench

int bench_bounds(Context& ctx) {
  const Options& o = ctx.opts;
  format_or(ctx, "csv", {"csv"});
  const auto rs = parse_int_list(o.r_list, "--r");
  const auto ms = parse_int_list(o.m_list, "--m");
  const auto ns = parse_int_list(o.n_list, "--n");
  std::vector<std::uint64_t> deltas;
  for (int d : parse_int_list(o.delta_list, "--delta")) {
    if (d < 0) throw UsageError("--delta values must be nonnegative");
    deltas.push_back(static_cast<std::uint64_t>(d));
  }
  std::vector<BoundFamily> families;
  for (const auto& f : split(o.families)) {
    try {
      families.push_back(parse_bound_family(f));
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  const std::uint64_t seed = resolve_seed(ctx);

  std::vector<BenchRow> rows;
  bool passed = true;
  auto add = [&](ExpectationReport rep, int m_column) {
    passed = passed && verdict(rep) == kExitOk;
    BenchRow row = bench_row(rep);
    row.m = m_column;
    rows.push_back(row);
  };
  auto process_report = [&](const ProcessConfig& cfg, const BoundParams& p) {
    ProcessChain chain(cfg);
    return compare_to_bound(mc_estimate(chain, o.trials, seed), p);
  };

  for (auto family : families) {
    for (int r : rs) {
      if (family == BoundFamily::corollary) {
        for (int n : ns) add(compare_corollary_average(r, n, o.combs, seed), n);
        continue;
      }
      for (int m : ms) {
        for (auto d : deltas) {
          const bool uses_delta =
              family == BoundFamily::uso_lemma || family == BoundFamily::augmented_theorem;
          if (!uses_delta && d != 0) continue;
          BoundParams p{family, r, m, d, 0};
          switch (family) {
            case BoundFamily::uso_lemma:
              add(compare_uso_average(r, m, AugmentedConfig::with_delta(d), o.combs, seed), m);
              break;
            case BoundFamily::uso_theorem_eq1:
              add(compare_uso_average(r, m, AugmentedConfig::base(), o.combs, seed), m);
              break;
            case BoundFamily::augmented_theorem:
              if (o.exact)
                add(compare_to_bound(best_case_augmented(r, m, d, m + 1, m + 3, state_cap()).value, p), m);
              else
                add(process_report(augmented_config(r, m, d), p), m);
              break;
            case BoundFamily::main_theorem:
              if (o.exact)
                add(compare_to_bound(exact_expected_steps(main_theorem_config(r, m), state_cap()), p), m);
              else
                add(process_report(main_theorem_config(r, m), p), m);
              break;
            case BoundFamily::corollary:
              break;
          }
        }
      }
    }
  }
  emit(ctx, bench_csv(rows));
  return passed ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------

void add_rm(CLI::App* app, Options& o) {
  app->add_option("--r", o.r, "dimension r")->capture_default_str();
  app->add_option("--m", o.m, "phases / factor size m")->capture_default_str();
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "write the report to this file instead of stdout");
  app->add_option("--format", o.format, "output format");
}

void add_seed(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "master seed (generated and printed when omitted)");
}

constexpr const char* kFooter =
    "Environment:\n"
    "  PIVOTLAB_STATE_CAP    state-count cap for exact mode (default 1000000)\n"
    "  PIVOTLAB_STEP_BUDGET  step budget for walks and process runs (default: states + 1)\n"
    "Exit codes: 0 ok, 1 usage or internal error, 2 verification failure.";

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{Options{}, out, err};
  Options& o = ctx.opts;
  CLI::App app{"Random-Edge lower-bound laboratory: comb USOs and the one-line pivoting process",
               "pivotlab"};
  app.footer(kFooter);
  app.require_subcommand(1);
  std::function<int(Context&)> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                  std::function<int(Context&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->footer(kFooter);
    sub->callback([&action, fn] { action = fn; });
    add_common(sub, o);
    return sub;
  };

  CLI::App* uso = app.add_subcommand("uso", "comb unique-sink orientations of grids");
  uso->require_subcommand(1);
  for (auto* sub : {leaf(uso, "build", "build a comb and print it as JSON", uso_build),
                    leaf(uso, "walk", "one random walk on a comb", uso_walk),
                    leaf(uso, "expect", "expected walk duration on one comb or averaged over combs",
                         uso_expect),
                    leaf(uso, "verify", "acyclicity, unique sinks and the augmentation identity",
                         uso_verify)}) {
    add_rm(sub, o);
    add_seed(sub, o);
    sub->add_flag("--identity", o.identity, "use every permutation the identity");
    if (sub->get_name() != "build") {
      sub->add_option("--delta", o.delta, "escape weight; selects the augmented graph");
      sub->add_option("--start", o.start, "'uniform' or comma-separated coordinates");
      sub->add_option("--trials", o.trials, "Monte Carlo walks")->capture_default_str();
      sub->add_flag("--exact", o.exact, "exact rational expectation");
      sub->add_option("--combs", o.combs, "average over this many sampled combs")
          ->each([&o](const std::string&) { o.combs_given = true; });
      sub->add_option("--n", o.n, "pad the grid to total size n (verify)");
      if (sub->get_name() == "verify")
        sub->add_flag("--mutate", o.mutate,
                      "fault injection: reverse the top-level rank rule in the slice u_1 = 1");
    }
  }

  CLI::App* points = app.add_subcommand("points", "the point set A(r, m)");
  points->require_subcommand(1);
  CLI::App* dump = leaf(points, "dump", "print the points (json or csv)", points_dump);
  add_rm(dump, o);
  dump->add_option("--alphas", o.alphas, "adversary points alpha_i e_i")->delimiter(',');
  dump->add_option("--deep", o.deep, "project A(deep, m) onto dimension r");

  CLI::App* process = app.add_subcommand("process", "the random pivoting process");
  process->require_subcommand(1);
  for (auto* sub : {leaf(process, "run", "one trace (jsonl or json)", process_run),
                    leaf(process, "expect", "expected number of steps against the bound",
                         process_expect)}) {
    add_rm(sub, o);
    add_seed(sub, o);
    sub->add_option("--delta", o.delta, "escape weight; selects the augmented process");
    sub->add_option("--alphas", o.alphas, "adversary start alpha_i e_i (augmented only)")
        ->delimiter(',');
    sub->add_option("--trials", o.trials, "Monte Carlo runs")->capture_default_str();
    sub->add_flag("--exact", o.exact, "exact Markov-chain solve");
    sub->add_flag("--verbose", o.verbose, "record full below sets in traces");
  }

  CLI::App* verify = app.add_subcommand("verify", "lemma verification");
  verify->require_subcommand(1);
  CLI::App* lemmas = leaf(verify, "lemmas", "run the lemma suite and print a JSON report",
                          verify_lemmas_cmd);
  add_rm(lemmas, o);
  add_seed(lemmas, o);
  lemmas->add_option("--deep", o.deep, "run on the projection of A(deep, m) to dimension r");
  lemmas->add_flag("--process", o.process, "also run the statistical process checks");
  lemmas->add_option("--delta", o.delta, "escape weight for the process checks");
  lemmas->add_option("--trials", o.trials, "process traces")->capture_default_str();
  lemmas->add_option("--pairs", o.pairs, "extra random pivot pairs");
  lemmas->add_option("--cap", o.cap, "exhaustive enumeration cap per check")->capture_default_str();

  CLI::App* bench = app.add_subcommand("bench", "bound sweeps");
  bench->require_subcommand(1);
  CLI::App* bounds = leaf(bench, "bounds", "CSV sweep of values against bounds", bench_bounds);
  add_seed(bounds, o);
  bounds->add_option("--family", o.families, "comma-separated bound families")->capture_default_str();
  bounds->add_option("--r", o.r_list, "list of r, e.g. 1,2 or 1..3")->capture_default_str();
  bounds->add_option("--m", o.m_list, "list of m")->capture_default_str();
  bounds->add_option("--delta", o.delta_list, "list of delta")->capture_default_str();
  bounds->add_option("--n", o.n_list, "grid sizes for the corollary (reported in the m column)")
      ->capture_default_str();
  bounds->add_option("--combs", o.combs, "combs per USO row")->capture_default_str();
  bounds->add_option("--trials", o.trials, "Monte Carlo runs per process row")->capture_default_str();
  bounds->add_flag("--exact", o.exact, "exact process rows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!action) return kExitUsage;
  try {
    return action(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace pivotlab::cli
