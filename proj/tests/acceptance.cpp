// Acceptance suite: one PASS/FAIL line per criterion. argv[1] is the CLI binary.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pivotlab/analysis.hpp"
#include "pivotlab/grid_uso.hpp"
#include "pivotlab/process.hpp"

using namespace pivotlab;

namespace {

constexpr std::uint64_t kSeed = 20261014;

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> body;
};

std::string str(const Rational& q) { return q.get_str(); }

std::string where(int r, int m, std::uint64_t delta) {
  std::ostringstream os;
  os << "(r=" << r << ", m=" << m << ", delta=" << delta << ")";
  return os.str();
}

void require_checks(Outcome& out, const LemmaReport& rep, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    const CheckResult* c = rep.find(name);
    if (!c) {
      out.fail(rep.subject + ": missing check " + name);
    } else if (c->skipped) {
      out.fail(rep.subject + ": " + name + " skipped");
    } else if (!c->passed) {
      out.fail(rep.subject + ": " + name + ": " + c->counterexample);
    }
  }
  if (!rep.all_passed()) out.fail(rep.subject + ": a check failed");
}

const std::vector<std::string> kGeometryChecks = {"sign structure", "colors",      "pierced",
                                                  "non-degenerate", "monotone",    "pivot agreement",
                                                  "layer r-1"};

LemmaOptions exhaustive() {
  LemmaOptions o;
  o.exhaustive_cap = 100'000'000;
  return o;
}

Outcome geometry_suite() {
  Outcome out;
  const std::array<std::pair<int, int>, 4> sizes{{{2, 3}, {2, 4}, {3, 2}, {3, 3}}};
  for (auto [r, m] : sizes) require_checks(out, verify_lemmas(r, m, exhaustive()), kGeometryChecks);
  require_checks(out, verify_deep_lemmas(3, 3, 2, exhaustive()), kGeometryChecks);
  require_checks(out, verify_deep_lemmas(4, 3, 2, exhaustive()), kGeometryChecks);
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  Rational h = 1;
  for (int m = 2; m <= 100; ++m) {
    h += Rational(1, m);
    const Rational e = expected_duration_exact(identity_comb(1, m), AugmentedConfig::base(), UniformStart{});
    if (e != h - 1) out.fail("m=" + std::to_string(m) + ": " + str(e) + " != H_m - 1");
    BoundParams p{BoundFamily::uso_theorem_eq1, 1, m, 0, 0};
    if (!compare_to_bound(e, p).satisfied) out.fail("m=" + std::to_string(m) + ": below ln(m+1) - 1");
  }
  return out;
}

std::uint64_t comb_seed(int r, int m) { return derive_seed(kSeed, static_cast<std::uint64_t>(100 * r + m)); }

Outcome criterion2() {
  Outcome out;
  for (int r = 1; r <= 2; ++r)
    for (std::uint64_t d = 0; d <= 2; ++d)
      for (int m = 2; m <= 8; ++m) {
        const auto rep = compare_uso_average(r, m, AugmentedConfig::with_delta(d), 200, comb_seed(r, m));
        if (!rep.satisfied)
          out.fail(where(r, m, d) + ": mean " + std::to_string(rep.value) + " - 3 SE < " +
                   std::to_string(rep.bound));
      }
  return out;
}

Outcome criterion3() {
  Outcome out;
  for (int r = 1; r <= 2; ++r)
    for (int m = 2; m <= 8; ++m) {
      const auto s = sample_comb_durations(r, m, AugmentedConfig::with_delta(0), 200, comb_seed(r, m));
      for (std::size_t c = 0; c < s.base.size(); ++c)
        if (s.augmented[c] != s.base[c] + 1)
          out.fail(where(r, m, 0) + " comb " + std::to_string(c) + ": " + str(s.augmented[c]) +
                   " != " + str(s.base[c]) + " + 1");
    }
  return out;
}

Outcome criterion4() {
  Outcome out;
  const int r = 2;
  for (int n : {5, 7}) {
    const int m = n / r;
    for (std::uint64_t c = 0; c < 50; ++c) {
      Rng rng(derive_seed(kSeed ^ 0x4000, static_cast<std::uint64_t>(n) * 1000 + c));
      const auto comb = build_comb(r, m, rng);
      const auto padded = embed_padded(comb, n);
      const std::string tag = "n=" + std::to_string(n) + " comb " + std::to_string(c);
      if (!is_acyclic(padded)) out.fail(tag + ": padded grid has a cycle");
      if (auto v = find_unique_sink_violation(padded)) out.fail(tag + ": " + *v);
      const Rational big = expected_duration_exact(padded, AugmentedConfig::base(), UniformStart{});
      const Rational small = expected_duration_exact(comb, AugmentedConfig::base(), UniformStart{});
      if (big < small) out.fail(tag + ": padded " + str(big) + " < embedded " + str(small));
    }
  }
  return out;
}

Outcome criterion6() {
  Outcome out;
  require_checks(out, verify_lemmas(2, 4, exhaustive()), {"pivot agreement"});
  LemmaOptions o = exhaustive();
  o.random_pivot_pairs = 10'000;
  o.seed = kSeed;
  require_checks(out, verify_lemmas(3, 3, o), {"pivot agreement"});
  return out;
}

Outcome criterion7() {
  Outcome out;
  auto check = [&](int r, int m) {
    const Rational e = exact_expected_steps(main_theorem_config(r, m));
    const auto rep = compare_to_bound(e, BoundParams{BoundFamily::main_theorem, r, m, 0, 0});
    if (!rep.satisfied) out.fail(where(r, m, 0) + ": " + str(e) + " < " + std::to_string(rep.bound));
  };
  for (int m = 2; m <= 50; ++m) check(1, m);
  for (int m = 2; m <= 8; ++m) check(2, m);
  return out;
}

Outcome criterion8() {
  Outcome out;
  for (int r = 1; r <= 2; ++r)
    for (std::uint64_t d = 0; d <= 2; ++d)
      for (int m = 2; m <= 6; ++m) {
        const auto best = best_case_augmented(r, m, d, m + 1, m + 3);
        const auto rep = compare_to_bound(best.value, BoundParams{BoundFamily::augmented_theorem, r, m, d, 0});
        if (!rep.satisfied)
          out.fail(where(r, m, d) + ": " + str(best.value) + " < " + std::to_string(rep.bound));
      }
  return out;
}

Outcome criterion9() {
  Outcome out;
  for (std::uint64_t d : {0u, 2u}) {
    ProcessLemmaOptions o;
    o.trials = 100'000;
    o.seed = derive_seed(kSeed, d);
    require_checks(out, verify_process_lemmas(2, 6, d, o),
                   {"phase transition law", "phase-change pivot color", "good-phase frequency"});
  }
  return out;
}

struct Captured {
  int status = -1;
  std::string out;
};

Captured capture(const std::string& cmd) {
  Captured c;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
  c.status = pclose(pipe);
  return c;
}

Outcome criterion10(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.fail("no CLI binary given");
    return out;
  }
  const std::vector<std::string> cmds = {
      "uso walk --r 2 --m 4 --delta 1 --seed 11 --format jsonl",
      "uso expect --r 2 --m 4 --delta 1 --trials 5000 --seed 11",
      "verify lemmas --r 3 --m 3 --pairs 2000 --seed 11",
      "process run --r 2 --m 5 --delta 2 --seed 11 --format jsonl",
      "bench bounds --family uso_lemma,corollary --r 2 --m 3..4 --n 5 --combs 20 --seed 11",
  };
  for (const auto& c : cmds) {
    const std::string full = "'" + cli + "' " + c + " 2>/dev/null";
    const auto a = capture(full);
    const auto b = capture(full);
    if (a.status != 0 || b.status != 0) out.fail(c + ": nonzero exit");
    else if (a.out.empty()) out.fail(c + ": empty output");
    else if (a.out != b.out) out.fail(c + ": outputs differ");
  }
  const auto gen = capture("'" + cli + "' process run --r 2 --m 3 --format json 2>&1 1>/dev/null");
  const auto pos = gen.out.find("seed: ");
  if (pos == std::string::npos) {
    out.fail("generated seed not printed");
  } else {
    const std::string seed = std::to_string(std::stoull(gen.out.substr(pos + 6)));
    const auto a = capture("'" + cli + "' process run --r 2 --m 3 --format json --seed " + seed + " 2>/dev/null");
    if (a.out.find("\"seed\": " + seed) == std::string::npos) out.fail("generated seed not embedded");
  }
  return out;
}

Outcome criterion11() {
  Outcome out;
  for (auto [r, m] : std::array<std::pair<int, int>, 2>{{{2, 3}, {3, 3}}}) {
    const auto a = PointSet::construction(r, m);
    std::vector<PointId> ids;
    std::vector<Point> pts;
    for (std::size_t q = 0; q < a.size(); ++q) {
      ids.push_back(a.id(q));
      pts.push_back(a.point(q));
    }
    auto& tail = pts[*a.find(PointId{1, 1, 1})].coords.back();
    tail = -tail;
    const auto bad = PointSet::custom(r, m, a.top_layer(), ids, pts);
    if (verify_geometry_lemmas(bad, exhaustive()).all_passed())
      out.fail("tail-sign mutation at " + where(r, m, 0) + " not detected");
  }
  Rng rng(1);
  const auto comb = build_comb(2, 3, rng);
  const auto good = materialize(comb);
  if (!is_acyclic(good) || find_unique_sink_violation(good)) out.fail("unmutated comb rejected");
  const auto bad = reverse_top_rank_in_slice(comb);
  if (is_acyclic(bad) && !find_unique_sink_violation(bad)) out.fail("comb mutation not detected");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria = {
      {1, "USO r=1 closed form H_m - 1", 1, criterion1},
      {2, "USO inner lemma over 200 combs", 120, criterion2},
      {3, "augmentation identity", 0, criterion3},
      {4, "corollary embedding", 60, criterion4},
      {5, "geometry lemma suite", 120, geometry_suite},
      {6, "pivot equivalence", 0, criterion6},
      {7, "main theorem conformance", 120, criterion7},
      {8, "augmented theorem conformance", 120, criterion8},
      {9, "phase-law conformance", 120, criterion9},
      {10, "reproducibility", 0, [&] { return criterion10(cli); }},
      {11, "sensitivity to mutations", 0, criterion11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s)
      o.fail("runtime " + std::to_string(secs) + " s over limit " + std::to_string(c.limit_s) + " s");
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " ["
              << timing << "]";
    if (!o.passed) std::cout << "  " << o.detail;
    std::cout << std::endl;
    if (!o.passed) ++failures;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
