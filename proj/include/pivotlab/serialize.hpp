#pragma once

// JSON, JSONL and CSV encodings of combs, point sets, traces and reports.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pivotlab/analysis.hpp"
#include "pivotlab/geometry.hpp"
#include "pivotlab/grid_uso.hpp"
#include "pivotlab/process.hpp"

namespace pivotlab {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits.
double round12(double x);
std::string format_double(double x);

// {r, m, perm, children}, perm[v-1] = rank of value v.
Json comb_to_json(const CombOrientation& comb);
CombOrientation comb_from_json(const Json& j);

// {r, m, alphas, points: [{i, j, k, coords}]}, coordinates as decimal strings.
Json point_set_to_json(const PointSet& ps);
// Header i,j,k,x1..xr.
std::string point_set_to_csv(const PointSet& ps);

Json point_id_json(const PointId& id);

// One {"t", "S", "pivot", "below", "phase"} object per line; pivot is
// [i,j,k], "inf" for the terminal, or null where the plain process stops.
std::string trace_to_jsonl(const Trace& trace, const PointSet& ps);
// One vertex tuple per line, then "inf" if the terminal was reached.
std::string walk_to_jsonl(const WalkOutcome& outcome);

Json report_to_json(const ExpectationReport& rep);
Json lemma_report_to_json(const LemmaReport& rep);

struct BenchRow {
  std::string family;
  int r = 0;
  int m = 0;
  std::uint64_t delta = 0;
  std::string value;  // "p/q" for exact rows, a float otherwise
  double ci_low = 0.0;
  double ci_high = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
};

BenchRow bench_row(const ExpectationReport& rep);
// Rows sorted by (family, r, m, delta) under a fixed header.
std::string bench_csv(std::vector<BenchRow> rows);

}  // namespace pivotlab
