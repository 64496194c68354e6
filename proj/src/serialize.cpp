#include "pivotlab/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include "pivotlab/errors.hpp"

namespace pivotlab {

double round12(double x) { return std::strtod(format_double(x).c_str(), nullptr); }

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json comb_to_json(const CombOrientation& comb) {
  Json j;
  j["r"] = comb.dimension();
  j["m"] = comb.factor_size();
  j["perm"] = Json::array();
  for (int v : comb.ranks()) j["perm"].push_back(v);
  j["children"] = Json::array();
  for (const auto& c : comb.children()) j["children"].push_back(comb_to_json(c));
  return j;
}

CombOrientation comb_from_json(const Json& j) {
  const int r = j.at("r").get<int>();
  const int m = j.at("m").get<int>();
  if (r < 0 || m < 1) throw PreconditionError("comb JSON needs r >= 0 and m >= 1");
  if (r == 0) return CombOrientation(m);
  std::vector<int> ranks = j.at("perm").get<std::vector<int>>();
  std::vector<CombOrientation> children;
  for (const auto& c : j.at("children")) {
    children.push_back(comb_from_json(c));
    if (children.back().dimension() != r - 1 || children.back().factor_size() != m)
      throw PreconditionError("comb JSON child has the wrong shape");
  }
  return CombOrientation(m, std::move(ranks), std::move(children));
}

Json point_id_json(const PointId& id) { return Json::array({id.color, id.layer, id.phase}); }

Json point_set_to_json(const PointSet& ps) {
  Json j;
  j["r"] = ps.dimension();
  j["m"] = ps.m();
  j["alphas"] = Json::array();
  for (auto a : ps.alphas()) j["alphas"].push_back(a);
  j["points"] = Json::array();
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const PointId& id = ps.id(q);
    Json p;
    p["i"] = id.color;
    p["j"] = id.layer;
    p["k"] = id.phase;
    p["coords"] = Json::array();
    for (const auto& x : ps.point(q).coords) p["coords"].push_back(x.get_str());
    j["points"].push_back(std::move(p));
  }
  return j;
}

std::string point_set_to_csv(const PointSet& ps) {
  std::ostringstream os;
  os << "i,j,k";
  for (int a = 1; a <= ps.dimension(); ++a) os << ",x" << a;
  os << "\n";
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const PointId& id = ps.id(q);
    os << id.color << "," << id.layer << "," << id.phase;
    for (const auto& x : ps.point(q).coords) os << "," << x.get_str();
    os << "\n";
  }
  return os.str();
}

std::string trace_to_jsonl(const Trace& trace, const PointSet& ps) {
  std::string out;
  for (const auto& st : trace.steps) {
    Json j;
    j["t"] = st.t;
    j["S"] = Json::array();
    for (auto q : st.position) j["S"].push_back(point_id_json(ps.id(q)));
    if (!st.has_pivot) j["pivot"] = nullptr;
    else if (!st.pivot) j["pivot"] = "inf";
    else j["pivot"] = point_id_json(ps.id(*st.pivot));
    j["below"] = st.below_count;
    j["phase"] = st.phase;
    if (!st.below.empty()) {
      j["below_set"] = Json::array();
      for (auto q : st.below) j["below_set"].push_back(point_id_json(ps.id(q)));
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::string walk_to_jsonl(const WalkOutcome& outcome) {
  std::string out;
  for (const auto& v : outcome.visited) out += Json(v.coords).dump() + "\n";
  if (outcome.reached_terminal) out += "\"inf\"\n";
  return out;
}

Json report_to_json(const ExpectationReport& rep) {
  Json j;
  j["method"] = rep.method == EstimateMethod::exact ? "exact" : "monte_carlo";
  if (rep.exact_value) j["value"] = to_string(*rep.exact_value);
  else j["value"] = round12(rep.value);
  j["value_float"] = round12(rep.value);
  if (rep.method == EstimateMethod::monte_carlo) {
    j["trials"] = rep.trials;
    j["std_error"] = round12(rep.std_error);
    j["ci_low"] = round12(rep.ci_low);
    j["ci_high"] = round12(rep.ci_high);
    j["seed"] = rep.seed;
  }
  if (rep.sample_min) j["sample_min"] = round12(*rep.sample_min);
  if (rep.sample_max) j["sample_max"] = round12(*rep.sample_max);
  if (rep.params) {
    Json p;
    p["family"] = to_string(rep.params->family);
    p["r"] = rep.params->r;
    p["m"] = rep.params->m;
    p["delta"] = rep.params->delta;
    if (rep.params->family == BoundFamily::corollary) p["n"] = rep.params->n;
    j["params"] = p;
    j["bound"] = round12(rep.bound);
    j["satisfied"] = rep.satisfied;
    if (rep.method == EstimateMethod::monte_carlo) j["inconclusive"] = rep.inconclusive;
  }
  return j;
}

Json lemma_report_to_json(const LemmaReport& rep) {
  Json j;
  j["subject"] = rep.subject;
  j["passed"] = rep.all_passed();
  j["checks"] = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["skipped"] = c.skipped;
    cj["cases"] = c.cases;
    if (!c.passed) cj["counterexample"] = c.counterexample;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

BenchRow bench_row(const ExpectationReport& rep) {
  BenchRow row;
  if (rep.params) {
    row.family = to_string(rep.params->family);
    row.r = rep.params->r;
    row.m = rep.params->m;
    row.delta = rep.params->delta;
  }
  row.value = rep.exact_value ? to_string(*rep.exact_value) : format_double(rep.value);
  row.ci_low = rep.ci_low;
  row.ci_high = rep.ci_high;
  row.bound = rep.bound;
  row.satisfied = rep.satisfied;
  row.seed = rep.seed;
  row.trials = rep.trials;
  return row;
}

std::string bench_csv(std::vector<BenchRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.family, a.r, a.m, a.delta) < std::tie(b.family, b.r, b.m, b.delta);
  });
  std::ostringstream os;
  os << "family,r,m,delta,value,ci_low,ci_high,bound,satisfied,seed,trials\n";
  for (const auto& row : rows)
    os << row.family << "," << row.r << "," << row.m << "," << row.delta << "," << row.value << ","
       << format_double(row.ci_low) << "," << format_double(row.ci_high) << ","
       << format_double(row.bound) << "," << (row.satisfied ? "true" : "false") << "," << row.seed
       << "," << row.trials << "\n";
  return os.str();
}

}  // namespace pivotlab
