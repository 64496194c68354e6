#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pivotlab/analysis.hpp"
#include "pivotlab/errors.hpp"
#include "pivotlab/grid_uso.hpp"

using namespace pivotlab;

namespace {

GridVertex v(std::initializer_list<int> c) { return GridVertex{std::vector<int>(c)}; }

Rational harmonic(int m) {
  Rational h = 0;
  for (int k = 1; k <= m; ++k) h += Rational(1, k);
  return h;
}

}  // namespace

TEST_CASE("grid spec and vertex numbering") {
  GridSpec s{{3, 2}};
  CHECK(s.dimension() == 2);
  CHECK(s.size() == 5);
  CHECK(s.vertex_count() == 6);
  for (std::uint64_t i = 0; i < 6; ++i) CHECK(vertex_index(s, vertex_at(s, i)) == i);
  CHECK(GridSpec{}.vertex_count() == 1);
}

TEST_CASE("build_comb base cases and determinism") {
  Rng rng(1);
  const auto leaf = build_comb(0, 5, rng);
  CHECK(leaf.dimension() == 0);
  CHECK(leaf.spec().vertex_count() == 1);
  CHECK(materialize(leaf).out(0).empty());

  const auto line = build_comb(1, 3, rng);
  std::vector<int> ranks(line.ranks().begin(), line.ranks().end());
  std::sort(ranks.begin(), ranks.end());
  CHECK(ranks == std::vector<int>{1, 2, 3});
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      if (a != b)
        CHECK((orient_edge(line, v({a}), v({b})) == EdgeDirection::forward) ==
              (line.rank_of(a) > line.rank_of(b)));

  Rng a(42), b(42);
  CHECK(build_comb(2, 2, a) == build_comb(2, 2, b));
  CHECK_THROWS_AS(CombOrientation(3, {1, 1, 2}, {CombOrientation(3), CombOrientation(3), CombOrientation(3)}),
                  PreconditionError);
}

TEST_CASE("orient_edge") {
  const auto id = identity_comb(1, 3);
  CHECK(orient_edge(id, v({1}), v({3})) == EdgeDirection::backward);
  CHECK(orient_edge(id, v({3}), v({1})) == EdgeDirection::forward);

  const CombOrientation swapped(2, {2, 1}, {CombOrientation(2), CombOrientation(2)});
  CHECK(orient_edge(swapped, v({1}), v({2})) == EdgeDirection::forward);

  Rng rng(7);
  const auto comb = build_comb(2, 3, rng);
  const bool forward = comb.rank_of(1) > comb.rank_of(3);
  for (int u1 = 1; u1 <= 3; ++u1)
    CHECK((orient_edge(comb, v({u1, 1}), v({u1, 3})) == EdgeDirection::forward) == forward);

  CHECK_THROWS_AS(orient_edge(comb, v({1, 1}), v({1, 1})), PreconditionError);
  CHECK_THROWS_AS(orient_edge(comb, v({1, 1}), v({2, 2})), PreconditionError);
}

TEST_CASE("out_neighbors with escape edges") {
  const auto id = identity_comb(1, 3);
  auto n = out_neighbors(id, AugmentedConfig::with_delta(0), v({1}));
  CHECK(n.grid.empty());
  CHECK(n.terminal == 1);

  n = out_neighbors(id, AugmentedConfig::with_delta(2), v({3}));
  CHECK(n.grid.size() == 2);
  CHECK(n.terminal == 2);

  n = out_neighbors(id, AugmentedConfig::with_delta(0), v({3}));
  CHECK(n.terminal == 0);
  n = out_neighbors(id, AugmentedConfig::base(), v({1}));
  CHECK(n.terminal == 0);

  n = out_neighbors(identity_comb(0, 4), AugmentedConfig::with_delta(3), v({}));
  CHECK(n.grid.empty());
  CHECK(n.terminal == 3);
}

TEST_CASE("walks") {
  Rng rng(3);
  auto w = walk(identity_comb(1, 1), AugmentedConfig::with_delta(0), v({1}), rng);
  CHECK(w.steps == 1);
  CHECK(w.reached_terminal);

  WalkOptions rec;
  rec.record = true;
  w = walk(identity_comb(1, 4), AugmentedConfig::base(), v({4}), rng, rec);
  CHECK(w.steps == w.visited.size() - 1);
  CHECK(w.visited.back() == v({1}));

  Rng a(9), b(9);
  const auto comb = build_comb(2, 3, a);
  Rng ra(5), rb(5);
  CHECK(walk(comb, AugmentedConfig::with_delta(1), UniformStart{}, ra, rec).visited ==
        walk(comb, AugmentedConfig::with_delta(1), UniformStart{}, rb, rec).visited);
}

TEST_CASE("exact expected durations") {
  CHECK(expected_duration_exact(identity_comb(1, 2), AugmentedConfig::base(), UniformStart{}) ==
        Rational(1, 2));
  CHECK(expected_duration_exact(identity_comb(1, 3), AugmentedConfig::base(), UniformStart{}) ==
        Rational(5, 6));
  CHECK(expected_duration_exact(identity_comb(0, 1), AugmentedConfig::with_delta(3), UniformStart{}) ==
        1);
  for (int m = 2; m <= 30; ++m)
    CHECK(expected_duration_exact(identity_comb(1, m), AugmentedConfig::base(), UniformStart{}) ==
          harmonic(m) - 1);

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto comb = build_comb(2, 3, rng);
    CHECK(expected_duration_exact(comb, AugmentedConfig::with_delta(0), UniformStart{}) ==
          expected_duration_exact(comb, AugmentedConfig::base(), UniformStart{}) + 1);
  }

  const auto big = expected_duration_exact(build_comb(2, 3, rng), AugmentedConfig::with_delta(1'000'000),
                                           UniformStart{});
  CHECK(big > 1);
  CHECK(big.get_d() == doctest::Approx(1.0).epsilon(1e-5));

  CHECK_THROWS_AS(expected_duration_exact(identity_comb(3, 5), AugmentedConfig::base(), UniformStart{}, 100),
                  CapacityError);
}

TEST_CASE("bound formulas") {
  CHECK(uso_lemma_bound(1, 3, 0) == doctest::Approx(std::log(4.0)));
  CHECK(uso_lemma_bound(0, 7, 5) == 1.0);
  CHECK(uso_theorem_bound(2, 4) == doctest::Approx(0.5 * std::pow(std::log(5.0), 2) - 1));
  CHECK(uso_theorem_bound(2, 4) == doctest::Approx(0.295145).epsilon(1e-5));
}

TEST_CASE("padded embedding") {
  Rng rng(13);
  const auto comb = build_comb(2, 2, rng);
  const auto same = embed_padded(comb, 4);
  const auto g = materialize(comb);
  for (std::uint64_t u = 0; u < g.vertex_count(); ++u)
    CHECK(std::vector<std::uint64_t>(same.out(u).begin(), same.out(u).end()) ==
          std::vector<std::uint64_t>(g.out(u).begin(), g.out(u).end()));

  const auto padded = embed_padded(comb, 5);
  CHECK(padded.spec().factor_sizes == std::vector<int>{3, 2});
  for (std::uint64_t u = 0; u < padded.vertex_count(); ++u) {
    const auto uv = vertex_at(padded.spec(), u);
    if (uv.coords[0] != 3) continue;
    for (std::uint64_t w = 0; w < padded.vertex_count(); ++w) {
      const auto wv = vertex_at(padded.spec(), w);
      if (wv.coords[0] == 3 || wv.coords[1] != uv.coords[1]) continue;
      const auto out = padded.out(u);
      CHECK(std::find(out.begin(), out.end(), w) != out.end());
    }
  }
  CHECK(is_acyclic(padded));
  CHECK_FALSE(find_unique_sink_violation(padded));
  CHECK(expected_duration_exact(padded, AugmentedConfig::base(), UniformStart{}) >=
        expected_duration_exact(g, AugmentedConfig::base(), UniformStart{}));

  CHECK_THROWS_AS(embed_padded(comb, 2), PreconditionError);
  CHECK_THROWS_AS(embed_padded(comb, 7), PreconditionError);
}

TEST_CASE("acyclic unique-sink orientations") {
  Rng rng(17);
  for (int r = 0; r <= 3; ++r)
    for (int m = 1; m <= (r == 3 ? 4 : 5); ++m) {
      const auto g = materialize(build_comb(r, m, rng));
      CHECK(is_acyclic(g));
      if (m <= 4) CHECK_FALSE(find_unique_sink_violation(g));
    }
  CHECK_FALSE(find_unique_sink_violation(materialize(identity_comb(3, 3))));
}

TEST_CASE("the slice mutation breaks the orientation") {
  Rng rng(1);
  const auto comb = build_comb(2, 3, rng);
  const auto bad = reverse_top_rank_in_slice(comb);
  CHECK((!is_acyclic(bad) || find_unique_sink_violation(bad)));
  CHECK_THROWS_AS(reverse_top_rank_in_slice(identity_comb(1, 3)), PreconditionError);
}

TEST_CASE("Monte Carlo agrees with the exact value") {
  Rng rng(19);
  const auto comb = build_comb(2, 3, rng);
  const auto cfg = AugmentedConfig::with_delta(1);
  const double exact = expected_duration_exact(comb, cfg, UniformStart{}).get_d();
  const auto rep = mc_estimate(comb, cfg, UniformStart{}, 10'000, 23);
  CHECK(std::abs(rep.value - exact) <= 4 * rep.std_error);
}

TEST_CASE("uniform start matches a fixed start on average over combs") {
  // Over random combs every fixed start is equivalent to a uniform one.
  const auto s = sample_comb_durations(2, 3, AugmentedConfig::base(), 400, 29);
  std::vector<double> uniform, fixed;
  for (std::size_t c = 0; c < 400; ++c) {
    Rng rng(derive_seed(29, c));
    const auto comb = build_comb(2, 3, rng);
    uniform.push_back(s.base[c].get_d());
    fixed.push_back(expected_duration_exact(comb, AugmentedConfig::base(), v({2, 2})).get_d());
  }
  const auto a = summarize(uniform);
  const auto b = summarize(fixed);
  CHECK(std::abs(a.mean - b.mean) <= 4 * std::hypot(a.std_error, b.std_error));
}
