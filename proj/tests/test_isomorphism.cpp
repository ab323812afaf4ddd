#include "doctest.h"

#include "linbasis/enumeration.hpp"
#include "linbasis/fixtures.hpp"
#include "linbasis/isomorphism.hpp"
#include "oracles.hpp"

using namespace linbasis;

namespace {

Permutation perm(std::vector<int> v) { return Permutation::from_values(v); }

Web path3() {
  Web g(3);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  return g;
}

}  // namespace

TEST_CASE("permutations") {
  CHECK(perm({2, 0, 1}).inverse() == perm({1, 2, 0}));
  CHECK((perm({1, 0, 2}) * perm({0, 2, 1}))[1] == 2);
  CHECK(Permutation::unpack(5, perm({4, 2, 0, 1, 3}).pack()) == perm({4, 2, 0, 1, 3}));
  CHECK(format_permutation(perm({1, 2, 0})) == "1 2 0");
  CHECK_THROWS_AS(perm({0, 0, 1}), RangeError);
  CHECK(transposition(4, 1, 3) == perm({0, 3, 2, 1}));
}

TEST_CASE("applying permutations") {
  Web g = path3();
  CHECK(apply(Permutation::identity(3), g) == g);
  Web e(2);
  e.set_edge(0, 1);
  CHECK(apply(perm({1, 0}), e) == e);
  Web rotated = apply(perm({1, 2, 0}), g);
  CHECK(rotated.edge(1, 2));
  CHECK(rotated.edge(2, 0));
  CHECK_FALSE(rotated.edge(0, 1));
  CHECK_THROWS_AS(apply(Permutation::identity(2), g), SizeMismatchError);

  std::mt19937 rng(1);
  for (int i = 0; i < 500; ++i) {
    Web h = from_numeric(6, rng() % (1u << 15));
    std::vector<int> a(6), b(6);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    Permutation p = perm(a), q = perm(b);
    REQUIRE(apply(q * p, h) == apply(q, apply(p, h)));
    REQUIRE(apply(p, h) == oracle::permute(h, a));
    REQUIRE(apply_code(p, static_cast<std::uint64_t>(numeric(h))) == numeric(apply(p, h)));
  }
}

TEST_CASE("least forms") {
  Web empty(4);
  CHECK(least_of(empty).web == empty);
  CHECK(least_of(empty).perm.is_identity());
  // All labellings of the path on four nodes share one least form.
  Web path(4);
  path.set_edge(0, 1);
  path.set_edge(1, 2);
  path.set_edge(2, 3);
  Web want = oracle::least(path);
  for (const auto& v : oracle::permutations(4)) {
    Web h = oracle::permute(path, v);
    auto lf = least_of(h);
    REQUIRE(lf.web == want);
    REQUIRE(apply(lf.perm, h) == lf.web);
  }
  CHECK(least_of(want).web == want);
  CHECK(least_of(want).perm.is_identity());
}

TEST_CASE("least map agrees with independent least forms on every graph up to six nodes") {
  for (int n = 1; n <= 6; ++n) {
    auto codes = all_graph_codes(n);
    auto lm = build_least_map(n, codes);
    REQUIRE(lm.size() == codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
      Web g = from_numeric(n, codes[i]);
      Web want = oracle::least(g);
      REQUIRE(lm.code(lm.least_index(i)) == numeric(want));
      REQUIRE(apply(lm.perm(i), g) == want);
      if (lm.is_least(i)) REQUIRE(lm.perm(i).is_identity());
    }
  }
}

TEST_CASE("least counts of P4-free graphs") {
  const std::size_t want[] = {1, 1, 2, 4, 10, 24, 66, 180};
  for (int n = 0; n <= 7; ++n) {
    auto lm = build_least_map(n, p4_free_codes(n));
    CHECK(lm.least_count() == want[n]);
  }
  CHECK_THROWS_AS(build_least_map(3, {3, 1}), NotSortedError);
}

TEST_CASE("least inferences") {
  Web k3 = complete_graph(3);
  int passing = 0;
  // Single-edge graphs on three nodes are pairwise isomorphic; exactly one labelling passes.
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    Web s(3);
    s.set_edge(a, b);
    passing += is_least_inference({k3, s});
  }
  CHECK(passing == 1);
  auto sw = canonical(switch_rule());
  CHECK(is_least_inference(sw));
  CHECK_THROWS_AS(is_least_inference({path3(), Web(3)}), LhsNotLeastError);
  CHECK(automorphisms(k3).size() == 6);
}

TEST_CASE("inference isomorphism and duality") {
  const auto& cat = catalogue();
  CHECK(is_self_dual(cat.web("eq1")));
  CHECK(is_self_dual(cat.web("eq2")));
  CHECK_FALSE(is_self_dual(cat.web("eq3")));
  CHECK(is_isomorphic(dual(cat.web("eq3")), cat.web("dual_eq3")));
  CHECK_FALSE(is_isomorphic(cat.web("eq3"), cat.web("dual_eq3")));
  CHECK_FALSE(is_isomorphic(cat.web("eq1"), cat.web("eq2")));
  CHECK_THROWS_AS(is_isomorphic(switch_rule(), medial_rule()), SizeMismatchError);

  std::mt19937 rng(9);
  for (int i = 0; i < 300; ++i) {
    GraphInference inf{from_numeric(5, rng() % 1024), from_numeric(5, rng() % 1024)};
    REQUIRE(is_self_dual(inf) == is_self_dual(dual(inf)));
    std::vector<int> v(5);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    REQUIRE(is_isomorphic(inf, apply(perm(v), inf)));
    REQUIRE(canonical(inf) == canonical(apply(perm(v), inf)));
  }
}

TEST_CASE("classification is independent of input order") {
  std::mt19937 rng(10);
  std::vector<GraphInference> infs;
  for (int i = 0; i < 40; ++i) {
    GraphInference base{from_numeric(4, rng() % 64), from_numeric(4, rng() % 64)};
    for (int k = 0; k < 3; ++k) {
      std::vector<int> v(4);
      std::iota(v.begin(), v.end(), 0);
      std::shuffle(v.begin(), v.end(), rng);
      infs.push_back(apply(perm(v), base));
    }
  }
  auto a = classify(infs);
  std::shuffle(infs.begin(), infs.end(), rng);
  auto b = classify(infs);
  REQUIRE(a.size() == b.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].representative == b[i].representative);
    REQUIRE(a[i].members == b[i].members);
    total += a[i].members;
    for (std::size_t j = i + 1; j < a.size(); ++j) REQUIRE_FALSE(is_isomorphic(a[i].canonical, a[j].canonical));
  }
  CHECK(total == infs.size());
  CHECK(dedup_inferences(infs).size() == a.size());
}
