#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "linbasis/cliques.hpp"
#include "linbasis/fixtures.hpp"
#include "linbasis/isomorphism.hpp"
#include "linbasis/rewrite.hpp"
#include "oracles.hpp"

using namespace linbasis;

namespace {

const Catalogue& cat() { return catalogue(); }

int red(const Web& g) { return g.edge_total(); }

// Edges present on the lhs and absent on the rhs, and the reverse.
std::pair<int, int> flips(const GraphInference& inf) {
  int down = 0, up = 0;
  for (int x = 0; x < inf.n(); ++x)
    for (int y = x + 1; y < inf.n(); ++y) {
      down += inf.lhs.edge(x, y) && !inf.rhs.edge(x, y);
      up += !inf.lhs.edge(x, y) && inf.rhs.edge(x, y);
    }
  return {down, up};
}

int conjunctions(const Formula& f) {
  auto s = print(f);
  return static_cast<int>(std::count(s.begin(), s.end(), '&'));
}

// Substitutes a unit into both sides, normalizes, and compares with the target web.
bool specializes_to(const std::string& nine, const std::string& var, bool value, const std::string& target) {
  const auto& f = cat().formula(nine);
  FormulaInference sub{substitute(f.lhs, var, value), substitute(f.rhs, var, value)};
  auto core = normalize_inference(sub).core;
  auto conv = to_graph_inference(core);
  const auto want = cat().web(target);
  return conv.inference.n() == want.n() && is_isomorphic(conv.inference, want);
}

std::vector<std::string> eight() { return {"eq1", "eq2", "eq3", "dual_eq3"}; }

std::vector<std::string> nines(bool with_duals) {
  std::vector<std::string> out;
  for (int k = 1; k <= 5; ++k) {
    out.push_back("nine_" + std::to_string(k));
    if (with_duals) out.push_back("nine_" + std::to_string(k) + "_dual");
  }
  return out;
}

// Every inference obtained by setting some variables to units and simplifying,
// keeping those whose sides share one constant-free variable set.
std::vector<GraphInference> unit_instances(const std::string& name) {
  const auto& f = cat().formula(name);
  const auto vars = variables(f);
  std::vector<GraphInference> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Formula l = f.lhs, r = f.rhs;
    std::size_t c = code;
    for (const auto& v : vars) {
      if (c % 3) {
        l = substitute(l, v, c % 3 == 1);
        r = substitute(r, v, c % 3 == 1);
      }
      c /= 3;
    }
    l = unit_normalize(l);
    r = unit_normalize(r);
    if (!is_constant_free(l) || !is_constant_free(r)) continue;
    auto lv = variables(l), rv = variables(r);
    std::sort(lv.begin(), lv.end());
    std::sort(rv.begin(), rv.end());
    if (lv != rv) continue;
    out.push_back(to_graph_inference({l, r}).inference);
  }
  return out;
}

bool has_isomorph(const std::vector<GraphInference>& xs, const GraphInference& want) {
  return std::any_of(xs.begin(), xs.end(),
                     [&](const auto& x) { return x.n() == want.n() && is_isomorphic(x, want); });
}

}  // namespace

TEST_CASE("every catalogue inference is valid in both readings") {
  CHECK(cat().formulas.size() >= 20);
  for (const auto& [name, f] : cat().formulas) {
    CAPTURE(name);
    CHECK(is_valid(f));
    if (variables(f).size() <= 10) CHECK(oracle::valid(f.lhs, f.rhs));
    if (name != "mix" && name.rfind("supermix", 0) != 0 && name != "eq10") {
      auto g = to_graph_inference(f).inference;
      CHECK(implies_cliquewise(g.lhs, g.rhs));
      CHECK_FALSE(is_trivial(g.lhs, g.rhs));
    }
  }
  for (const auto& [name, g] : cat().graph_inferences) {
    CAPTURE(name);
    CHECK(implies_cliquewise(g.lhs, g.rhs));
    CHECK_FALSE(is_trivial(g.lhs, g.rhs));
  }
  CHECK(is_trivial(cat().web("mix").lhs, cat().web("mix").rhs));
}

TEST_CASE("drawn web strings match the formulas") {
  CHECK(cat().web_strings.size() == 12);
  for (const auto& ws : cat().web_strings) {
    CAPTURE(ws.fixture);
    CAPTURE(ws.lhs);
    const auto& f = cat().formula(ws.fixture);
    CHECK(to_web(ws.lhs ? f.lhs : f.rhs, ws.order) == ws.web);
    CHECK(web_from_edge_string(ws.web.n(), edge_string(ws.web)) == ws.web);
  }
  CHECK(edge_string(web_from_edge_string(4, "rgrrgg")) == "rgrrgg");
  CHECK_THROWS_AS(web_from_edge_string(4, "rgr"), FormatError);
}

TEST_CASE("countermodels of one-step rewrites are reproduced") {
  CHECK(cat().countermodels.size() == 14);
  for (const auto& c : cat().countermodels) {
    CAPTURE(c.name);
    const auto& target = cat().formula(c.target);
    const Formula& premise = c.rewrote_lhs ? c.rewritten : target.lhs;
    const Formula& conclusion = c.rewrote_lhs ? target.rhs : c.rewritten;
    CHECK(evaluate(premise, c.countermodel));
    CHECK_FALSE(evaluate(conclusion, c.countermodel));
    std::map<std::string, int> bits;
    std::uint64_t mask = 0;
    for (const auto& v : variables(target)) {
      bits.emplace(v, static_cast<int>(bits.size()));
      if (c.countermodel.holds(v)) mask |= std::uint64_t{1} << bits[v];
    }
    CHECK(oracle::eval(premise, bits, mask));
    CHECK_FALSE(oracle::eval(conclusion, bits, mask));
    // The true set is a maximal clique of the premise web containing no clique of the conclusion.
    auto order = to_graph_inference(target).names;
    Web p = to_web(premise, order), q = to_web(conclusion, order);
    NodeSet set = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (c.countermodel.holds(order[i])) set |= NodeSet{1} << i;
    auto mc = maximal_cliques(p);
    CHECK(std::find(mc.begin(), mc.end(), set) != mc.end());
    for (auto k : maximal_cliques(q)) CHECK((k & ~set) != 0);
    CHECK_FALSE(implies_cliquewise(p, q));
  }
  // The first medial case on eq1: {z, y', x'}.
  const auto& first = cat().countermodels.front();
  CHECK(first.name == "eq1_medial_1");
  CHECK(first.countermodel.true_vars == std::set<std::string, std::less<>>{"z", "y'", "x'"});
  // Searching the rewritten inference finds that same set.
  auto conv = to_graph_inference(cat().formula("eq1"));
  auto found = find_countermodel(to_web(first.rewritten, conv.names), conv.inference.rhs);
  REQUIRE(found.has_value());
  std::set<std::string, std::less<>> names;
  for (std::size_t i = 0; i < conv.names.size(); ++i)
    if ((*found >> i) & 1) names.insert(conv.names[i]);
  CHECK(names == first.countermodel.true_vars);
}

TEST_CASE("duality of the eight-variable inferences") {
  CHECK(is_self_dual(cat().web("eq1")));
  CHECK(is_self_dual(cat().web("eq2")));
  CHECK_FALSE(is_self_dual(cat().web("eq3")));
  CHECK(is_isomorphic(dual(cat().web("eq3")), cat().web("dual_eq3")));
  for (const auto& a : eight())
    for (const auto& b : eight())
      CHECK(is_isomorphic(cat().web(a), cat().web(b)) == (a == b));
}

TEST_CASE("eight-variable inferences are not instances of switch or medial") {
  for (const auto& name : eight()) {
    CAPTURE(name);
    CHECK_FALSE(is_instance(cat().web(name), switch_rule()));
    CHECK_FALSE(is_instance(cat().web(name), medial_rule()));
  }
}

TEST_CASE("nine-variable inferences: connectives and edge counts") {
  struct Counts {
    int lhs_red, rhs_red, down, up;
  };
  const Counts want[] = {{23, 11, 14, 2}, {23, 11, 14, 2}, {23, 6, 17, 0}, {25, 12, 14, 1}, {25, 11, 15, 1}};
  for (int k = 1; k <= 5; ++k) {
    const std::string name = "nine_" + std::to_string(k);
    CAPTURE(name);
    const auto& f = cat().formula(name);
    CHECK(conjunctions(f.lhs) == 4);
    CHECK(conjunctions(f.rhs) == 3);
    auto g = cat().web(name);
    CHECK(red(g.lhs) == want[k - 1].lhs_red);
    CHECK(red(g.rhs) == want[k - 1].rhs_red);
    CHECK(flips(g) == std::pair{want[k - 1].down, want[k - 1].up});
    CHECK_FALSE(is_self_dual(g));
    // Dualizing swaps the connectives and the sides.
    const auto& d = cat().formula(name + "_dual");
    CHECK(conjunctions(d.lhs) == 5);
    CHECK(conjunctions(d.rhs) == 4);
    CHECK(flips(cat().web(name + "_dual")) == std::pair{want[k - 1].down, want[k - 1].up});
  }
  // The edge gained by the fourth and fifth is y-z'.
  for (auto name : {"nine_4", "nine_5"}) {
    auto conv = to_graph_inference(cat().formula(name));
    auto at = [&](const char* v) {
      return static_cast<int>(std::find(conv.names.begin(), conv.names.end(), v) - conv.names.begin());
    };
    CHECK_FALSE(conv.inference.lhs.edge(at("y"), at("z'")));
    CHECK(conv.inference.rhs.edge(at("y"), at("z'")));
  }
  // Same lhs for the first three; same lhs for the last two.
  CHECK(cat().web("nine_1").lhs == cat().web("nine_2").lhs);
  CHECK(cat().web("nine_1").lhs == cat().web("nine_3").lhs);
  CHECK(cat().web("nine_4").lhs == cat().web("nine_5").lhs);
}

TEST_CASE("nine-variable inferences generalise the eight-variable ones under unit substitutions") {
  CHECK(specializes_to("nine_1", "z''", false, "eq2"));
  CHECK(specializes_to("nine_1", "x'", true, "dual_eq3"));
  CHECK(specializes_to("nine_2", "z'", false, "eq1"));
  CHECK(specializes_to("nine_4", "x", false, "eq2"));
  CHECK(specializes_to("nine_5", "x", false, "eq2"));
  // The second one's dual(eq3) substitution names no variable; some variable set to true works.
  bool second = false;
  for (const auto& v : variables(cat().formula("nine_2"))) {
    try {
      second = second || specializes_to("nine_2", v, true, "dual_eq3");
    } catch (const DegenerateError&) {
    }
  }
  CHECK(second);
  // The third generalises none of them.
  for (const auto& v : variables(cat().formula("nine_3"))) {
    for (bool value : {false, true}) {
      for (const auto& target : eight()) {
        bool hit = false;
        try {
          hit = specializes_to("nine_3", v, value, target);
        } catch (const DegenerateError&) {
        }
        CHECK_FALSE(hit);
      }
    }
  }
}

TEST_CASE("unit instances: switch of every inference, medial of none, the eight-variable ones of the nine") {
  std::vector<std::vector<GraphInference>> nine_instances;
  for (const auto& name : nines(true)) {
    CAPTURE(name);
    auto inst = unit_instances(name);
    CHECK(has_isomorph(inst, switch_rule()));
    CHECK_FALSE(has_isomorph(inst, medial_rule()));
    nine_instances.push_back(std::move(inst));
  }
  for (const auto& name : eight()) {
    CAPTURE(name);
    auto inst = unit_instances(name);
    CHECK(has_isomorph(inst, switch_rule()));
    CHECK_FALSE(has_isomorph(inst, medial_rule()));
    bool covered = false;
    for (const auto& xs : nine_instances) covered = covered || has_isomorph(xs, cat().web(name));
    CHECK(covered);
  }
}

TEST_CASE("edges changed by eq3") {
  auto conv = to_graph_inference(cat().formula("eq3"));
  auto at = [&](const char* v) {
    return static_cast<int>(std::find(conv.names.begin(), conv.names.end(), v) - conv.names.begin());
  };
  const auto& g = conv.inference;
  // w'-x' and y'-z' meet under a conjunction only on the rhs; y-y' and x'-y only on the lhs.
  CHECK_FALSE(g.lhs.edge(at("w'"), at("x'")));
  CHECK(g.rhs.edge(at("w'"), at("x'")));
  CHECK_FALSE(g.lhs.edge(at("y'"), at("z'")));
  CHECK(g.rhs.edge(at("y'"), at("z'")));
  CHECK(g.lhs.edge(at("y"), at("y'")));
  CHECK_FALSE(g.rhs.edge(at("y"), at("y'")));
  CHECK(g.lhs.edge(at("x'"), at("y")));
  CHECK_FALSE(g.rhs.edge(at("x'"), at("y")));
  auto [down, up] = flips(g);
  CHECK(down > 0);
  CHECK(up > 0);
}

TEST_CASE("graph families") {
  CHECK(cat().graph_family("g4_").size() == 2);
  CHECK(cat().graph_family("g5_").size() == 16);
  auto g5 = cat().graph_family("g5_");
  for (std::size_t i = 0; i < g5.size(); ++i)
    for (std::size_t j = i + 1; j < g5.size(); ++j) CHECK_FALSE(is_isomorphic(g5[i], g5[j]));
  CHECK_THROWS_AS(cat().formula("nope"), Error);
  CHECK(supermix(2).lhs == parse_formula("a & (b0 | b1)"));
}
