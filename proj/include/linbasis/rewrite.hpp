#pragma once

// Graph inferences used as rewrite rules: instance matching, one-step
// rewriting, rule sets and derivation checking.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linbasis/graph.hpp"

namespace linbasis {

inline constexpr std::string_view kSwitchFormula = "x & (y | z) -> (x & y) | z";
inline constexpr std::string_view kMedialFormula = "(w & x) | (y & z) -> (w | y) & (x | z)";

GraphInference switch_rule();
GraphInference medial_rule();

// True iff some node set M is a module of both sides, the sides agree outside
// M, and M splits into rule.n() labelled nonempty parts such that edges across
// parts follow the rule's lhs (resp. rhs) and each part induces the same
// subgraph on both sides.
bool is_instance(const GraphInference& candidate, const GraphInference& rule);

// Every h with is_instance({g, h}, rule), sorted by numeric.
std::vector<Web> apply_rule_all(const Web& g, const GraphInference& rule);

struct Rule {
  std::string name;
  GraphInference inference;
  std::optional<FormulaInference> formula;
};

struct RuleSet {
  std::string name;
  // "builtin", "file" or "basis(n)".
  std::string source;
  std::vector<Rule> rules;

  const Rule* find(std::string_view rule_name) const;
  std::size_t size() const { return rules.size(); }
  // Hex digest over the canonical rule lines.
  std::string digest() const;
};

// Stores the inference in least-inference form (when n <= 10).
Rule make_rule(std::string name, const GraphInference& inf);
Rule make_rule(std::string name, const FormulaInference& inf);

// "builtin:sm" (switch, medial) or "builtin:none".
RuleSet builtin_rules(std::string_view spec);
// Lines "name; n; N_lhs; N_rhs" or "name; formula <lhs> -> <rhs>"; blank lines,
// '#' comments and stratum headers ("M k", "G k") are skipped.
RuleSet parse_rules(std::string_view text, std::string name = "file");
RuleSet load_rules(const std::string& path);
// A builtin spec or a path.
RuleSet resolve_rules(const std::string& spec);
std::string format_rule(const Rule& rule);
std::string format_rules(const RuleSet& rules);

bool derivable_one_step(const GraphInference& inf, const RuleSet& rules);
// Index of the first rule the inference is an instance of.
std::optional<std::size_t> first_matching_rule(const GraphInference& inf, const RuleSet& rules);

struct DerivationStep {
  enum class Kind { ac, rule };
  Kind kind = Kind::ac;
  std::string rule_name;
  Web result;
};

struct Derivation {
  int n = 0;
  Web start;
  std::vector<DerivationStep> steps;
  // Variable names of the start formula, when given as a formula.
  std::vector<std::string> names;
};

// Header "n=<n>", then "start <N|formula>", then lines "rule <name> -> <N|formula>"
// or "ac -> <N|formula>". Formulas are placed on nodes in the first-occurrence
// order of the start formula.
Derivation parse_derivation(std::string_view text);
Derivation load_derivation(const std::string& path);

struct StepVerdict {
  std::size_t index = 0;
  bool ok = false;
  std::string reason;
};

struct DerivationReport {
  bool ok = true;
  std::vector<StepVerdict> steps;
};

// Checks every step; AC steps need identical webs, rule steps an instance of the named rule.
DerivationReport check_derivation(const Derivation& d, const RuleSet& rules);
// Throws StepError at the first failing step.
void require_derivation(const Derivation& d, const RuleSet& rules);

}  // namespace linbasis
