#pragma once

// Linear Boolean formulae: each variable occurs in at most one leaf.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "linbasis/error.hpp"

namespace linbasis {

enum class FormulaKind : std::uint8_t { top, bot, var, neg_var, conj, disj };

class Formula {
 public:
  // The constant T.
  Formula();
  static Formula top();
  static Formula bot();
  static Formula var(std::string name);
  static Formula neg_var(std::string name);
  // Throws LinearityError when the operands share a variable.
  static Formula conj(const Formula& left, const Formula& right);
  static Formula disj(const Formula& left, const Formula& right);
  static Formula binary(FormulaKind kind, const Formula& left, const Formula& right);

  FormulaKind kind() const;
  bool is_leaf() const;
  bool is_constant() const;
  bool is_binary() const;

  // Only meaningful for var/neg_var leaves.
  const std::string& name() const;
  // Only meaningful for conj/disj nodes.
  const Formula& left() const;
  const Formula& right() const;

  // Sorted, duplicate free.
  const std::vector<std::string>& variables() const;
  std::size_t leaf_count() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct Assignment {
  std::set<std::string, std::less<>> true_vars;

  bool holds(std::string_view name) const { return true_vars.find(name) != true_vars.end(); }
};

struct FormulaInference {
  Formula lhs;
  Formula rhs;

  friend bool operator==(const FormulaInference&, const FormulaInference&) = default;
};

// Grammar: formula := term (op term)*, one operator per parenthesis level;
// term := 'T' | 'F' | ident | '~' ident | '(' formula ')'; ident := [a-z][a-zA-Z0-9']*.
Formula parse_formula(std::string_view text);
// "LHS -> RHS"
FormulaInference parse_inference(std::string_view text);

// Fully parenthesised: "(x & (y | z))", "T", "~x".
std::string print(const Formula& f);
std::string print(const FormulaInference& inf);

bool evaluate(const Formula& f, const Assignment& a);

// Union of both sides' variables, sorted.
std::vector<std::string> variables(const FormulaInference& inf);
std::vector<std::string> variables(const Formula& f);
bool is_constant_free(const Formula& f);
bool is_negation_free(const Formula& f);

// Exhaustive over 2^|vars| assignments of the union of both variable sets.
bool is_valid(const FormulaInference& inf);
// First assignment (in increasing bitmask order over sorted variables) satisfying
// lhs and falsifying rhs.
std::optional<Assignment> formula_countermodel(const FormulaInference& inf);

// Maximal elimination of units; result is constant-free or exactly T or F.
Formula unit_normalize(const Formula& f);
Formula negate(const Formula& f);
Formula dualize(const Formula& f);
// De Morgan dual of an inference: dualize(rhs) -> dualize(lhs).
FormulaInference dual_inference(const FormulaInference& inf);

// Replaces every occurrence of the variable (positive or negated) by a constant;
// a negated occurrence receives the complementary constant.
Formula substitute(const Formula& f, std::string_view name, bool value);

// Valid iff lhs[T/x] -> rhs[F/x] is valid.
bool is_trivial_at(const FormulaInference& inf, std::string_view name);

enum class ReductionKind : std::uint8_t {
  restrict_variable,
  trivial_substitution,
  strip_negation,
  unit_normalize,
};

struct ReductionStep {
  ReductionKind kind;
  std::string variable;  // empty for unit_normalize
  std::string result;    // printed inference after the step
};

struct NormalizedInference {
  FormulaInference core;
  std::vector<ReductionStep> trace;
};

// Reduces a valid inference to a constant-free, negation-free, non-trivial
// core on a single shared variable set. Throws DegenerateError when a side
// collapses to a constant.
NormalizedInference normalize_inference(const FormulaInference& inf);

std::string to_string(ReductionKind kind);

}  // namespace linbasis
