#include "linbasis/formula.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>
#include <optional>

namespace linbasis {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  std::optional<Formula> left;
  std::optional<Formula> right;
  std::vector<std::string> vars;
  std::size_t leaves = 1;
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::top, {}, {}, {}, {}, 1});
  return Formula(node);
}

Formula Formula::bot() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::bot, {}, {}, {}, {}, 1});
  return Formula(node);
}

namespace {

bool is_identifier(std::string_view name) {
  if (name.empty() || name.front() < 'a' || name.front() > 'z') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
  });
}

}  // namespace

Formula Formula::var(std::string name) {
  if (!is_identifier(name)) throw SyntaxError("invalid variable name '" + name + "'");
  std::vector<std::string> vars{name};
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::var, std::move(name), {}, {}, std::move(vars), 1}));
}

Formula Formula::neg_var(std::string name) {
  if (!is_identifier(name)) throw SyntaxError("invalid variable name '" + name + "'");
  std::vector<std::string> vars{name};
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::neg_var, std::move(name), {}, {}, std::move(vars), 1}));
}

Formula Formula::binary(FormulaKind kind, const Formula& left, const Formula& right) {
  const auto& a = left.node_->vars;
  const auto& b = right.node_->vars;
  std::vector<std::string> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  if (auto dup = std::adjacent_find(merged.begin(), merged.end()); dup != merged.end()) {
    throw LinearityError("variable '" + *dup + "' occurs more than once");
  }
  return Formula(std::make_shared<const Node>(
      Node{kind, {}, left, right, std::move(merged), left.node_->leaves + right.node_->leaves}));
}

Formula Formula::conj(const Formula& left, const Formula& right) {
  return binary(FormulaKind::conj, left, right);
}

Formula Formula::disj(const Formula& left, const Formula& right) {
  return binary(FormulaKind::disj, left, right);
}

FormulaKind Formula::kind() const { return node_->kind; }

bool Formula::is_leaf() const { return !is_binary(); }

bool Formula::is_constant() const {
  return node_->kind == FormulaKind::top || node_->kind == FormulaKind::bot;
}

bool Formula::is_binary() const {
  return node_->kind == FormulaKind::conj || node_->kind == FormulaKind::disj;
}

const std::string& Formula::name() const { return node_->name; }

const Formula& Formula::left() const { return *node_->left; }

const Formula& Formula::right() const { return *node_->right; }

const std::vector<std::string>& Formula::variables() const { return node_->vars; }

std::size_t Formula::leaf_count() const { return node_->leaves; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::top:
    case FormulaKind::bot:
      return true;
    case FormulaKind::var:
    case FormulaKind::neg_var:
      return a.name() == b.name();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Parsing and printing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_formula();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  Formula parse_formula() {
    Formula acc = parse_term();
    std::optional<char> op;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || (text_[pos_] != '&' && text_[pos_] != '|')) break;
      char c = text_[pos_++];
      if (op && *op != c) {
        throw MixedOperatorError("mixed '&' and '|' without parentheses at offset " +
                                 std::to_string(pos_ - 1));
      }
      op = c;
      Formula rhs = parse_term();
      acc = Formula::binary(c == '&' ? FormulaKind::conj : FormulaKind::disj, acc, rhs);
    }
    return acc;
  }

  Formula parse_term() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula inner = parse_formula();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 'T') {
      ++pos_;
      return Formula::top();
    }
    if (c == 'F') {
      ++pos_;
      return Formula::bot();
    }
    if (c == '~') {
      ++pos_;
      skip_space();
      return Formula::neg_var(identifier());
    }
    return Formula::var(identifier());
  }

  std::string identifier() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z') {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '\'')) {
        ++pos_;
      }
    }
    if (start == pos_) fail("expected a variable");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) +
                      "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::top:
      out += 'T';
      return;
    case FormulaKind::bot:
      out += 'F';
      return;
    case FormulaKind::var:
      out += f.name();
      return;
    case FormulaKind::neg_var:
      out += '~';
      out += f.name();
      return;
    default:
      out += '(';
      print_to(f.left(), out);
      out += f.kind() == FormulaKind::conj ? " & " : " | ";
      print_to(f.right(), out);
      out += ')';
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

FormulaInference parse_inference(std::string_view text) {
  auto arrow = text.find("->");
  if (arrow == std::string_view::npos) throw SyntaxError("expected 'LHS -> RHS'");
  if (text.find("->", arrow + 2) != std::string_view::npos) throw SyntaxError("more than one '->'");
  return {parse_formula(text.substr(0, arrow)), parse_formula(text.substr(arrow + 2))};
}

std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

std::string print(const FormulaInference& inf) { return print(inf.lhs) + " -> " + print(inf.rhs); }

// ---------------------------------------------------------------------------
// Semantics

bool evaluate(const Formula& f, const Assignment& a) {
  switch (f.kind()) {
    case FormulaKind::top:
      return true;
    case FormulaKind::bot:
      return false;
    case FormulaKind::var:
      return a.holds(f.name());
    case FormulaKind::neg_var:
      return !a.holds(f.name());
    case FormulaKind::conj:
      return evaluate(f.left(), a) && evaluate(f.right(), a);
    case FormulaKind::disj:
      return evaluate(f.left(), a) || evaluate(f.right(), a);
  }
  return false;
}

std::vector<std::string> variables(const Formula& f) { return f.variables(); }

std::vector<std::string> variables(const FormulaInference& inf) {
  std::vector<std::string> out;
  std::set_union(inf.lhs.variables().begin(), inf.lhs.variables().end(),
                 inf.rhs.variables().begin(), inf.rhs.variables().end(), std::back_inserter(out));
  return out;
}

bool is_constant_free(const Formula& f) {
  if (f.is_constant()) return false;
  if (f.is_leaf()) return true;
  return is_constant_free(f.left()) && is_constant_free(f.right());
}

bool is_negation_free(const Formula& f) {
  if (f.kind() == FormulaKind::neg_var) return false;
  if (f.is_leaf()) return true;
  return is_negation_free(f.left()) && is_negation_free(f.right());
}

namespace {

// Postfix program over variable indices, evaluated against a bitmask.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const std::map<std::string, int, std::less<>>& index) {
    compile(f, index);
  }

  bool operator()(std::uint64_t mask) const {
    bool stack[64];
    int top = 0;
    for (const auto& ins : code_) {
      switch (ins.kind) {
        case FormulaKind::top:
          stack[top++] = true;
          break;
        case FormulaKind::bot:
          stack[top++] = false;
          break;
        case FormulaKind::var:
          stack[top++] = (mask >> ins.var) & 1U;
          break;
        case FormulaKind::neg_var:
          stack[top++] = !((mask >> ins.var) & 1U);
          break;
        case FormulaKind::conj:
          --top;
          stack[top - 1] = stack[top - 1] && stack[top];
          break;
        case FormulaKind::disj:
          --top;
          stack[top - 1] = stack[top - 1] || stack[top];
          break;
      }
    }
    return stack[0];
  }

 private:
  struct Instr {
    FormulaKind kind;
    int var;
  };

  void compile(const Formula& f, const std::map<std::string, int, std::less<>>& index) {
    if (f.is_binary()) {
      compile(f.left(), index);
      compile(f.right(), index);
      code_.push_back({f.kind(), -1});
    } else if (f.is_constant()) {
      code_.push_back({f.kind(), -1});
    } else {
      code_.push_back({f.kind(), index.find(f.name())->second});
    }
  }

  std::vector<Instr> code_;
};

constexpr std::size_t kMaxTruthTableVars = 30;

}  // namespace

std::optional<Assignment> formula_countermodel(const FormulaInference& inf) {
  auto vars = variables(inf);
  if (vars.size() > kMaxTruthTableVars) {
    throw BudgetError("truth table over " + std::to_string(vars.size()) + " variables");
  }
  std::map<std::string, int, std::less<>> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index.emplace(vars[i], static_cast<int>(i));
  CompiledFormula lhs(inf.lhs, index);
  CompiledFormula rhs(inf.rhs, index);
  const std::uint64_t count = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (lhs(mask) && !rhs(mask)) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if ((mask >> i) & 1U) a.true_vars.insert(vars[i]);
      }
      return a;
    }
  }
  return std::nullopt;
}

bool is_valid(const FormulaInference& inf) { return !formula_countermodel(inf).has_value(); }

// ---------------------------------------------------------------------------
// Transformations

Formula unit_normalize(const Formula& f) {
  if (!f.is_binary()) return f;
  Formula l = unit_normalize(f.left());
  Formula r = unit_normalize(f.right());
  if (f.kind() == FormulaKind::conj) {
    if (l.kind() == FormulaKind::bot || r.kind() == FormulaKind::bot) return Formula::bot();
    if (l.kind() == FormulaKind::top) return r;
    if (r.kind() == FormulaKind::top) return l;
  } else {
    if (l.kind() == FormulaKind::top || r.kind() == FormulaKind::top) return Formula::top();
    if (l.kind() == FormulaKind::bot) return r;
    if (r.kind() == FormulaKind::bot) return l;
  }
  if (l == f.left() && r == f.right()) return f;
  return Formula::binary(f.kind(), l, r);
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
      return Formula::bot();
    case FormulaKind::bot:
      return Formula::top();
    case FormulaKind::var:
      return Formula::neg_var(f.name());
    case FormulaKind::neg_var:
      return Formula::var(f.name());
    case FormulaKind::conj:
      return Formula::disj(negate(f.left()), negate(f.right()));
    case FormulaKind::disj:
      return Formula::conj(negate(f.left()), negate(f.right()));
  }
  return f;
}

Formula dualize(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
      return Formula::bot();
    case FormulaKind::bot:
      return Formula::top();
    case FormulaKind::var:
    case FormulaKind::neg_var:
      return f;
    case FormulaKind::conj:
      return Formula::disj(dualize(f.left()), dualize(f.right()));
    case FormulaKind::disj:
      return Formula::conj(dualize(f.left()), dualize(f.right()));
  }
  return f;
}

FormulaInference dual_inference(const FormulaInference& inf) {
  return {dualize(inf.rhs), dualize(inf.lhs)};
}

namespace {

// Replaces the leaf mentioning `name` (whatever its polarity) by `leaf`.
Formula replace_leaf(const Formula& f, std::string_view name, const Formula& leaf) {
  if (f.is_binary()) {
    const auto& vars = f.variables();
    if (!std::binary_search(vars.begin(), vars.end(), name)) return f;
    return Formula::binary(f.kind(), replace_leaf(f.left(), name, leaf),
                           replace_leaf(f.right(), name, leaf));
  }
  if (!f.is_constant() && f.name() == name) return leaf;
  return f;
}

Formula constant(bool value) { return value ? Formula::top() : Formula::bot(); }

}  // namespace

Formula substitute(const Formula& f, std::string_view name, bool value) {
  if (f.is_binary()) {
    const auto& vars = f.variables();
    if (!std::binary_search(vars.begin(), vars.end(), name)) return f;
    return Formula::binary(f.kind(), substitute(f.left(), name, value),
                           substitute(f.right(), name, value));
  }
  if (f.kind() == FormulaKind::var && f.name() == name) return constant(value);
  if (f.kind() == FormulaKind::neg_var && f.name() == name) return constant(!value);
  return f;
}

bool is_trivial_at(const FormulaInference& inf, std::string_view name) {
  return is_valid({substitute(inf.lhs, name, true), substitute(inf.rhs, name, false)});
}

std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::restrict_variable:
      return "restrict";
    case ReductionKind::trivial_substitution:
      return "trivial";
    case ReductionKind::strip_negation:
      return "strip-negation";
    case ReductionKind::unit_normalize:
      return "unit-normalize";
  }
  return "?";
}

namespace {

std::optional<FormulaKind> polarity(const Formula& f, std::string_view name) {
  if (f.is_binary()) {
    if (auto p = polarity(f.left(), name)) return p;
    return polarity(f.right(), name);
  }
  if (!f.is_constant() && f.name() == name) return f.kind();
  return std::nullopt;
}

}  // namespace

NormalizedInference normalize_inference(const FormulaInference& inf) {
  if (!is_valid(inf)) throw Error("normalize_inference: inference is not valid");
  NormalizedInference out;
  Formula lhs = inf.lhs;
  Formula rhs = inf.rhs;
  auto record = [&](ReductionKind kind, std::string var) {
    out.trace.push_back({kind, std::move(var), print(FormulaInference{lhs, rhs})});
  };
  auto normalize_units = [&] {
    Formula l = unit_normalize(lhs);
    Formula r = unit_normalize(rhs);
    if (l == lhs && r == rhs) return;
    lhs = l;
    rhs = r;
    record(ReductionKind::unit_normalize, {});
  };

  for (;;) {
    normalize_units();
    // Literals whose variable appears on one side only become units.
    const auto lv = lhs.variables();
    const auto rv = rhs.variables();
    bool restricted = false;
    for (const auto& x : lv) {
      if (!std::binary_search(rv.begin(), rv.end(), x)) {
        lhs = replace_leaf(lhs, x, Formula::top());
        record(ReductionKind::restrict_variable, x);
        restricted = true;
      }
    }
    for (const auto& y : rv) {
      if (!std::binary_search(lv.begin(), lv.end(), y)) {
        rhs = replace_leaf(rhs, y, Formula::bot());
        record(ReductionKind::restrict_variable, y);
        restricted = true;
      }
    }
    if (restricted) continue;
    if (lhs.is_constant() || rhs.is_constant()) {
      throw DegenerateError("core collapses to a constant: " + print(FormulaInference{lhs, rhs}));
    }
    std::optional<std::string> trivial;
    for (const auto& x : lhs.variables()) {
      if (is_trivial_at({lhs, rhs}, x)) {
        trivial = x;
        break;
      }
    }
    if (!trivial) break;
    lhs = substitute(lhs, *trivial, true);
    rhs = substitute(rhs, *trivial, false);
    record(ReductionKind::trivial_substitution, *trivial);
  }

  // Non-triviality forces equal polarity on both sides for every variable.
  for (const auto& x : lhs.variables()) {
    auto pl = polarity(lhs, x);
    auto pr = polarity(rhs, x);
    if (pl != pr) {
      throw DegenerateError("variable '" + x + "' changes polarity in a non-trivial inference");
    }
    if (pl == FormulaKind::neg_var) {
      lhs = replace_leaf(lhs, x, Formula::var(x));
      rhs = replace_leaf(rhs, x, Formula::var(x));
      record(ReductionKind::strip_negation, x);
    }
  }
  out.core = {lhs, rhs};
  return out;
}

}  // namespace linbasis
