#include "linbasis/rewrite.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "linbasis/digest.hpp"
#include "linbasis/isomorphism.hpp"

namespace linbasis {

namespace {

GraphInference rule_from_formula(std::string_view text) {
  return to_graph_inference(parse_inference(text)).inference;
}

struct Adjacency {
  std::array<NodeSet, kMaxNodes> rows{};
  explicit Adjacency(const Web& g) {
    for (int x = 0; x < g.n(); ++x) rows[x] = g.neighbours(x);
  }
  bool operator()(int x, int y) const { return (rows[x] >> y) & 1U; }
};

// Backtracking over labelled surjections from the members of M onto rule nodes.
class PartMatcher {
 public:
  PartMatcher(const Adjacency& lhs, const Adjacency* rhs, const Adjacency& rule_lhs,
              const Adjacency* rule_rhs, int k)
      : lhs_(lhs), rhs_(rhs), rule_lhs_(rule_lhs), rule_rhs_(rule_rhs), k_(k) {}

  // Calls found(members, parts) for each valid assignment; stops when it returns true.
  template <typename Found>
  bool run(NodeSet m, Found found) {
    members_.clear();
    for (NodeSet rest = m; rest != 0; rest &= rest - 1) members_.push_back(std::countr_zero(rest));
    parts_.assign(members_.size(), 0);
    sizes_.fill(0);
    empty_ = k_;
    return step(0, found);
  }

 private:
  template <typename Found>
  bool step(std::size_t i, Found& found) {
    if (i == members_.size()) return found(members_, parts_);
    const std::size_t remaining = members_.size() - i;
    for (int a = 0; a < k_; ++a) {
      // Leave room to fill every still-empty part.
      if (static_cast<std::size_t>(empty_ - (sizes_[a] == 0 ? 1 : 0)) > remaining - 1) continue;
      if (!consistent(i, a)) continue;
      parts_[i] = a;
      if (sizes_[a]++ == 0) --empty_;
      bool stop = step(i + 1, found);
      if (--sizes_[a] == 0) ++empty_;
      if (stop) return true;
    }
    return false;
  }

  bool consistent(std::size_t i, int a) const {
    const int v = members_[i];
    for (std::size_t j = 0; j < i; ++j) {
      const int u = members_[j];
      const int b = parts_[j];
      if (a != b) {
        if (lhs_(u, v) != rule_lhs_(a, b)) return false;
        if (rhs_ && (*rhs_)(u, v) != (*rule_rhs_)(a, b)) return false;
      } else if (rhs_ && lhs_(u, v) != (*rhs_)(u, v)) {
        return false;
      }
    }
    return true;
  }

  const Adjacency& lhs_;
  const Adjacency* rhs_;
  const Adjacency& rule_lhs_;
  const Adjacency* rule_rhs_;
  int k_;
  std::vector<int> members_;
  std::vector<int> parts_;
  std::array<int, kMaxNodes> sizes_{};
  int empty_ = 0;
};

// Visits every superset of `required` within the node range.
template <typename Visit>
bool for_each_superset(int n, NodeSet required, Visit visit) {
  const NodeSet free = all_nodes(n) & ~required;
  NodeSet sub = free;
  for (;;) {
    if (visit(required | sub)) return true;
    if (sub == 0) return false;
    sub = (sub - 1) & free;
  }
}

}  // namespace

GraphInference switch_rule() { return rule_from_formula(kSwitchFormula); }

GraphInference medial_rule() { return rule_from_formula(kMedialFormula); }

bool is_instance(const GraphInference& candidate, const GraphInference& rule) {
  const int n = candidate.n();
  const int k = rule.n();
  if (candidate.rhs.n() != n || rule.rhs.n() != k || k == 0 || k > n) return false;
  // Changed edges must lie inside the redex.
  NodeSet touched = 0;
  for (int y = 1; y < n; ++y) {
    for (int x = 0; x < y; ++x) {
      if (candidate.lhs.edge(x, y) != candidate.rhs.edge(x, y)) touched |= (NodeSet{1} << x) | (NodeSet{1} << y);
    }
  }
  Adjacency lhs(candidate.lhs), rhs(candidate.rhs), rl(rule.lhs), rr(rule.rhs);
  PartMatcher matcher(lhs, &rhs, rl, &rr, k);
  return for_each_superset(n, touched, [&](NodeSet m) {
    if (std::popcount(m) < k) return false;
    if (!is_module(candidate.lhs, m) || !is_module(candidate.rhs, m)) return false;
    return matcher.run(m, [](const std::vector<int>&, const std::vector<int>&) { return true; });
  });
}

std::vector<Web> apply_rule_all(const Web& g, const GraphInference& rule) {
  const int n = g.n();
  const int k = rule.n();
  std::set<Web> out;
  if (k == 0 || k > n) return {};
  Adjacency lhs(g), rl(rule.lhs), rr(rule.rhs);
  PartMatcher matcher(lhs, nullptr, rl, nullptr, k);
  for_each_superset(n, 0, [&](NodeSet m) {
    if (std::popcount(m) < k || !is_module(g, m)) return false;
    matcher.run(m, [&](const std::vector<int>& members, const std::vector<int>& parts) {
      Web h = g;
      for (std::size_t j = 1; j < members.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          if (parts[i] != parts[j]) h.set_edge(members[i], members[j], rr(parts[i], parts[j]));
        }
      }
      out.insert(h);
      return false;
    });
    return false;
  });
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Rule sets

const Rule* RuleSet::find(std::string_view rule_name) const {
  for (const auto& r : rules) {
    if (r.name == rule_name) return &r;
  }
  return nullptr;
}

std::string RuleSet::digest() const { return sha256_hex(format_rules(*this)); }

Rule make_rule(std::string name, const GraphInference& inf) {
  if (inf.lhs.n() != inf.rhs.n()) throw SizeMismatchError("rule sides differ in node count");
  GraphInference stored = inf.n() <= kMaxScanNodes ? canonical(inf) : inf;
  return {std::move(name), stored, std::nullopt};
}

Rule make_rule(std::string name, const FormulaInference& inf) {
  Rule r = make_rule(std::move(name), to_graph_inference(inf).inference);
  r.formula = inf;
  return r;
}

RuleSet builtin_rules(std::string_view spec) {
  RuleSet out{std::string(spec), "builtin", {}};
  if (spec == "builtin:sm") {
    out.rules.push_back(make_rule("switch", parse_inference(kSwitchFormula)));
    out.rules.push_back(make_rule("medial", parse_inference(kMedialFormula)));
  } else if (spec != "builtin:none") {
    throw FormatError("unknown builtin rule set '" + std::string(spec) + "'");
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_stratum_header(std::string_view line) {
  if (line.size() < 3 || (line[0] != 'M' && line[0] != 'G') || line[1] != ' ') return false;
  auto rest = trim(line.substr(2));
  return !rest.empty() && std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RuleSet parse_rules(std::string_view text, std::string name) {
  RuleSet out{std::move(name), "file", {}};
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty() || is_stratum_header(line)) continue;
    auto fields = split(line, ';');
    try {
      if (fields.size() == 2 && fields[1].starts_with("formula ")) {
        out.rules.push_back(make_rule(std::string(fields[0]), parse_inference(fields[1].substr(8))));
      } else if (fields.size() == 4) {
        auto inf = parse_graph_inference(std::string(fields[1]) + " " + std::string(fields[2]) + " " +
                                         std::string(fields[3]));
        out.rules.push_back(make_rule(std::string(fields[0]), inf));
      } else {
        throw FormatError("expected 'name; n; N_lhs; N_rhs' or 'name; formula <lhs> -> <rhs>'");
      }
    } catch (const Error& e) {
      throw FormatError("rule line " + std::to_string(line_no) + ": " + e.what());
    }
    if (out.rules.back().name.empty()) {
      throw FormatError("rule line " + std::to_string(line_no) + ": empty rule name");
    }
  }
  return out;
}

RuleSet load_rules(const std::string& path) { return parse_rules(read_file(path), path); }

RuleSet resolve_rules(const std::string& spec) {
  if (spec.starts_with("builtin:")) return builtin_rules(spec);
  return load_rules(spec);
}

std::string format_rule(const Rule& rule) {
  return rule.name + "; " + std::to_string(rule.inference.n()) + "; " +
         to_decimal(rule.inference.lhs.edges()) + "; " + to_decimal(rule.inference.rhs.edges());
}

std::string format_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules.rules) out += format_rule(r) + "\n";
  return out;
}

bool derivable_one_step(const GraphInference& inf, const RuleSet& rules) {
  return first_matching_rule(inf, rules).has_value();
}

std::optional<std::size_t> first_matching_rule(const GraphInference& inf, const RuleSet& rules) {
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    if (is_instance(inf, rules.rules[i].inference)) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derivations

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Web read_web_term(std::string_view text, const Derivation& d) {
  text = trim(text);
  if (all_digits(text)) return from_numeric(d.n, parse_decimal(text));
  Formula f = parse_formula(text);
  std::vector<std::string> names = d.names;
  if (names.empty()) {
    for (int i = 0; i < d.n; ++i) names.push_back("x" + std::to_string(i));
  }
  return to_web(f, names);
}

}  // namespace

Derivation parse_derivation(std::string_view text) {
  Derivation d;
  bool have_n = false, have_start = false;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto where = [&] { return "derivation line " + std::to_string(line_no) + ": "; };
    try {
      if (!have_n) {
        if (!line.starts_with("n=")) throw FormatError("expected header 'n=<n>'");
        EdgeBits n = parse_decimal(trim(line.substr(2)));
        if (n > kMaxNodes) throw RangeError("node count out of range");
        d.n = static_cast<int>(n);
        d.start = Web(d.n);
        have_n = true;
      } else if (line.starts_with("start ")) {
        if (have_start || !d.steps.empty()) throw FormatError("duplicate start");
        auto term = trim(line.substr(6));
        if (!all_digits(term)) {
          auto conv = to_web(parse_formula(term));
          if (conv.web.n() != d.n) throw SizeMismatchError("start formula has the wrong variable count");
          d.names = conv.names;
          d.start = conv.web;
        } else {
          d.start = from_numeric(d.n, parse_decimal(term));
        }
        have_start = true;
      } else {
        auto arrow = line.find("->");
        if (arrow == std::string_view::npos) throw FormatError("expected '->'");
        auto head = trim(line.substr(0, arrow));
        DerivationStep step;
        if (head == "ac") {
          step.kind = DerivationStep::Kind::ac;
        } else if (head.starts_with("rule ")) {
          step.kind = DerivationStep::Kind::rule;
          step.rule_name = std::string(trim(head.substr(5)));
          if (step.rule_name.empty()) throw FormatError("missing rule name");
        } else {
          throw FormatError("expected 'rule <name> ->' or 'ac ->'");
        }
        step.result = read_web_term(line.substr(arrow + 2), d);
        d.steps.push_back(std::move(step));
      }
    } catch (const FormatError& e) {
      throw FormatError(where() + e.what());
    } catch (const Error& e) {
      throw FormatError(where() + e.what());
    }
  }
  if (!have_n) throw FormatError("derivation is missing its 'n=' header");
  return d;
}

Derivation load_derivation(const std::string& path) { return parse_derivation(read_file(path)); }

DerivationReport check_derivation(const Derivation& d, const RuleSet& rules) {
  DerivationReport report;
  Web current = d.start;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& step = d.steps[i];
    StepVerdict v{i, true, {}};
    if (step.result.n() != current.n()) {
      v = {i, false, "node count changes"};
    } else if (step.kind == DerivationStep::Kind::ac) {
      if (step.result != current) v = {i, false, "webs differ, not an AC step"};
    } else if (const Rule* r = rules.find(step.rule_name); r == nullptr) {
      v = {i, false, "unknown rule '" + step.rule_name + "'"};
    } else if (!is_instance({current, step.result}, r->inference)) {
      v = {i, false, "not an instance of '" + step.rule_name + "'"};
    }
    report.ok = report.ok && v.ok;
    report.steps.push_back(std::move(v));
    current = step.result;
  }
  return report;
}

void require_derivation(const Derivation& d, const RuleSet& rules) {
  for (const auto& v : check_derivation(d, rules).steps) {
    if (!v.ok) throw StepError(v.index, v.reason);
  }
}

}  // namespace linbasis
