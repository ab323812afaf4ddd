// linbasis: command-line front end.
//
// Exit codes: 0 success, 1 negative verdict or failed computation,
// 2 usage or input error, 3 budget guard.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "linbasis/basis.hpp"
#include "linbasis/fixtures.hpp"
#include "linbasis/search.hpp"

using namespace linbasis;

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3;

struct Common {
  int n = 0;
  bool all_graphs = false;
  bool stable_set = false;
  bool long_run = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string ckpt;
  bool quiet = false;
  std::string out;
};

std::function<void(const std::string&)> logger(const Common& c) {
  if (c.quiet) return {};
  return [](const std::string& m) { std::cerr << m << std::endl; };
}

// Writes to --out when given, else stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw FormatError("cannot write '" + c.out + "'");
  f << text;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

int run_generate(const Common& c) {
  const GraphMode mode = c.all_graphs ? GraphMode::all : GraphMode::p4free;
  if (mode == GraphMode::p4free && c.n >= 10 && !c.long_run) throw BudgetError("n >= 10 needs --long-run");
  std::string text;
  if (mode == GraphMode::all) {
    for_each_graph(c.n, [&](const Web& g) { text += format_web(g) + "\n"; }, c.long_run);
  } else {
    for (auto code : p4_free_codes(c.n, c.jobs)) text += std::to_string(c.n) + " " + std::to_string(code) + "\n";
  }
  emit(c, text);
  return kOk;
}

SearchConfig search_config(const Common& c, const std::string& rules) {
  SearchConfig s;
  s.n = c.n;
  s.rules = resolve_rules(rules);
  s.mode = c.all_graphs ? GraphMode::all : GraphMode::p4free;
  s.entailment = c.stable_set ? Entailment::stable : Entailment::clique;
  s.checkpoint_dir = c.ckpt;
  s.jobs = c.jobs;
  s.long_run = c.long_run;
  s.log = logger(c);
  return s;
}

int run_search_command(const Common& c, const std::string& rules) {
  auto report = run_search(search_config(c, rules));
  emit(c, format_report(report));
  return kOk;
}

int run_basis_command(const Common& c) {
  BasisConfig b;
  b.n = c.n;
  b.mode = c.all_graphs ? GraphMode::all : GraphMode::p4free;
  b.entailment = c.stable_set ? Entailment::stable : Entailment::clique;
  b.checkpoint_dir = c.ckpt;
  b.jobs = c.jobs;
  b.long_run = c.long_run;
  b.log = logger(c);
  auto result = basis(b);
  emit(c, format_basis(result));
  std::string sizes;
  for (std::size_t k = 3; k < result.strata.size(); ++k) sizes += (k > 3 ? "," : "") + std::to_string(result.strata[k].rules.size());
  if (!c.quiet) std::cerr << "strata from size 3: (" << sizes << ")" << std::endl;
  return kOk;
}

// Largest size for which logical minimality is decided by scanning every cograph.
constexpr int kMinimalityScan = 8;

int run_check(const std::string& lhs_text, const std::string& rhs_text, const std::string& rules_spec,
              bool expect_valid, bool long_run) {
  FormulaInference inf{parse_formula(lhs_text), parse_formula(rhs_text)};
  const bool valid = is_valid(inf);
  const bool plain = is_constant_free(inf.lhs) && is_constant_free(inf.rhs) && is_negation_free(inf.lhs) &&
                     is_negation_free(inf.rhs);
  auto lv = variables(inf.lhs), rv = variables(inf.rhs);
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const bool shared = plain && sorted(lv) == sorted(rv) && !lv.empty();

  std::cout << "inference: " << print(inf) << "\n";
  std::cout << "valid: " << yes_no(valid) << "\n";
  std::optional<GraphInference> web;
  std::vector<std::string> names;
  if (shared) {
    auto conv = to_graph_inference(inf);
    web = conv.inference;
    names = conv.names;
  }
  if (!valid) {
    // A failing maximal clique of the lhs web when there is one, else the first failing assignment.
    std::vector<std::string> truths;
    std::optional<NodeSet> clique;
    if (web) clique = find_countermodel(web->lhs, web->rhs);
    if (clique) {
      for (std::size_t i = 0; i < names.size(); ++i)
        if ((*clique >> i) & 1) truths.push_back(names[i]);
    } else {
      auto a = formula_countermodel(inf);
      for (const auto& v : variables(inf))
        if (a && a->holds(v)) truths.push_back(v);
    }
    std::cout << "countermodel: {" << join(truths, ", ") << "}\n";
  }
  std::cout << "constant-free: " << yes_no(is_constant_free(inf.lhs) && is_constant_free(inf.rhs)) << "\n";
  std::cout << "negation-free: " << yes_no(is_negation_free(inf.lhs) && is_negation_free(inf.rhs)) << "\n";
  std::vector<std::string> trivial;
  for (const auto& v : variables(inf))
    if (is_trivial_at(inf, v)) trivial.push_back(v);
  std::cout << "trivial at: " << (trivial.empty() ? "none" : join(trivial, ", ")) << "\n";

  if (!web) {
    std::cout << "minimal: n/a\n";
  } else if (!valid) {
    std::cout << "minimal: no\n";
  } else if (web->n() > kMinimalityScan + (long_run ? 1 : 0)) {
    std::cout << "minimal: unknown (more than " << kMinimalityScan << " variables needs --long-run)\n";
  } else {
    // No cograph strictly between the sides.
    const auto lhs_code = static_cast<std::uint64_t>(numeric(web->lhs));
    const auto rhs_code = static_cast<std::uint64_t>(numeric(web->rhs));
    std::optional<std::uint64_t> between;
    for (auto code : p4_free_codes(web->n())) {
      if (code == lhs_code || code == rhs_code) continue;
      Web t = from_numeric(web->n(), code);
      if (implies_cliquewise(web->lhs, t) && implies_cliquewise(t, web->rhs)) {
        between = code;
        break;
      }
    }
    std::cout << "minimal: " << yes_no(!between);
    if (between) std::cout << " (interpolant " << web->n() << " " << *between << ")";
    std::cout << "\n";
  }
  if (web) {
    auto rules = resolve_rules(rules_spec);
    for (const auto& r : rules.rules) {
      std::cout << "instance of " << r.name << ": " << yes_no(is_instance(*web, r.inference)) << "\n";
    }
    std::cout << "self-dual: " << yes_no(is_self_dual(*web)) << "\n";
  } else {
    std::cout << "self-dual: n/a\n";
  }
  return expect_valid && !valid ? kNegative : kOk;
}

int run_convert(const std::string& formula, const std::string& graph) {
  if (!formula.empty() == !graph.empty()) throw FormatError("give exactly one of --formula and --graph");
  if (!formula.empty()) {
    if (formula.find("->") != std::string::npos) {
      auto conv = to_graph_inference(parse_inference(formula));
      std::cout << format_inference(conv.inference) << "\n# nodes: " << join(conv.names, " ") << "\n";
    } else {
      auto conv = to_web(parse_formula(formula));
      std::cout << format_web(conv.web) << "\n# nodes: " << join(conv.names, " ") << "\n";
    }
    return kOk;
  }
  std::istringstream in(graph);
  std::vector<std::string> parts;
  for (std::string p; in >> p;) parts.push_back(p);
  if (parts.size() == 3) {
    std::cout << print(from_graph_inference(parse_graph_inference(graph))) << "\n";
  } else {
    std::cout << print(from_web(parse_web(graph))) << "\n";
  }
  return kOk;
}

int run_verify(const std::string& file, const std::string& rules_spec) {
  auto d = load_derivation(file);
  auto rules = resolve_rules(rules_spec);
  auto report = check_derivation(d, rules);
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& s = d.steps[i];
    const auto& v = report.steps[i];
    std::cout << "step " << i + 1 << ": "
              << (s.kind == DerivationStep::Kind::ac ? std::string("ac") : "rule " + s.rule_name) << " "
              << (v.ok ? "ok" : "FAIL " + v.reason) << "\n";
  }
  if (report.ok) {
    std::cout << "derivation: ok (" << d.steps.size() << " steps)\n";
    return kOk;
  }
  for (const auto& v : report.steps) {
    if (!v.ok) {
      std::cout << "derivation: failed at step " << v.index + 1 << "\n";
      break;
    }
  }
  return kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal linear inferences: enumeration, search and verification"};
  app.require_subcommand(1);
  Common c;
  if (const char* env = std::getenv("LINBASIS_CKPT_DIR")) c.ckpt = env;

  auto add_size = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "number of variables")->required()->check(CLI::Range(0, 16));
    sub->add_flag("--all-graphs", c.all_graphs, "all graphs instead of P4-free ones");
    sub->add_flag("--long-run", c.long_run, "allow multi-hour sizes");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "write the result to this file");
    sub->add_flag("--quiet", c.quiet, "no progress on stderr");
  };
  auto add_search = [&](CLI::App* sub) {
    add_size(sub);
    sub->add_flag("--stable-set", c.stable_set, "maximal stable set entailment");
    sub->add_option("--ckpt", c.ckpt, "checkpoint root (default $LINBASIS_CKPT_DIR)");
  };

  auto* gen = app.add_subcommand("generate", "list the graphs of one size");
  add_size(gen);

  std::string rules = "builtin:sm";
  auto* search = app.add_subcommand("search", "find minimal inferences independent of a rule set");
  add_search(search);
  search->add_option("--rules", rules, "rule file or builtin:sm / builtin:none");

  auto* bas = app.add_subcommand("basis", "compute the strata of minimal independent inferences");
  add_search(bas);

  std::string lhs, rhs, check_rules = "builtin:sm";
  bool expect_valid = false, check_long = false;
  auto* check = app.add_subcommand("check", "analyse one inference");
  check->add_option("--lhs", lhs, "premise formula")->required();
  check->add_option("--rhs", rhs, "conclusion formula")->required();
  check->add_option("--rules", check_rules, "rules for the instance verdicts");
  check->add_flag("--expect-valid", expect_valid, "exit 1 when the inference is invalid");
  check->add_flag("--long-run", check_long, "decide minimality up to nine variables");

  std::string formula, graph;
  auto* conv = app.add_subcommand("convert", "formula to graph or back");
  conv->add_option("--formula", formula, "formula or inference");
  conv->add_option("--graph", graph, "\"n N\" or \"n N_lhs N_rhs\"");

  std::string deriv_file, deriv_rules = "builtin:sm";
  auto* verify = app.add_subcommand("verify-derivation", "check a derivation step by step");
  verify->add_option("--file", deriv_file, "derivation file")->required();
  verify->add_option("--rules", deriv_rules, "rule file or builtin:sm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return run_generate(c);
    if (*search) return run_search_command(c, rules);
    if (*bas) return run_basis_command(c);
    if (*check) return run_check(lhs, rhs, check_rules, expect_valid, check_long);
    if (*conv) return run_convert(formula, graph);
    if (*verify) return run_verify(deriv_file, deriv_rules);
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << std::endl;
    return kBudget;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << std::endl;
    return kUsage;
  } catch (const LinearityError& e) {
    std::cerr << "linearity error: " << e.what() << std::endl;
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << std::endl;
    return kUsage;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << std::endl;
    return kUsage;
  } catch (const NotCographError& e) {
    std::cerr << "not a cograph: " << e.what() << std::endl;
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kNegative;
  }
  return kUsage;
}
