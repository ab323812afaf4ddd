#include "linbasis/basis.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace linbasis {

RuleSet Basis::cumulative(int upto) const {
  RuleSet out{mode == GraphMode::p4free ? "basis" : "graph-basis",
              "basis(" + std::to_string(upto) + ")",
              {}};
  for (const auto& s : strata) {
    if (s.size > upto) break;
    out.rules.insert(out.rules.end(), s.rules.begin(), s.rules.end());
  }
  return out;
}

RuleSet Basis::cumulative() const { return cumulative(strata.empty() ? 0 : strata.back().size); }

std::vector<std::size_t> Basis::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& s : strata) out.push_back(s.rules.size());
  return out;
}

Basis basis(const BasisConfig& config) {
  check_search_budget(config.n, config.mode, config.long_run);
  Basis out;
  out.mode = config.mode;
  out.entailment = config.entailment;
  out.strata.push_back({0, {}});
  const char letter = config.mode == GraphMode::p4free ? 'M' : 'G';
  for (int k = 1; k <= config.n; ++k) {
    SearchConfig sc;
    sc.n = k;
    sc.rules = out.cumulative(k - 1);
    sc.mode = config.mode;
    sc.entailment = config.entailment;
    sc.checkpoint_dir = config.checkpoint_dir;
    sc.jobs = config.jobs;
    sc.long_run = config.long_run;
    sc.log = config.log;
    SearchReport report = run_search(sc);
    Stratum stratum{k, {}};
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
      std::string name = std::string(1, letter) + std::to_string(k) + "." + std::to_string(i + 1);
      Rule rule = make_rule(name, report.classes[i].representative);
      if (config.mode == GraphMode::p4free) rule.formula = report.classes[i].formula;
      stratum.rules.push_back(std::move(rule));
    }
    if (config.log) {
      config.log(std::string(1, letter) + "_" + std::to_string(k) + ": " + std::to_string(stratum.rules.size()) +
                 " rules");
    }
    out.strata.push_back(std::move(stratum));
  }
  return out;
}

Basis graph_basis(int n, Entailment entailment, const BasisConfig& overrides) {
  BasisConfig c = overrides;
  c.n = n;
  c.mode = GraphMode::all;
  c.entailment = entailment;
  return basis(c);
}

std::string format_basis(const Basis& b) {
  const char letter = b.mode == GraphMode::p4free ? 'M' : 'G';
  std::string out;
  for (const auto& s : b.strata) {
    out += std::string(1, letter) + " " + std::to_string(s.size) + "\n";
    for (const auto& r : s.rules) {
      out += format_rule(r);
      if (is_p4_free(r.inference.lhs) && is_p4_free(r.inference.rhs) && r.inference.n() > 0) {
        out += "  # " + print(from_graph_inference(r.inference));
      }
      out += "\n";
    }
  }
  return out;
}

Basis parse_basis(std::string_view text) {
  Basis out;
  bool any_header = false;
  std::string pending;
  auto flush = [&] {
    if (out.strata.empty()) return;
    RuleSet rs = parse_rules(pending);
    out.strata.back().rules = std::move(rs.rules);
    pending.clear();
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.size() >= 3 && (line[0] == 'M' || line[0] == 'G') && line[1] == ' ' &&
        std::isdigit(static_cast<unsigned char>(line[2]))) {
      flush();
      out.mode = line[0] == 'M' ? GraphMode::p4free : GraphMode::all;
      out.strata.push_back({std::stoi(std::string(line.substr(2))), {}});
      any_header = true;
      continue;
    }
    if (!any_header) {
      auto t = line.find_first_not_of(" \t\r");
      if (t != std::string_view::npos && line[t] != '#') throw FormatError("basis file must start with a stratum header");
      continue;
    }
    pending += std::string(line) + "\n";
  }
  flush();
  return out;
}

Basis load_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_basis(ss.str());
}

}  // namespace linbasis
