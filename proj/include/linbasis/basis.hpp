#pragma once

// Recursive computation of the strata of minimal inferences that are not
// one-step instances of any smaller stratum.

#include <string>
#include <vector>

#include "linbasis/search.hpp"

namespace linbasis {

struct BasisConfig {
  int n = 0;
  GraphMode mode = GraphMode::p4free;
  Entailment entailment = Entailment::clique;
  std::string checkpoint_dir;
  int jobs = 1;
  bool long_run = false;
  std::function<void(const std::string&)> log;
};

struct Stratum {
  int size = 0;
  std::vector<Rule> rules;
};

struct Basis {
  GraphMode mode = GraphMode::p4free;
  Entailment entailment = Entailment::clique;
  // One stratum per size 0..n.
  std::vector<Stratum> strata;

  // Every rule of the strata up to and including size `upto`.
  RuleSet cumulative(int upto) const;
  RuleSet cumulative() const;
  std::vector<std::size_t> sizes() const;
};

// Stratum k holds the residual classes of a size-k search against strata below k.
Basis basis(const BasisConfig& config);
// Same recursion over all graphs.
Basis graph_basis(int n, Entailment entailment, const BasisConfig& overrides = {});

// "M <k>" (or "G <k>") headers followed by rule lines with a formula comment
// when the rule's graphs are P4-free.
std::string format_basis(const Basis& b);
Basis parse_basis(std::string_view text);
Basis load_basis(const std::string& path);

}  // namespace linbasis
