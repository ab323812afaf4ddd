#pragma once

// Named reference inferences, graphs and scripts loaded from the fixture directory.

#include <map>
#include <string>
#include <vector>

#include "linbasis/formula.hpp"
#include "linbasis/graph.hpp"
#include "linbasis/rewrite.hpp"

namespace linbasis {

// LINBASIS_FIXTURE_DIR from the environment, else the source tree's fixtures/.
std::string fixture_dir();
std::string fixture_path(std::string_view file);

struct NamedGraph {
  Web web;
  std::vector<std::string> names;
};

struct CountermodelCase {
  std::string name;
  // Which side of the target was rewritten.
  bool rewrote_lhs = true;
  Formula rewritten;
  std::string target;
  Assignment countermodel;
};

struct WebString {
  std::string fixture;
  bool lhs = true;
  std::vector<std::string> order;
  Web web;
};

struct Catalogue {
  // Formula inferences, including the derived entries dual_eq3, nine_<k>_dual
  // and supermix_<k> for k = 1..4.
  std::map<std::string, FormulaInference> formulas;
  std::map<std::string, NamedGraph> graphs;
  std::map<std::string, GraphInference> graph_inferences;
  std::vector<CountermodelCase> countermodels;
  std::vector<WebString> web_strings;

  const FormulaInference& formula(const std::string& name) const;
  // Web form with nodes in first-occurrence order of the lhs.
  GraphInference web(const std::string& name) const;
  const GraphInference& graph_inference(const std::string& name) const;
  // Graph inferences whose name starts with the prefix, in numeric name order.
  std::vector<GraphInference> graph_family(const std::string& prefix) const;
};

// Loaded once; throws Error when a fixture fails to parse or is not valid.
const Catalogue& catalogue();
Catalogue load_catalogue(const std::string& dir);

// a & (b0 | ... | b{k-1}) -> a | (b0 & ... & b{k-1})
FormulaInference supermix(int k);

// Web from one character per node pair in lexicographic pair order
// (0,1), (0,2), ..., (n-2,n-1): 'r' edge, 'g' none.
Web web_from_edge_string(int n, std::string_view colours);
std::string edge_string(const Web& g);

}  // namespace linbasis
