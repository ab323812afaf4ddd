#include "linbasis/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <sstream>

namespace linbasis {

int iota(int x, int y) {
  if (x < 0 || x >= y) {
    throw OrderError("iota needs x < y, got (" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  return iota_unchecked(x, y);
}

Web::Web(int n) : n_(n) {
  if (n < 0 || n > kMaxNodes) throw RangeError("node count " + std::to_string(n) + " out of range");
}

bool Web::edge(int x, int y) const {
  if (x == y) return false;
  if (x > y) std::swap(x, y);
  return (edges_ >> iota_unchecked(x, y)) & 1U;
}

void Web::set_edge(int x, int y, bool present) {
  if (x == y || x < 0 || y < 0 || x >= n_ || y >= n_) {
    throw RangeError("bad edge (" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  if (x > y) std::swap(x, y);
  EdgeBits bit = EdgeBits{1} << iota_unchecked(x, y);
  edges_ = present ? (edges_ | bit) : (edges_ & ~bit);
}

NodeSet Web::neighbours(int x) const {
  NodeSet out = 0;
  for (int y = 0; y < n_; ++y) {
    if (edge(x, y)) out |= NodeSet{1} << y;
  }
  return out;
}

int Web::edge_total() const {
  auto lo = static_cast<std::uint64_t>(edges_);
  auto hi = static_cast<std::uint64_t>(edges_ >> 64);
  return std::popcount(lo) + std::popcount(hi);
}

EdgeBits numeric(const Web& g) { return g.edges(); }

Web from_numeric(int n, EdgeBits code) {
  Web g(n);
  int bits = edge_count(n);
  if (bits < 128 && (code >> bits) != 0) {
    throw RangeError("numerical representation " + to_decimal(code) + " too large for n=" +
                     std::to_string(n));
  }
  g.edges_ = code;
  return g;
}

std::string to_decimal(EdgeBits value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

EdgeBits parse_decimal(std::string_view text) {
  if (text.empty()) throw FormatError("expected a decimal number");
  EdgeBits value = 0;
  const EdgeBits limit = ~EdgeBits{0} / 10;
  for (char c : text) {
    if (c < '0' || c > '9') throw FormatError("bad decimal number '" + std::string(text) + "'");
    if (value > limit) throw FormatError("decimal number too large: " + std::string(text));
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  return value;
}

Web complete_graph(int n) {
  int bits = edge_count(n);
  return from_numeric(n, bits == 0 ? 0 : (~EdgeBits{0} >> (128 - bits)));
}

bool is_p4_free(const Web& g) {
  const int n = g.n();
  std::vector<NodeSet> adj(n);
  for (int x = 0; x < n; ++x) adj[x] = g.neighbours(x);
  // A 4-node induced subgraph is P4 iff it has 3 edges and degrees 1,1,2,2.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        for (int d = c + 1; d < n; ++d) {
          NodeSet s = (NodeSet{1} << a) | (NodeSet{1} << b) | (NodeSet{1} << c) | (NodeSet{1} << d);
          int deg[4] = {std::popcount(adj[a] & s), std::popcount(adj[b] & s),
                        std::popcount(adj[c] & s), std::popcount(adj[d] & s)};
          if (deg[0] + deg[1] + deg[2] + deg[3] != 6) continue;
          bool path = std::all_of(deg, deg + 4, [](int k) { return k == 1 || k == 2; });
          if (path) return false;
        }
      }
    }
  }
  return true;
}

Web induced(const Web& g, NodeSet s) {
  std::vector<int> nodes;
  for (int x = 0; x < g.n(); ++x) {
    if ((s >> x) & 1U) nodes.push_back(x);
  }
  Web out(static_cast<int>(nodes.size()));
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (g.edge(nodes[i], nodes[j])) out.set_edge(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

Web dual(const Web& g) { return from_numeric(g.n(), g.edges() ^ complete_graph(g.n()).edges()); }

bool is_module(const Web& g, NodeSet m) {
  m &= all_nodes(g.n());
  if (m == 0) return true;
  NodeSet outside = all_nodes(g.n()) & ~m;
  int first = std::countr_zero(m);
  NodeSet pattern = g.neighbours(first) & outside;
  for (int x = first + 1; x < g.n(); ++x) {
    if (((m >> x) & 1U) && (g.neighbours(x) & outside) != pattern) return false;
  }
  return true;
}

bool is_clique(const Web& g, NodeSet s) {
  for (int x = 0; x < g.n(); ++x) {
    if (((s >> x) & 1U) && (g.neighbours(x) & s) != (s & ~(NodeSet{1} << x))) return false;
  }
  return true;
}

std::string format_web(const Web& g) { return std::to_string(g.n()) + " " + to_decimal(g.edges()); }

namespace {

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

int parse_count(std::string_view text) {
  EdgeBits v = parse_decimal(text);
  if (v > kMaxNodes) throw RangeError("node count " + std::string(text) + " out of range");
  return static_cast<int>(v);
}

}  // namespace

Web parse_web(std::string_view text) {
  auto parts = split_ws(text);
  if (parts.size() != 2) throw FormatError("expected 'n N', got '" + std::string(text) + "'");
  return from_numeric(parse_count(parts[0]), parse_decimal(parts[1]));
}

GraphInference make_inference(const Web& lhs, const Web& rhs) {
  if (lhs.n() != rhs.n()) {
    throw SizeMismatchError("inference sides have " + std::to_string(lhs.n()) + " and " +
                            std::to_string(rhs.n()) + " nodes");
  }
  return {lhs, rhs};
}

GraphInference dual(const GraphInference& inf) { return {dual(inf.rhs), dual(inf.lhs)}; }

std::string format_inference(const GraphInference& inf) {
  return std::to_string(inf.n()) + " " + to_decimal(inf.lhs.edges()) + " " +
         to_decimal(inf.rhs.edges());
}

GraphInference parse_graph_inference(std::string_view text) {
  auto parts = split_ws(text);
  if (parts.size() != 3) {
    throw FormatError("expected 'n N_lhs N_rhs', got '" + std::string(text) + "'");
  }
  int n = parse_count(parts[0]);
  return {from_numeric(n, parse_decimal(parts[1])), from_numeric(n, parse_decimal(parts[2]))};
}

// ---------------------------------------------------------------------------
// Formula conversion

namespace {

void check_web_leaves(const Formula& f) {
  if (f.is_binary()) {
    check_web_leaves(f.left());
    check_web_leaves(f.right());
  } else if (f.kind() != FormulaKind::var) {
    throw UnsupportedLeafError("webs need constant-free negation-free formulas, got '" + print(f) +
                               "'");
  }
}

void leaf_order(const Formula& f, std::vector<std::string>& out) {
  if (f.is_binary()) {
    leaf_order(f.left(), out);
    leaf_order(f.right(), out);
  } else {
    out.push_back(f.name());
  }
}

// Returns the node indices below f while setting edges between its two sides.
std::vector<int> fill_edges(const Formula& f, const std::map<std::string, int, std::less<>>& index,
                            Web& g) {
  if (!f.is_binary()) return {index.find(f.name())->second};
  auto l = fill_edges(f.left(), index, g);
  auto r = fill_edges(f.right(), index, g);
  if (f.kind() == FormulaKind::conj) {
    for (int a : l) {
      for (int b : r) g.set_edge(a, b);
    }
  }
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

Formula decompose(const Web& g, NodeSet s, const std::vector<std::string>& names);

// Connected components of g restricted to s, as node sets ordered by least member.
std::vector<NodeSet> components(const Web& g, NodeSet s, bool use_dual) {
  std::vector<NodeSet> out;
  NodeSet left = s;
  while (left != 0) {
    NodeSet comp = NodeSet{1} << std::countr_zero(left);
    NodeSet frontier = comp;
    while (frontier != 0) {
      int x = std::countr_zero(frontier);
      frontier &= frontier - 1;
      NodeSet nb = g.neighbours(x);
      if (use_dual) nb = ~nb & ~(NodeSet{1} << x);
      nb &= s & ~comp;
      comp |= nb;
      frontier |= nb;
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

Formula decompose(const Web& g, NodeSet s, const std::vector<std::string>& names) {
  if (std::popcount(s) == 1) return Formula::var(names[std::countr_zero(s)]);
  FormulaKind kind = FormulaKind::disj;
  auto parts = components(g, s, false);
  if (parts.size() == 1) {
    kind = FormulaKind::conj;
    parts = components(g, s, true);
    if (parts.size() == 1) throw NotCographError("graph " + format_web(g) + " is not P4-free");
  }
  Formula acc = decompose(g, parts[0], names);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc = Formula::binary(kind, acc, decompose(g, parts[i], names));
  }
  return acc;
}

}  // namespace

WebConversion to_web(const Formula& f) {
  check_web_leaves(f);
  std::vector<std::string> order;
  leaf_order(f, order);
  return {to_web(f, order), order};
}

Web to_web(const Formula& f, const std::vector<std::string>& order) {
  check_web_leaves(f);
  std::vector<std::string> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != f.variables()) throw FormatError("node order does not match the formula's variables");
  if (order.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw RangeError("too many variables for a web: " + std::to_string(order.size()));
  }
  std::map<std::string, int, std::less<>> index;
  for (std::size_t i = 0; i < order.size(); ++i) index.emplace(order[i], static_cast<int>(i));
  Web g(static_cast<int>(order.size()));
  fill_edges(f, index, g);
  return g;
}

InferenceConversion to_graph_inference(const FormulaInference& inf) {
  if (inf.lhs.variables() != inf.rhs.variables()) {
    throw FormatError("inference sides use different variables: " + print(inf));
  }
  auto lhs = to_web(inf.lhs);
  Web rhs = to_web(inf.rhs, lhs.names);
  return {{lhs.web, rhs}, lhs.names};
}

Formula from_web(const Web& g) {
  std::vector<std::string> names;
  for (int i = 0; i < g.n(); ++i) names.push_back("x" + std::to_string(i));
  return from_web(g, names);
}

Formula from_web(const Web& g, const std::vector<std::string>& names) {
  if (g.n() == 0) throw NotCographError("the empty graph has no formula");
  if (names.size() != static_cast<std::size_t>(g.n())) {
    throw SizeMismatchError("need one name per node");
  }
  return decompose(g, all_nodes(g.n()), names);
}

FormulaInference from_graph_inference(const GraphInference& inf) {
  return {from_web(inf.lhs), from_web(inf.rhs)};
}

FormulaInference from_graph_inference(const GraphInference& inf,
                                      const std::vector<std::string>& names) {
  return {from_web(inf.lhs, names), from_web(inf.rhs, names)};
}

}  // namespace linbasis
