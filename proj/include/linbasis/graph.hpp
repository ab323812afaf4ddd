#pragma once

// Simple undirected graphs on nodes 0..n-1 with the edge {x,y}, x < y, stored
// at bit iota(x,y) = x + y(y-1)/2 of a wide unsigned integer.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "linbasis/error.hpp"
#include "linbasis/formula.hpp"

namespace linbasis {

using EdgeBits = unsigned __int128;
using NodeSet = std::uint32_t;

inline constexpr int kMaxNodes = 16;
// Largest n whose edge field fits a 64-bit code.
inline constexpr int kMaxCodeNodes = 11;

constexpr int edge_count(int n) { return n * (n - 1) / 2; }

constexpr int iota_unchecked(int x, int y) { return x + y * (y - 1) / 2; }

// Throws OrderError unless 0 <= x < y.
int iota(int x, int y);

constexpr NodeSet all_nodes(int n) { return n >= 32 ? ~NodeSet{0} : (NodeSet{1} << n) - 1; }

class Web {
 public:
  Web() = default;
  // Throws RangeError for n outside 0..16.
  explicit Web(int n);

  int n() const { return n_; }
  EdgeBits edges() const { return edges_; }

  bool edge(int x, int y) const;
  void set_edge(int x, int y, bool present = true);
  // Neighbours of x as a node set.
  NodeSet neighbours(int x) const;
  int edge_total() const;

  friend bool operator==(const Web&, const Web&) = default;
  // Orders by node count, then by numerical representation.
  friend bool operator<(const Web& a, const Web& b) {
    return a.n_ != b.n_ ? a.n_ < b.n_ : a.edges_ < b.edges_;
  }

 private:
  friend Web from_numeric(int n, EdgeBits code);
  int n_ = 0;
  EdgeBits edges_ = 0;
};

EdgeBits numeric(const Web& g);
// Throws RangeError if code does not fit in n(n-1)/2 bits or n is out of range.
Web from_numeric(int n, EdgeBits code);

std::string to_decimal(EdgeBits value);
// Throws FormatError on anything but a nonempty run of decimal digits that fits.
EdgeBits parse_decimal(std::string_view text);

Web complete_graph(int n);

bool is_p4_free(const Web& g);
// Subgraph on the members of s, renumbered in increasing order.
Web induced(const Web& g, NodeSet s);
Web dual(const Web& g);
bool is_module(const Web& g, NodeSet m);
bool is_clique(const Web& g, NodeSet s);

// "n N"
std::string format_web(const Web& g);
Web parse_web(std::string_view text);

struct GraphInference {
  Web lhs;
  Web rhs;

  int n() const { return lhs.n(); }
  friend bool operator==(const GraphInference&, const GraphInference&) = default;
  friend bool operator<(const GraphInference& a, const GraphInference& b) {
    if (a.lhs == b.lhs) return a.rhs < b.rhs;
    return a.lhs < b.lhs;
  }
};

// Throws SizeMismatchError when the sides differ in node count.
GraphInference make_inference(const Web& lhs, const Web& rhs);
GraphInference dual(const GraphInference& inf);

// "n N_lhs N_rhs"
std::string format_inference(const GraphInference& inf);
GraphInference parse_graph_inference(std::string_view text);

struct WebConversion {
  Web web;
  // names[i] is the variable placed on node i.
  std::vector<std::string> names;
};

// Nodes follow the first-occurrence order of the variables.
WebConversion to_web(const Formula& f);
// Nodes follow the given order, which must list exactly the formula's variables.
Web to_web(const Formula& f, const std::vector<std::string>& order);

struct InferenceConversion {
  GraphInference inference;
  std::vector<std::string> names;
};

// Node order by first occurrence in the lhs; both sides must share one variable set.
InferenceConversion to_graph_inference(const FormulaInference& inf);

// Cotree decomposition; leaves are named x0..x{n-1} unless names are given.
Formula from_web(const Web& g);
Formula from_web(const Web& g, const std::vector<std::string>& names);
FormulaInference from_graph_inference(const GraphInference& inf);
FormulaInference from_graph_inference(const GraphInference& inf,
                                      const std::vector<std::string>& names);

}  // namespace linbasis
