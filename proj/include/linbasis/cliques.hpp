#pragma once

// Maximal cliques and the clique / stable-set readings of validity and
// triviality for graph inferences.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linbasis/graph.hpp"

namespace linbasis {

// Maximal cliques sorted ascending by bit pattern.
using CliqueList = std::vector<NodeSet>;

enum class Entailment : std::uint8_t { clique, stable };

std::string to_string(Entailment e);
// "clique" or "stable"; throws FormatError otherwise.
Entailment parse_entailment(std::string_view text);

// Bron-Kerbosch without pivoting.
CliqueList maximal_cliques(const Web& g);

// Every maximal clique P of R contains a maximal clique of S.
bool implies_cliquewise(const Web& r, const Web& s);
// Stable-set reading: implies_cliquewise(dual(S), dual(R)).
bool implies_stablewise(const Web& r, const Web& s);
bool implies(const Web& r, const Web& s, Entailment e);

// Every maximal clique P of R contains a maximal clique of S avoiding x.
bool is_trivial_at(const Web& r, const Web& s, int x);
bool is_trivial(const Web& r, const Web& s);
// First maximal clique of R (in sorted order) containing no maximal clique of S.
std::optional<NodeSet> find_countermodel(const Web& r, const Web& s);

// Clique-list forms used by the search; lists need not be sorted.
template <typename R, typename S>
bool cliquewise(const R& r_cliques, const S& s_cliques) {
  for (auto p : r_cliques) {
    bool found = false;
    for (auto q : s_cliques) {
      if ((q & ~p) == 0) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

template <typename R, typename S>
bool cliquewise_trivial_at(const R& r_cliques, const S& s_cliques, int x) {
  const NodeSet bit = NodeSet{1} << x;
  for (auto p : r_cliques) {
    NodeSet avoid = static_cast<NodeSet>(p) & ~bit;
    bool found = false;
    for (auto q : s_cliques) {
      if ((q & ~avoid) == 0) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

template <typename R, typename S>
bool cliquewise_trivial(const R& r_cliques, const S& s_cliques, int n) {
  for (int x = 0; x < n; ++x) {
    if (cliquewise_trivial_at(r_cliques, s_cliques, x)) return true;
  }
  return false;
}

// Flat store of clique lists, one entry per graph index.
class CliqueCache {
 public:
  CliqueCache() = default;

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint16_t> at(std::size_t i) const {
    return {cliques_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  void push_back(const CliqueList& list);
  void reserve(std::size_t graphs, std::size_t cliques);
  std::size_t clique_total() const { return cliques_.size(); }

 private:
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint16_t> cliques_;
};

// Caches the maximal cliques of each web; jobs > 1 splits the work across threads.
CliqueCache build_clique_cache(std::span<const Web> graphs, int jobs = 1);

}  // namespace linbasis
