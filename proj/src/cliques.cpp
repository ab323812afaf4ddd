#include "linbasis/cliques.hpp"

#include <algorithm>
#include <bit>
#include <thread>

namespace linbasis {

std::string to_string(Entailment e) { return e == Entailment::clique ? "clique" : "stable"; }

Entailment parse_entailment(std::string_view text) {
  if (text == "clique") return Entailment::clique;
  if (text == "stable") return Entailment::stable;
  throw FormatError("unknown entailment '" + std::string(text) + "'");
}

namespace {

void bron_kerbosch(const std::vector<NodeSet>& adj, NodeSet r, NodeSet p, NodeSet x,
                   CliqueList& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  while (p != 0) {
    int v = std::countr_zero(p);
    NodeSet bit = NodeSet{1} << v;
    bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
    p &= ~bit;
    x |= bit;
  }
}

void check_sizes(const Web& r, const Web& s) {
  if (r.n() != s.n()) {
    throw SizeMismatchError("graphs have " + std::to_string(r.n()) + " and " +
                            std::to_string(s.n()) + " nodes");
  }
}

}  // namespace

CliqueList maximal_cliques(const Web& g) {
  CliqueList out;
  if (g.n() == 0) {
    out.push_back(0);
    return out;
  }
  std::vector<NodeSet> adj(g.n());
  for (int v = 0; v < g.n(); ++v) adj[v] = g.neighbours(v);
  bron_kerbosch(adj, 0, all_nodes(g.n()), 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool implies_cliquewise(const Web& r, const Web& s) {
  check_sizes(r, s);
  return cliquewise(maximal_cliques(r), maximal_cliques(s));
}

bool implies_stablewise(const Web& r, const Web& s) {
  check_sizes(r, s);
  return implies_cliquewise(dual(s), dual(r));
}

bool implies(const Web& r, const Web& s, Entailment e) {
  return e == Entailment::clique ? implies_cliquewise(r, s) : implies_stablewise(r, s);
}

bool is_trivial_at(const Web& r, const Web& s, int x) {
  check_sizes(r, s);
  if (x < 0 || x >= r.n()) throw RangeError("node " + std::to_string(x) + " out of range");
  return cliquewise_trivial_at(maximal_cliques(r), maximal_cliques(s), x);
}

bool is_trivial(const Web& r, const Web& s) {
  check_sizes(r, s);
  return cliquewise_trivial(maximal_cliques(r), maximal_cliques(s), r.n());
}

std::optional<NodeSet> find_countermodel(const Web& r, const Web& s) {
  check_sizes(r, s);
  auto s_cliques = maximal_cliques(s);
  for (NodeSet p : maximal_cliques(r)) {
    bool covered = std::any_of(s_cliques.begin(), s_cliques.end(),
                               [p](NodeSet q) { return (q & ~p) == 0; });
    if (!covered) return p;
  }
  return std::nullopt;
}

void CliqueCache::push_back(const CliqueList& list) {
  for (NodeSet c : list) cliques_.push_back(static_cast<std::uint16_t>(c));
  offsets_.push_back(static_cast<std::uint32_t>(cliques_.size()));
}

void CliqueCache::reserve(std::size_t graphs, std::size_t cliques) {
  offsets_.reserve(graphs + 1);
  cliques_.reserve(cliques);
}

CliqueCache build_clique_cache(std::span<const Web> graphs, int jobs) {
  jobs = std::max(1, jobs);
  std::vector<CliqueCache> parts(static_cast<std::size_t>(jobs));
  const std::size_t chunk = (graphs.size() + jobs - 1) / jobs;
  auto work = [&](int j) {
    std::size_t begin = std::min(graphs.size(), chunk * j);
    std::size_t end = std::min(graphs.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) parts[j].push_back(maximal_cliques(graphs[i]));
  };
  if (jobs == 1) {
    work(0);
    return std::move(parts[0]);
  }
  {
    std::vector<std::jthread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(work, j);
  }
  CliqueCache out;
  std::size_t total = 0;
  for (auto& p : parts) total += p.clique_total();
  out.reserve(graphs.size(), total);
  for (auto& p : parts) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto span = p.at(i);
      out.push_back(CliqueList(span.begin(), span.end()));
    }
  }
  return out;
}

}  // namespace linbasis
