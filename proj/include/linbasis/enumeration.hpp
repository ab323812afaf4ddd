#pragma once

// Labelled graph generation: P4-free graphs by one-node extension, and all graphs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linbasis/graph.hpp"

namespace linbasis {

enum class GraphMode : std::uint8_t { p4free, all };

std::string to_string(GraphMode m);
GraphMode parse_graph_mode(std::string_view text);

// Sorted numerical representations of the P4-free graphs on n nodes (n <= 11).
std::vector<std::uint64_t> p4_free_codes(int n, int jobs = 1);
std::vector<Web> p4_free_graphs(int n, int jobs = 1);

// Largest n accepted without allow_large: streaming and materialized.
inline constexpr int kAllGraphsStreamLimit = 8;
inline constexpr int kAllGraphsListLimit = 7;

// Visits every graph on n nodes in numeric order. Throws BudgetError past the limit.
void for_each_graph(int n, const std::function<void(const Web&)>& visit, bool allow_large = false);
std::vector<Web> all_graphs(int n, bool allow_large = false);
std::vector<std::uint64_t> all_graph_codes(int n, bool allow_large = false);

std::vector<std::uint64_t> graph_codes(int n, GraphMode mode, bool allow_large = false,
                                       int jobs = 1);

}  // namespace linbasis
