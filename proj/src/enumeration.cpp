#include "linbasis/enumeration.hpp"

#include <algorithm>
#include <array>
#include <thread>

namespace linbasis {

std::string to_string(GraphMode m) { return m == GraphMode::p4free ? "p4free" : "all"; }

GraphMode parse_graph_mode(std::string_view text) {
  if (text == "p4free") return GraphMode::p4free;
  if (text == "all") return GraphMode::all;
  throw FormatError("unknown graph mode '" + std::string(text) + "'");
}

namespace {

// Index: bits 0..2 are the old triple's edges (ab, ac, bc), bits 3..5 the new
// node's edges to a, b, c. True when the four nodes induce a path.
constexpr std::array<bool, 64> make_p4_table() {
  std::array<bool, 64> table{};
  for (int idx = 0; idx < 64; ++idx) {
    int e_ab = idx & 1, e_ac = (idx >> 1) & 1, e_bc = (idx >> 2) & 1;
    int e_da = (idx >> 3) & 1, e_db = (idx >> 4) & 1, e_dc = (idx >> 5) & 1;
    int deg[4] = {e_ab + e_ac + e_da, e_ab + e_bc + e_db, e_ac + e_bc + e_dc, e_da + e_db + e_dc};
    bool path = deg[0] + deg[1] + deg[2] + deg[3] == 6;
    for (int d : deg) path = path && (d == 1 || d == 2);
    table[idx] = path;
  }
  return table;
}

constexpr auto kP4 = make_p4_table();

struct Triple {
  int a, b, c;
};

std::vector<Triple> triples(int k) {
  std::vector<Triple> out;
  for (int c = 2; c < k; ++c) {
    for (int b = 1; b < c; ++b) {
      for (int a = 0; a < b; ++a) out.push_back({a, b, c});
    }
  }
  return out;
}

std::vector<std::uint64_t> extend(const std::vector<std::uint64_t>& parents, int k, int jobs) {
  // Parents live on k nodes; children get node k.
  const auto trips = triples(k);
  const std::size_t t = trips.size();
  std::vector<std::uint8_t> pattern(parents.size() * t);
  for (std::size_t p = 0; p < parents.size(); ++p) {
    std::uint64_t code = parents[p];
    for (std::size_t i = 0; i < t; ++i) {
      auto [a, b, c] = trips[i];
      pattern[p * t + i] = static_cast<std::uint8_t>(((code >> iota_unchecked(a, b)) & 1U) |
                                                     (((code >> iota_unchecked(a, c)) & 1U) << 1) |
                                                     (((code >> iota_unchecked(b, c)) & 1U) << 2));
    }
  }
  const std::uint64_t patterns = std::uint64_t{1} << k;
  const int shift = edge_count(k);
  auto work = [&](std::uint64_t n_begin, std::uint64_t n_end, std::vector<std::uint64_t>& out) {
    std::vector<std::uint8_t> nbits(t);
    for (std::uint64_t nb = n_begin; nb < n_end; ++nb) {
      for (std::size_t i = 0; i < t; ++i) {
        auto [a, b, c] = trips[i];
        nbits[i] = static_cast<std::uint8_t>((((nb >> a) & 1U) | (((nb >> b) & 1U) << 1) |
                                              (((nb >> c) & 1U) << 2))
                                             << 3);
      }
      for (std::size_t p = 0; p < parents.size(); ++p) {
        const std::uint8_t* row = pattern.data() + p * t;
        bool ok = true;
        for (std::size_t i = 0; i < t; ++i) {
          if (kP4[row[i] | nbits[i]]) {
            ok = false;
            break;
          }
        }
        if (ok) out.push_back(parents[p] | (nb << shift));
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(patterns)));
  std::vector<std::vector<std::uint64_t>> parts(jobs);
  if (jobs == 1) {
    work(0, patterns, parts[0]);
    return std::move(parts[0]);
  }
  {
    std::vector<std::jthread> threads;
    for (int j = 0; j < jobs; ++j) {
      std::uint64_t b = patterns * j / jobs, e = patterns * (j + 1) / jobs;
      threads.emplace_back([&, b, e, j] { work(b, e, parts[j]); });
    }
  }
  std::vector<std::uint64_t> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

void check_budget(int n, int limit, bool allow_large) {
  if (n < 0 || n > kMaxNodes) throw RangeError("node count " + std::to_string(n) + " out of range");
  if (n > limit && !allow_large) {
    throw BudgetError("all graphs on " + std::to_string(n) + " nodes exceeds the default budget (n <= " +
                      std::to_string(limit) + ")");
  }
}

}  // namespace

std::vector<std::uint64_t> p4_free_codes(int n, int jobs) {
  if (n < 0 || n > kMaxCodeNodes) {
    throw RangeError("P4-free generation supports 0 <= n <= " + std::to_string(kMaxCodeNodes));
  }
  std::vector<std::uint64_t> level{0};
  for (int k = 1; k < n; ++k) level = extend(level, k, jobs);
  return level;
}

std::vector<Web> p4_free_graphs(int n, int jobs) {
  auto codes = p4_free_codes(n, jobs);
  std::vector<Web> out;
  out.reserve(codes.size());
  for (auto c : codes) out.push_back(from_numeric(n, c));
  return out;
}

void for_each_graph(int n, const std::function<void(const Web&)>& visit, bool allow_large) {
  check_budget(n, kAllGraphsStreamLimit, allow_large);
  const int bits = edge_count(n);
  if (bits >= 64) throw BudgetError("too many graphs to enumerate");
  const std::uint64_t count = std::uint64_t{1} << bits;
  for (std::uint64_t c = 0; c < count; ++c) visit(from_numeric(n, c));
}

std::vector<Web> all_graphs(int n, bool allow_large) {
  check_budget(n, kAllGraphsListLimit, allow_large);
  std::vector<Web> out;
  for_each_graph(n, [&](const Web& g) { out.push_back(g); }, true);
  return out;
}

std::vector<std::uint64_t> all_graph_codes(int n, bool allow_large) {
  check_budget(n, kAllGraphsListLimit, allow_large);
  if (n > kMaxCodeNodes) throw RangeError("graph codes need n <= " + std::to_string(kMaxCodeNodes));
  const std::uint64_t count = std::uint64_t{1} << edge_count(n);
  std::vector<std::uint64_t> out(count);
  for (std::uint64_t c = 0; c < count; ++c) out[c] = c;
  return out;
}

std::vector<std::uint64_t> graph_codes(int n, GraphMode mode, bool allow_large, int jobs) {
  return mode == GraphMode::p4free ? p4_free_codes(n, jobs) : all_graph_codes(n, allow_large);
}

}  // namespace linbasis
