#include "linbasis/isomorphism.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace linbasis {

Permutation Permutation::identity(int n) {
  if (n < 0 || n > kMaxNodes) throw RangeError("permutation size out of range");
  Permutation p;
  p.n_ = n;
  for (int i = 0; i < n; ++i) p.map_[i] = static_cast<std::uint8_t>(i);
  return p;
}

Permutation Permutation::from_values(std::span<const int> values) {
  const int n = static_cast<int>(values.size());
  Permutation p = identity(n);
  std::uint32_t seen = 0;
  for (int i = 0; i < n; ++i) {
    int v = values[i];
    if (v < 0 || v >= n || ((seen >> v) & 1U)) throw RangeError("not a permutation");
    seen |= 1U << v;
    p.map_[i] = static_cast<std::uint8_t>(v);
  }
  return p;
}

bool Permutation::is_identity() const {
  for (int i = 0; i < n_; ++i) {
    if (map_[i] != i) return false;
  }
  return true;
}

Permutation operator*(const Permutation& q, const Permutation& p) {
  if (q.n_ != p.n_) throw SizeMismatchError("composing permutations of different sizes");
  Permutation out = Permutation::identity(p.n_);
  for (int i = 0; i < p.n_; ++i) out.map_[i] = q.map_[p.map_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out = identity(n_);
  for (int i = 0; i < n_; ++i) out.map_[map_[i]] = static_cast<std::uint8_t>(i);
  return out;
}

std::uint64_t Permutation::pack() const {
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) out |= std::uint64_t{map_[i]} << (4 * i);
  return out;
}

Permutation Permutation::unpack(int n, std::uint64_t packed) {
  Permutation p = identity(n);
  for (int i = 0; i < n; ++i) p.map_[i] = static_cast<std::uint8_t>((packed >> (4 * i)) & 0xFU);
  return p;
}

Permutation transposition(int n, int a, int b) {
  std::vector<int> values(n);
  std::iota(values.begin(), values.end(), 0);
  std::swap(values[a], values[b]);
  return Permutation::from_values(values);
}

std::string format_permutation(const Permutation& p) {
  std::string out;
  for (int i = 0; i < p.n(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  return out;
}

Web apply(const Permutation& p, const Web& g) {
  if (p.n() != g.n()) throw SizeMismatchError("permutation and graph sizes differ");
  Web out(g.n());
  for (int y = 1; y < g.n(); ++y) {
    for (int x = 0; x < y; ++x) {
      if (g.edge(x, y)) out.set_edge(p[x], p[y]);
    }
  }
  return out;
}

GraphInference apply(const Permutation& p, const GraphInference& inf) {
  return {apply(p, inf.lhs), apply(p, inf.rhs)};
}

namespace {

// Endpoints of each ι position, for n <= 11.
struct EdgeEnds {
  std::array<std::uint8_t, 64> x{};
  std::array<std::uint8_t, 64> y{};
  EdgeEnds() {
    for (int b = 1; b <= kMaxCodeNodes; ++b) {
      for (int a = 0; a < b; ++a) {
        int i = iota_unchecked(a, b);
        if (i < 64) {
          x[i] = static_cast<std::uint8_t>(a);
          y[i] = static_cast<std::uint8_t>(b);
        }
      }
    }
  }
};

const EdgeEnds kEnds;

int edge_index(int a, int b) { return a < b ? iota_unchecked(a, b) : iota_unchecked(b, a); }

}  // namespace

std::uint64_t apply_code(const Permutation& p, std::uint64_t code) {
  std::uint64_t out = 0;
  while (code != 0) {
    int i = std::countr_zero(code);
    code &= code - 1;
    out |= std::uint64_t{1} << edge_index(p[kEnds.x[i]], p[kEnds.y[i]]);
  }
  return out;
}

namespace {

void check_scan(int n) {
  if (n > kMaxScanNodes) {
    throw RangeError("factorial scan limited to n <= " + std::to_string(kMaxScanNodes));
  }
}

// Calls visit(perm_values) for every permutation in lexicographic order; stops when it returns false.
template <typename Visit>
void for_each_permutation(int n, Visit visit) {
  std::vector<int> values(n);
  std::iota(values.begin(), values.end(), 0);
  do {
    if (!visit(values)) return;
  } while (std::next_permutation(values.begin(), values.end()));
}

}  // namespace

LeastForm least_of(const Web& g) {
  check_scan(g.n());
  LeastForm best{g, Permutation::identity(g.n())};
  for_each_permutation(g.n(), [&](const std::vector<int>& values) {
    Permutation p = Permutation::from_values(values);
    Web h = apply(p, g);
    if (h.edges() < best.web.edges()) best = {h, p};
    return true;
  });
  return best;
}

bool is_least(const Web& g) { return least_of(g).web == g; }

std::vector<Permutation> automorphisms(const Web& g) {
  check_scan(g.n());
  std::vector<Permutation> out;
  for_each_permutation(g.n(), [&](const std::vector<int>& values) {
    Permutation p = Permutation::from_values(values);
    if (apply(p, g) == g) out.push_back(p);
    return true;
  });
  return out;
}

LeastMap::LeastMap(int n, std::vector<std::uint64_t> codes, std::vector<std::uint32_t> least_index,
                   std::vector<std::uint64_t> packed_perms)
    : n_(n),
      codes_(std::move(codes)),
      least_index_(std::move(least_index)),
      perms_(std::move(packed_perms)) {}

std::size_t LeastMap::least_count() const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < least_index_.size(); ++i) k += least_index_[i] == i;
  return k;
}

std::vector<std::uint32_t> LeastMap::least_indices() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < least_index_.size(); ++i) {
    if (least_index_[i] == i) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::optional<std::size_t> LeastMap::index_of(std::uint64_t code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::optional<LeastMap::Entry> LeastMap::lookup(std::uint64_t code) const {
  auto i = index_of(code);
  if (!i) return std::nullopt;
  return Entry{codes_[least_index_[*i]], perm(*i)};
}

LeastMap build_least_map(int n, std::vector<std::uint64_t> codes) {
  if (n < 0 || n > kMaxCodeNodes) throw RangeError("least map supports n <= 11");
  for (std::size_t i = 1; i < codes.size(); ++i) {
    if (codes[i] <= codes[i - 1]) throw NotSortedError("graph list is not strictly increasing");
  }
  const std::size_t count = codes.size();
  std::vector<std::uint32_t> least(count);
  std::vector<std::uint64_t> perms(count);
  std::vector<Permutation> swaps;
  for (int b = 1; b < n; ++b) {
    for (int a = 0; a < b; ++a) swaps.push_back(transposition(n, a, b));
  }
  const std::uint64_t id = Permutation::identity(n).pack();

  auto index_of = [&](std::uint64_t code) -> std::size_t {
    auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it == codes.end() || *it != code) {
      throw Error("graph list is not closed under isomorphism");
    }
    return static_cast<std::size_t>(it - codes.begin());
  };
  // Records g as isomorphic, via p, to a smaller already resolved graph.
  auto inherit = [&](std::size_t i, const Permutation& p, std::uint64_t lower) {
    std::size_t j = index_of(lower);
    least[i] = least[j];
    perms[i] = (Permutation::unpack(n, perms[j]) * p).pack();
  };

  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t g = codes[i];
    bool done = false;
    for (const auto& t : swaps) {
      std::uint64_t h = apply_code(t, g);
      if (h < g) {
        inherit(i, t, h);
        done = true;
        break;
      }
    }
    if (!done) {
      for_each_permutation(n, [&](const std::vector<int>& values) {
        Permutation p = Permutation::from_values(values);
        std::uint64_t h = apply_code(p, g);
        if (h < g) {
          inherit(i, p, h);
          done = true;
          return false;
        }
        return true;
      });
    }
    if (!done) {
      least[i] = static_cast<std::uint32_t>(i);
      perms[i] = id;
    }
  }
  return LeastMap(n, std::move(codes), std::move(least), std::move(perms));
}

LeastMap build_least_map(const std::vector<Web>& graphs) {
  int n = graphs.empty() ? 0 : graphs.front().n();
  std::vector<std::uint64_t> codes;
  codes.reserve(graphs.size());
  for (const auto& g : graphs) {
    if (g.n() != n) throw SizeMismatchError("graph list mixes node counts");
    codes.push_back(static_cast<std::uint64_t>(g.edges()));
  }
  return build_least_map(n, std::move(codes));
}

bool is_least_inference(const GraphInference& inf) {
  if (inf.lhs.n() != inf.rhs.n()) throw SizeMismatchError("inference sides differ in size");
  if (!is_least(inf.lhs)) throw LhsNotLeastError("inference lhs is not least");
  for (const auto& a : automorphisms(inf.lhs)) {
    if (apply(a, inf.rhs).edges() < inf.rhs.edges()) return false;
  }
  return true;
}

GraphInference Canonicalizer::canonical(const GraphInference& inf) {
  if (inf.lhs.n() != inf.rhs.n()) throw SizeMismatchError("inference sides differ in size");
  auto lit = least_.find(inf.lhs);
  if (lit == least_.end()) lit = least_.emplace(inf.lhs, least_of(inf.lhs)).first;
  const LeastForm& lf = lit->second;
  auto ait = automorphisms_.find(lf.web);
  if (ait == automorphisms_.end()) ait = automorphisms_.emplace(lf.web, automorphisms(lf.web)).first;
  Web rhs = apply(lf.perm, inf.rhs);
  Web best = rhs;
  for (const auto& a : ait->second) {
    Web h = apply(a, rhs);
    if (h.edges() < best.edges()) best = h;
  }
  return {lf.web, best};
}

GraphInference canonical(const GraphInference& inf) { return Canonicalizer().canonical(inf); }

bool is_isomorphic(const GraphInference& a, const GraphInference& b) {
  if (a.n() != b.n()) throw SizeMismatchError("inferences differ in node count");
  Canonicalizer c;
  return c.canonical(a) == c.canonical(b);
}

bool is_self_dual(const GraphInference& inf) { return is_isomorphic(inf, dual(inf)); }

std::vector<InferenceClass> classify(const std::vector<GraphInference>& inferences) {
  Canonicalizer c;
  std::map<GraphInference, InferenceClass> classes;
  for (const auto& inf : inferences) {
    GraphInference key = c.canonical(inf);
    auto [it, fresh] = classes.try_emplace(key, InferenceClass{inf, key, 0});
    if (!fresh && inf < it->second.representative) it->second.representative = inf;
    ++it->second.members;
  }
  std::vector<InferenceClass> out;
  for (auto& [key, cls] : classes) out.push_back(cls);
  std::sort(out.begin(), out.end(), [](const InferenceClass& a, const InferenceClass& b) {
    return a.representative < b.representative;
  });
  return out;
}

std::vector<GraphInference> dedup_inferences(const std::vector<GraphInference>& inferences) {
  std::vector<GraphInference> out;
  for (const auto& cls : classify(inferences)) out.push_back(cls.representative);
  return out;
}

}  // namespace linbasis
