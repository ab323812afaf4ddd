#pragma once

// Node permutations, least isomorphs, and inference isomorphism.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linbasis/graph.hpp"

namespace linbasis {

class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(int n);
  // Throws RangeError unless values is a bijection on 0..size-1.
  static Permutation from_values(std::span<const int> values);

  int n() const { return n_; }
  int operator[](int x) const { return map_[x]; }
  bool is_identity() const;

  // (q * p)(x) = q(p(x)): apply p first.
  friend Permutation operator*(const Permutation& q, const Permutation& p);
  Permutation inverse() const;

  // Four bits per node.
  std::uint64_t pack() const;
  static Permutation unpack(int n, std::uint64_t packed);

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::array<std::uint8_t, kMaxNodes> map_{};
  int n_ = 0;
};

Permutation transposition(int n, int a, int b);
// "p0 p1 ... p{n-1}"
std::string format_permutation(const Permutation& p);

// Edge {p(x),p(y)} present iff {x,y} present. Throws SizeMismatchError.
Web apply(const Permutation& p, const Web& g);
GraphInference apply(const Permutation& p, const GraphInference& inf);
// Same action on 64-bit codes (n <= 11).
std::uint64_t apply_code(const Permutation& p, std::uint64_t code);

// Largest n accepted by the factorial scans below.
inline constexpr int kMaxScanNodes = 10;

struct LeastForm {
  Web web;
  // Maps the input graph onto web.
  Permutation perm;
};

// Numerically smallest isomorph and the first permutation (lexicographic) reaching it.
LeastForm least_of(const Web& g);
bool is_least(const Web& g);
std::vector<Permutation> automorphisms(const Web& g);

// Least isomorph per graph of a sorted, isomorphism-closed list of codes.
class LeastMap {
 public:
  struct Entry {
    std::uint64_t least;
    Permutation perm;
  };

  LeastMap() = default;
  LeastMap(int n, std::vector<std::uint64_t> codes, std::vector<std::uint32_t> least_index,
           std::vector<std::uint64_t> packed_perms);

  int n() const { return n_; }
  std::size_t size() const { return codes_.size(); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  std::uint64_t code(std::size_t i) const { return codes_[i]; }
  std::uint32_t least_index(std::size_t i) const { return least_index_[i]; }
  Permutation perm(std::size_t i) const { return Permutation::unpack(n_, perms_[i]); }
  std::uint64_t packed_perm(std::size_t i) const { return perms_[i]; }
  bool is_least(std::size_t i) const { return least_index_[i] == i; }
  std::size_t least_count() const;
  // Indices of least graphs in increasing order.
  std::vector<std::uint32_t> least_indices() const;

  std::optional<std::size_t> index_of(std::uint64_t code) const;
  std::optional<Entry> lookup(std::uint64_t code) const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint32_t> least_index_;
  std::vector<std::uint64_t> perms_;
};

// Graphs are processed in increasing order; a graph lowered by some permutation
// inherits the least form of the (already resolved) lower isomorph. Transpositions
// are tried before the full scan. Throws NotSortedError.
LeastMap build_least_map(int n, std::vector<std::uint64_t> codes);
LeastMap build_least_map(const std::vector<Web>& graphs);

// Requires a least lhs (LhsNotLeastError); true iff no automorphism of the lhs
// lowers the rhs.
bool is_least_inference(const GraphInference& inf);

// Least lhs, then least rhs among the lhs automorphisms.
GraphInference canonical(const GraphInference& inf);
bool is_isomorphic(const GraphInference& a, const GraphInference& b);
bool is_self_dual(const GraphInference& inf);

// Memoizes least forms and automorphism groups across many inferences.
class Canonicalizer {
 public:
  GraphInference canonical(const GraphInference& inf);

 private:
  std::map<Web, LeastForm> least_;
  std::map<Web, std::vector<Permutation>> automorphisms_;
};

struct InferenceClass {
  // Member with least (numeric lhs, numeric rhs).
  GraphInference representative;
  GraphInference canonical;
  std::size_t members = 0;
};

// Classes ordered by representative; independent of input order.
std::vector<InferenceClass> classify(const std::vector<GraphInference>& inferences);
std::vector<GraphInference> dedup_inferences(const std::vector<GraphInference>& inferences);

}  // namespace linbasis
