#include "linbasis/search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "linbasis/digest.hpp"

namespace linbasis {

namespace fs = std::filesystem;

void check_search_budget(int n, GraphMode mode, bool long_run) {
  if (n < 0) throw RangeError("negative node count");
  if (mode == GraphMode::p4free) {
    if (n > 9) throw BudgetError("P4-free search is limited to n <= 9");
    if (n == 9 && !long_run) throw BudgetError("n=9 needs the long-run flag");
  } else {
    if (n > 7) throw BudgetError("all-graphs search is limited to n <= 7");
    if (n >= 6 && !long_run) throw BudgetError("all-graphs search at n >= 6 needs the long-run flag");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

void log(const SearchConfig& config, const std::string& message) {
  if (config.log) config.log(message);
}

std::string elapsed(Clock::time_point since) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
  return std::to_string(ms / 1000) + "." + std::to_string((ms % 1000) / 100) + "s";
}

[[noreturn]] void missing(int phase) {
  throw MissingPhaseError("phase " + std::to_string(phase) + " results are not available");
}

// Runs fn(item, out) over items 0..count-1 and concatenates the outputs in item order.
template <typename Out, typename Fn>
std::vector<Out> ordered_map(std::size_t count, int jobs, Fn fn) {
  std::vector<std::vector<Out>> parts(count);
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, parts[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    for (int j = 0; j < jobs; ++j) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i, parts[i]);
      });
    }
  }
  std::size_t total = 0;
  for (auto& p : parts) total += p.size();
  std::vector<Out> out;
  out.reserve(total);
  for (auto& p : parts) {
    out.insert(out.end(), p.begin(), p.end());
    std::vector<Out>().swap(p);
  }
  return out;
}

const std::vector<std::uint64_t>& codes_of(const SearchState& state) {
  if (state.least) return state.least->codes();
  if (state.graphs) return *state.graphs;
  missing(1);
}

std::uint64_t full_mask(int n) {
  int bits = edge_count(n);
  return bits == 0 ? 0 : (~std::uint64_t{0} >> (64 - bits));
}

std::vector<std::uint32_t> build_dual_index(int n, const std::vector<std::uint64_t>& codes) {
  std::vector<std::uint32_t> out(codes.size());
  const std::uint64_t mask = full_mask(n);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    auto it = std::lower_bound(codes.begin(), codes.end(), codes[i] ^ mask);
    if (it == codes.end() || *it != (codes[i] ^ mask)) {
      throw Error("graph list is not closed under complement");
    }
    out[i] = static_cast<std::uint32_t>(it - codes.begin());
  }
  return out;
}

// Clique lists of the two graphs whose cliquewise check decides R -> S.
struct EntailmentView {
  const CliqueCache& cache;
  const std::vector<std::uint32_t>& dual;
  Entailment mode;

  std::pair<std::uint32_t, std::uint32_t> sides(std::uint32_t r, std::uint32_t s) const {
    if (mode == Entailment::clique) return {r, s};
    return {dual[s], dual[r]};
  }
  bool valid(std::uint32_t r, std::uint32_t s) const {
    auto [a, b] = sides(r, s);
    return cliquewise(cache.at(a), cache.at(b));
  }
  bool trivial(std::uint32_t r, std::uint32_t s, int n) const {
    auto [a, b] = sides(r, s);
    return cliquewise_trivial(cache.at(a), cache.at(b), n);
  }
};

EntailmentView view(const SearchConfig& config, const SearchState& state) {
  if (!state.cliques) missing(3);
  if (config.entailment == Entailment::stable && state.dual_index.size() != state.cliques->size()) {
    throw MissingPhaseError("complement index is not available");
  }
  return {*state.cliques, state.dual_index, config.entailment};
}

// Contiguous ranges of an lhs-sorted inference list, keyed by lhs index.
struct Groups {
  std::vector<std::uint32_t> lhs;
  std::vector<std::size_t> begin;
  std::vector<std::size_t> end;

  explicit Groups(const std::vector<IndexPair>& list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (lhs.empty() || lhs.back() != list[i].lhs) {
        if (!lhs.empty()) end.push_back(i);
        lhs.push_back(list[i].lhs);
        begin.push_back(i);
      }
    }
    if (!lhs.empty()) end.push_back(list.size());
  }

  std::optional<std::size_t> find(std::uint32_t r) const {
    auto it = std::lower_bound(lhs.begin(), lhs.end(), r);
    if (it == lhs.end() || *it != r) return std::nullopt;
    return static_cast<std::size_t>(it - lhs.begin());
  }
};

// Applies a node permutation to 64-bit codes one byte at a time.
class CodeTransport {
 public:
  CodeTransport(const Permutation& p, int n) : bytes_((edge_count(n) + 7) / 8) {
    std::array<std::uint64_t, 64> image{};
    for (int y = 1; y < n; ++y) {
      for (int x = 0; x < y; ++x) {
        int a = p[x], b = p[y];
        if (a > b) std::swap(a, b);
        image[iota_unchecked(x, y)] = std::uint64_t{1} << iota_unchecked(a, b);
      }
    }
    for (int j = 0; j < bytes_; ++j) {
      auto& t = tables_[j];
      t[0] = 0;
      for (int b = 1; b < 256; ++b) t[b] = t[b & (b - 1)] | image[8 * j + std::countr_zero(unsigned(b))];
    }
  }

  std::uint64_t operator()(std::uint64_t code) const {
    std::uint64_t out = 0;
    for (int j = 0; j < bytes_; ++j) out |= tables_[j][(code >> (8 * j)) & 0xFFU];
    return out;
  }

 private:
  int bytes_;
  std::array<std::array<std::uint64_t, 256>, 8> tables_;
};

// Open-addressing map from code to position.
class CodeIndex {
 public:
  explicit CodeIndex(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    keys_.assign(cap, kEmpty);
    values_.assign(cap, 0);
    mask_ = cap - 1;
  }

  void insert(std::uint64_t key, std::uint32_t value) {
    std::size_t h = slot(key);
    while (keys_[h] != kEmpty) h = (h + 1) & mask_;
    keys_[h] = key;
    values_[h] = value;
  }

  std::optional<std::uint32_t> find(std::uint64_t key) const {
    for (std::size_t h = slot(key); keys_[h] != kEmpty; h = (h + 1) & mask_) {
      if (keys_[h] == key) return values_[h];
    }
    return std::nullopt;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
  std::size_t slot(std::uint64_t key) const {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 20) & mask_;
  }
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t mask_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Phases

std::vector<std::uint64_t> phase1_graphs(const SearchConfig& config) {
  check_search_budget(config.n, config.mode, config.long_run);
  return graph_codes(config.n, config.mode, true, config.jobs);
}

LeastMap phase2_least_map(const SearchConfig& config, const SearchState& state) {
  if (!state.graphs) missing(1);
  return build_least_map(config.n, *state.graphs);
}

CliqueCache phase3_cliques(const SearchConfig& config, const SearchState& state) {
  const auto& codes = codes_of(state);
  if (!state.least) missing(2);
  const int n = config.n;
  auto lists = ordered_map<CliqueList>((codes.size() + 4095) / 4096, config.jobs,
                                       [&](std::size_t chunk, std::vector<CliqueList>& out) {
                                         std::size_t b = chunk * 4096;
                                         std::size_t e = std::min(codes.size(), b + 4096);
                                         for (std::size_t i = b; i < e; ++i) {
                                           out.push_back(maximal_cliques(from_numeric(n, codes[i])));
                                         }
                                       });
  CliqueCache cache;
  std::size_t total = 0;
  for (const auto& l : lists) total += l.size();
  cache.reserve(lists.size(), total);
  for (const auto& l : lists) cache.push_back(l);
  return cache;
}

ValidInferences phase4_valid_inferences(const SearchConfig& config, const SearchState& state) {
  if (!state.least) missing(2);
  auto ent = view(config, state);
  const auto least = state.least->least_indices();
  const auto count = static_cast<std::uint32_t>(state.least->size());
  ValidInferences out;
  out.retained = std::uint64_t{count} * least.size() <= kRetainValidLimit;
  if (out.retained) {
    out.pairs = ordered_map<IndexPair>(least.size(), config.jobs, [&](std::size_t i, std::vector<IndexPair>& v) {
      const std::uint32_t r = least[i];
      for (std::uint32_t s = 0; s < count; ++s) {
        if (s != r && ent.valid(r, s)) v.push_back({r, s});
      }
    });
    out.count = out.pairs.size();
    return out;
  }
  auto counts = ordered_map<std::uint64_t>(least.size(), config.jobs, [&](std::size_t i, std::vector<std::uint64_t>& v) {
    const std::uint32_t r = least[i];
    std::uint64_t k = 0;
    for (std::uint32_t s = 0; s < count; ++s) k += s != r && ent.valid(r, s);
    v.push_back(k);
  });
  for (auto k : counts) out.count += k;
  return out;
}

std::vector<IndexPair> phase5_nontrivial(const SearchConfig& config, const SearchState& state) {
  if (!state.valid) missing(4);
  auto ent = view(config, state);
  if (!state.valid->retained) {
    const auto least = state.least->least_indices();
    const auto count = static_cast<std::uint32_t>(state.least->size());
    return ordered_map<IndexPair>(least.size(), config.jobs, [&](std::size_t i, std::vector<IndexPair>& out) {
      const std::uint32_t r = least[i];
      for (std::uint32_t s = 0; s < count; ++s) {
        if (s != r && ent.valid(r, s) && !ent.trivial(r, s, config.n)) out.push_back({r, s});
      }
    });
  }
  const auto& valid = state.valid->pairs;
  const std::size_t chunk = 65536;
  return ordered_map<IndexPair>((valid.size() + chunk - 1) / chunk, config.jobs,
                                [&](std::size_t c, std::vector<IndexPair>& out) {
                                  std::size_t e = std::min(valid.size(), (c + 1) * chunk);
                                  for (std::size_t i = c * chunk; i < e; ++i) {
                                    if (!ent.trivial(valid[i].lhs, valid[i].rhs, config.n)) {
                                      out.push_back(valid[i]);
                                    }
                                  }
                                });
}

std::vector<IndexPair> phase6_logically_minimal(const SearchConfig& config, const SearchState& state) {
  if (!state.nontrivial) missing(5);
  if (!state.least) missing(2);
  const auto& lm = *state.least;
  const auto& list = *state.nontrivial;
  const Groups groups(list);
  const int n = config.n;
  return ordered_map<IndexPair>(groups.lhs.size(), config.jobs,
                                [&](std::size_t g, std::vector<IndexPair>& out) {
    const std::size_t b = groups.begin[g], e = groups.end[g];
    CodeIndex phi(e - b);
    for (std::size_t i = b; i < e; ++i) {
      phi.insert(lm.code(list[i].rhs), static_cast<std::uint32_t>(i - b));
    }
    std::vector<char> implied(e - b, 0);
    for (std::size_t i = b; i < e; ++i) {
      // Φ of the intermediate is Φ of its least form carried back by the inverse isomorphism.
      const std::uint32_t mid = list[i].rhs;
      auto h = groups.find(lm.least_index(mid));
      if (!h) continue;
      CodeTransport back(lm.perm(mid).inverse(), n);
      for (std::size_t j = groups.begin[*h]; j < groups.end[*h]; ++j) {
        if (auto pos = phi.find(back(lm.code(list[j].rhs)))) implied[*pos] = 1;
      }
    }
    for (std::size_t i = b; i < e; ++i) {
      if (!implied[i - b]) out.push_back(list[i]);
    }
  });
}

Classification phase7_independent(const SearchConfig& config, const SearchState& state) {
  if (!state.minimal) missing(6);
  if (!state.least) missing(2);
  const auto& lm = *state.least;
  const auto& minimal = *state.minimal;
  const int n = config.n;
  Classification out;
  out.rule_of = ordered_map<std::int32_t>(minimal.size(), config.jobs,
                                          [&](std::size_t i, std::vector<std::int32_t>& o) {
                                            GraphInference inf{from_numeric(n, lm.code(minimal[i].lhs)),
                                                               from_numeric(n, lm.code(minimal[i].rhs))};
                                            auto r = first_matching_rule(inf, config.rules);
                                            o.push_back(r ? static_cast<std::int32_t>(*r) : -1);
                                          });
  out.per_rule.assign(config.rules.size(), 0);
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    if (out.rule_of[i] < 0) {
      out.residual.push_back(minimal[i]);
    } else {
      ++out.per_rule[out.rule_of[i]];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

std::string checkpoint_path(const SearchConfig& config, int phase) {
  fs::path dir = fs::path(config.checkpoint_dir) /
                 ("n" + std::to_string(config.n) + "-" + to_string(config.mode) + "-" +
                  to_string(config.entailment));
  std::string file = "phase" + std::to_string(phase);
  if (phase == 7) file += "-" + config.rules.digest().substr(0, 16);
  return (dir / (file + ".ckpt")).string();
}

namespace {

std::string header_line(const SearchConfig& config, int phase) {
  return "linbasis-ckpt v1; phase=" + std::to_string(phase) + "; n=" + std::to_string(config.n) +
         "; mode=" + to_string(config.mode) + "; entailment=" + to_string(config.entailment) +
         "; rules=" + (phase == 7 ? config.rules.digest() : std::string("-"));
}

class CheckpointWriter {
 public:
  CheckpointWriter(std::string path, const std::string& header)
      : path_(std::move(path)), tmp_(path_ + ".tmp") {
    fs::create_directories(fs::path(path_).parent_path());
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("cannot write checkpoint '" + tmp_ + "'");
    line(header);
  }

  void line(std::string_view s) {
    out_ << s << '\n';
    hash_.update(s);
    hash_.update("\n");
  }

  std::string finish(const std::string& parent) {
    hash_.update("parent=" + parent);
    std::string digest = hash_.hex_digest();
    out_ << "end digest=" << digest << " parent=" << parent << '\n';
    out_.close();
    if (!out_) throw Error("failed writing checkpoint '" + tmp_ + "'");
    fs::rename(tmp_, path_);
    return digest;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  Sha256 hash_;
};

[[noreturn]] void corrupt(const std::string& what) { throw CheckpointCorruptError(what); }

// Streams the payload lines of a checkpoint to on_line. Returns the digest, or
// nothing when the file is absent. Throws CheckpointCorruptError on any mismatch.
template <typename OnLine>
std::optional<std::string> read_checkpoint(const std::string& path, const std::string& header,
                                           const std::string& parent, OnLine on_line) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Sha256 hash;
  std::string line;
  if (!std::getline(in, line) || line != header) corrupt(path + ": header does not match");
  hash.update(line);
  hash.update("\n");
  bool footer = false;
  std::string digest, stored_parent;
  while (std::getline(in, line)) {
    if (footer) corrupt(path + ": data after footer");
    if (line.starts_with("end digest=")) {
      auto sp = line.find(" parent=");
      if (sp == std::string::npos) corrupt(path + ": bad footer");
      digest = line.substr(11, sp - 11);
      stored_parent = line.substr(sp + 8);
      footer = true;
      continue;
    }
    hash.update(line);
    hash.update("\n");
    on_line(std::string_view(line));
  }
  if (!footer) corrupt(path + ": missing footer");
  if (stored_parent != parent) corrupt(path + ": parent digest does not match");
  hash.update("parent=" + stored_parent);
  if (hash.hex_digest() != digest) corrupt(path + ": content digest does not match");
  return digest;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    corrupt("bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> fields(std::string_view s, char sep = ' ') {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    auto j = s.find(sep, i);
    if (j == std::string_view::npos) j = s.size();
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string pair_line(int n, const LeastMap& lm, const IndexPair& p) {
  return std::to_string(n) + " " + std::to_string(lm.code(p.lhs)) + " " + std::to_string(lm.code(p.rhs));
}

IndexPair parse_pair(std::span<const std::string_view> f, int n, const LeastMap& lm) {
  if (f.size() != 3 || parse_u64(f[0]) != static_cast<std::uint64_t>(n)) corrupt("bad inference line");
  auto l = lm.index_of(parse_u64(f[1]));
  auto r = lm.index_of(parse_u64(f[2]));
  if (!l || !r) corrupt("inference refers to an unknown graph");
  return {static_cast<std::uint32_t>(*l), static_cast<std::uint32_t>(*r)};
}

void write_phase(int phase, const SearchConfig& config, const SearchState& state, CheckpointWriter& w) {
  const int n = config.n;
  switch (phase) {
    case 1:
      w.line("phase1 n=" + std::to_string(n) + " mode=" + to_string(config.mode));
      for (auto c : *state.graphs) w.line(std::to_string(c));
      break;
    case 2: {
      const auto& lm = *state.least;
      for (std::size_t i = 0; i < lm.size(); ++i) {
        w.line(std::to_string(lm.code(i)) + " -> " + std::to_string(lm.code(lm.least_index(i))) + " : " +
               format_permutation(lm.perm(i)));
      }
      break;
    }
    case 3: {
      const auto& lm = *state.least;
      for (std::size_t i = 0; i < lm.size(); ++i) {
        std::string s = std::to_string(lm.code(i)) + " : ";
        bool first = true;
        for (auto c : state.cliques->at(i)) {
          if (!first) s += ',';
          s += std::to_string(c);
          first = false;
        }
        w.line(s);
      }
      break;
    }
    case 4:
      if (!state.valid->retained) {
        w.line("count " + std::to_string(state.valid->count));
        break;
      }
      for (const auto& p : state.valid->pairs) w.line(pair_line(n, *state.least, p));
      break;
    case 5:
    case 6: {
      const auto& list = phase == 5 ? *state.nontrivial : *state.minimal;
      for (const auto& p : list) w.line(pair_line(n, *state.least, p));
      break;
    }
    case 7: {
      const auto& cls = *state.classified;
      const auto& minimal = *state.minimal;
      for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::string body = pair_line(n, *state.least, minimal[i]);
        if (cls.rule_of[i] < 0) {
          w.line("residual " + body);
        } else {
          w.line("instance " + config.rules.rules[cls.rule_of[i]].name + " " + body);
        }
      }
      break;
    }
    default:
      break;
  }
}

std::optional<std::string> read_phase(int phase, const SearchConfig& config, SearchState& state,
                                      const std::string& parent) {
  const int n = config.n;
  const std::string path = checkpoint_path(config, phase);
  const std::string header = header_line(config, phase);
  switch (phase) {
    case 1: {
      std::vector<std::uint64_t> codes;
      bool seen_header = false;
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        if (!seen_header) {
          if (line != "phase1 n=" + std::to_string(n) + " mode=" + to_string(config.mode)) {
            corrupt(path + ": bad phase-1 header");
          }
          seen_header = true;
          return;
        }
        codes.push_back(parse_u64(line));
      });
      if (d) {
        if (!std::is_sorted(codes.begin(), codes.end())) corrupt(path + ": graph list not sorted");
        state.graphs = std::move(codes);
      }
      return d;
    }
    case 2: {
      const auto& codes = *state.graphs;
      std::vector<std::uint32_t> least;
      std::vector<std::uint64_t> perms;
      least.reserve(codes.size());
      perms.reserve(codes.size());
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        auto f = fields(line);
        std::size_t i = least.size();
        if (f.size() != 4 + static_cast<std::size_t>(n) || f[1] != "->" || f[3] != ":" || i >= codes.size() ||
            parse_u64(f[0]) != codes[i]) {
          corrupt(path + ": bad least-map line");
        }
        auto it = std::lower_bound(codes.begin(), codes.end(), parse_u64(f[2]));
        if (it == codes.end() || *it != parse_u64(f[2])) corrupt(path + ": unknown least graph");
        least.push_back(static_cast<std::uint32_t>(it - codes.begin()));
        std::vector<int> values;
        for (int k = 0; k < n; ++k) values.push_back(static_cast<int>(parse_u64(f[4 + k])));
        try {
          perms.push_back(Permutation::from_values(values).pack());
        } catch (const RangeError&) {
          corrupt(path + ": bad permutation");
        }
      });
      if (d) {
        if (least.size() != codes.size()) corrupt(path + ": wrong number of entries");
        state.least = LeastMap(n, codes, std::move(least), std::move(perms));
      }
      return d;
    }
    case 3: {
      const auto& lm = *state.least;
      CliqueCache cache;
      std::size_t i = 0;
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        auto colon = line.find(" : ");
        if (colon == std::string_view::npos || i >= lm.size() || parse_u64(line.substr(0, colon)) != lm.code(i)) {
          corrupt(path + ": bad clique line");
        }
        CliqueList list;
        for (auto c : fields(line.substr(colon + 3), ',')) list.push_back(static_cast<NodeSet>(parse_u64(c)));
        cache.push_back(list);
        ++i;
      });
      if (d) {
        if (i != lm.size()) corrupt(path + ": wrong number of entries");
        state.cliques = std::move(cache);
      }
      return d;
    }
    case 4: {
      ValidInferences valid;
      bool counted = false;
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        auto f = fields(line);
        if (f.size() == 2 && f[0] == "count" && valid.pairs.empty() && !counted) {
          valid.count = parse_u64(f[1]);
          valid.retained = false;
          counted = true;
          return;
        }
        if (counted) corrupt(path + ": pairs after count line");
        valid.pairs.push_back(parse_pair(f, n, *state.least));
      });
      if (d) {
        const auto space = std::uint64_t{state.least->size()} * state.least->least_count();
        if (valid.retained != (space <= kRetainValidLimit)) corrupt(path + ": wrong storage form");
        if (valid.retained) valid.count = valid.pairs.size();
        state.valid = std::move(valid);
      }
      return d;
    }
    case 5:
    case 6: {
      std::vector<IndexPair> list;
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        auto f = fields(line);
        list.push_back(parse_pair(f, n, *state.least));
      });
      if (d) (phase == 5 ? state.nontrivial : state.minimal) = std::move(list);
      return d;
    }
    case 7: {
      const auto& minimal = *state.minimal;
      Classification cls;
      cls.per_rule.assign(config.rules.size(), 0);
      auto d = read_checkpoint(path, header, parent, [&](std::string_view line) {
        auto f = fields(line);
        std::size_t i = cls.rule_of.size();
        if (i >= minimal.size()) corrupt(path + ": too many entries");
        std::int32_t rule = -1;
        std::span<const std::string_view> rest;
        if (f.size() == 4 && f[0] == "residual") {
          rest = std::span(f).subspan(1);
        } else if (f.size() == 5 && f[0] == "instance") {
          const Rule* r = config.rules.find(f[1]);
          if (!r) corrupt(path + ": unknown rule");
          rule = static_cast<std::int32_t>(r - config.rules.rules.data());
          rest = std::span(f).subspan(2);
        } else {
          corrupt(path + ": bad classification line");
        }
        if (!(parse_pair(rest, n, *state.least) == minimal[i])) corrupt(path + ": entry order mismatch");
        cls.rule_of.push_back(rule);
        if (rule < 0) {
          cls.residual.push_back(minimal[i]);
        } else {
          ++cls.per_rule[rule];
        }
      });
      if (d) {
        if (cls.rule_of.size() != minimal.size()) corrupt(path + ": wrong number of entries");
        state.classified = std::move(cls);
      }
      return d;
    }
    default:
      return std::nullopt;
  }
}

bool has_phase(int phase, const SearchState& s) {
  switch (phase) {
    case 1: return s.graphs.has_value() || s.least.has_value();
    case 2: return s.least.has_value();
    case 3: return s.cliques.has_value();
    case 4: return s.valid.has_value();
    case 5: return s.nontrivial.has_value();
    case 6: return s.minimal.has_value();
    case 7: return s.classified.has_value();
    default: return false;
  }
}

void compute_phase(int phase, const SearchConfig& config, SearchState& state) {
  switch (phase) {
    case 1: state.graphs = phase1_graphs(config); break;
    case 2: state.least = phase2_least_map(config, state); break;
    case 3: state.cliques = phase3_cliques(config, state); break;
    case 4: state.valid = phase4_valid_inferences(config, state); break;
    case 5: state.nontrivial = phase5_nontrivial(config, state); break;
    case 6: state.minimal = phase6_logically_minimal(config, state); break;
    case 7: state.classified = phase7_independent(config, state); break;
    default: throw RangeError("no phase " + std::to_string(phase));
  }
}

std::size_t phase_size(int phase, const SearchState& s) {
  switch (phase) {
    case 1: return codes_of(s).size();
    case 2: return s.least->least_count();
    case 3: return s.cliques->clique_total();
    case 4: return s.valid->count;
    case 5: return s.nontrivial->size();
    case 6: return s.minimal->size();
    case 7: return s.classified->residual.size();
    default: return 0;
  }
}

}  // namespace

void run_phase(int phase, const SearchConfig& config, SearchState& state) {
  for (int k = 1; k <= phase; ++k) {
    if (!has_phase(k, state)) compute_phase(k, config, state);
    if (k == 1 && config.entailment == Entailment::stable && state.dual_index.empty()) {
      state.dual_index = build_dual_index(config.n, codes_of(state));
    }
  }
}

namespace {

void restore_or_compute(int phase, const SearchConfig& config, SearchState& state) {
  const auto start = Clock::now();
  const std::string parent = phase == 1 ? "-" : state.digests[phase - 1];
  const bool use_ckpt = !config.checkpoint_dir.empty() && parent != "";
  // Once a phase has been recomputed, everything after it is recomputed too.
  const bool chain_intact = state.loaded_phases.size() == static_cast<std::size_t>(phase - 1);
  if (use_ckpt && chain_intact && !has_phase(phase, state)) {
    try {
      if (auto d = read_phase(phase, config, state, parent)) {
        state.digests[phase] = *d;
        state.loaded_phases.push_back(phase);
        log(config, "phase " + std::to_string(phase) + ": restored " +
                        std::to_string(phase_size(phase, state)) + " in " + elapsed(start));
        return;
      }
    } catch (const CheckpointCorruptError& e) {
      log(config, std::string("phase ") + std::to_string(phase) + ": " + e.what() + "; recomputing");
    }
  }
  if (!has_phase(phase, state)) compute_phase(phase, config, state);
  if (use_ckpt) {
    CheckpointWriter w(checkpoint_path(config, phase), header_line(config, phase));
    write_phase(phase, config, state, w);
    state.digests[phase] = w.finish(parent);
  } else {
    state.digests[phase] = "";
  }
  log(config, "phase " + std::to_string(phase) + ": computed " + std::to_string(phase_size(phase, state)) +
                  " in " + elapsed(start));
}

}  // namespace

SearchReport run_search(const SearchConfig& config) {
  SearchState state;
  return run_search(config, state);
}

SearchReport run_search(const SearchConfig& config, SearchState& state) {
  check_search_budget(config.n, config.mode, config.long_run);
  state.digests.fill("");
  state.loaded_phases.clear();
  for (int k = 1; k <= 7; ++k) {
    restore_or_compute(k, config, state);
    if (k == 1 && config.entailment == Entailment::stable && state.dual_index.empty()) {
      state.dual_index = build_dual_index(config.n, codes_of(state));
    }
  }

  const auto& lm = *state.least;
  const int n = config.n;
  SearchReport report;
  report.n = n;
  report.mode = config.mode;
  report.entailment = config.entailment;
  report.rules_name = config.rules.name;
  report.rules_digest = config.rules.digest();
  report.graphs = lm.size();
  report.least = lm.least_count();
  report.valid = state.valid->count;
  report.nontrivial = state.nontrivial->size();
  report.minimal = state.minimal->size();
  for (std::size_t r = 0; r < config.rules.size(); ++r) {
    report.instances.emplace_back(config.rules.rules[r].name, state.classified->per_rule[r]);
  }
  for (const auto& p : state.classified->residual) {
    report.residual.push_back({from_numeric(n, lm.code(p.lhs)), from_numeric(n, lm.code(p.rhs))});
  }
  const auto start = Clock::now();
  for (const auto& cls : classify(report.residual)) {
    report.classes.push_back(
        {cls.representative,
         is_p4_free(cls.representative.lhs) && is_p4_free(cls.representative.rhs)
             ? std::optional(from_graph_inference(cls.representative))
             : std::nullopt,
         is_self_dual(cls.representative), cls.members});
  }
  report.loaded_phases = state.loaded_phases;
  verify_residuals(config, state, report);
  log(config, "classified and verified " + std::to_string(report.residual.size()) + " residual inferences in " +
                  elapsed(start));
  return report;
}

std::string format_report(const SearchReport& r) {
  std::string out = "linbasis-report v1\n";
  out += "config: n=" + std::to_string(r.n) + " mode=" + to_string(r.mode) + " entailment=" +
         to_string(r.entailment) + " rules=" + r.rules_name + " digest=" + r.rules_digest.substr(0, 16) + "\n";
  out += "graphs: " + std::to_string(r.graphs) + "\n";
  out += "least: " + std::to_string(r.least) + "\n";
  out += "valid: " + std::to_string(r.valid) + "\n";
  out += "non-trivial: " + std::to_string(r.nontrivial) + "\n";
  out += "minimal: " + std::to_string(r.minimal) + "\n";
  for (const auto& [name, count] : r.instances) out += "instances " + name + ": " + std::to_string(count) + "\n";
  out += "residual: " + std::to_string(r.residual.size()) + "\n";
  out += "residual classes: " + std::to_string(r.classes.size()) + "\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const auto& c = r.classes[i];
    out += "class " + std::to_string(i + 1) + ": " + format_inference(c.representative) + " ; formula " +
           (c.formula ? print(*c.formula) : std::string("-")) + " ; self_dual=" + (c.self_dual ? "true" : "false") +
           " ; members=" + std::to_string(c.members) + "\n";
  }
  return out;
}

void verify_residuals(const SearchConfig& config, const SearchState& state, const SearchReport& report) {
  auto fail = [](const GraphInference& inf, const std::string& why) {
    throw Error("verification failed for " + format_inference(inf) + ": " + why);
  };
  for (const auto& inf : report.residual) {
    if (!implies(inf.lhs, inf.rhs, config.entailment)) fail(inf, "not valid");
    bool trivial = config.entailment == Entailment::clique ? is_trivial(inf.lhs, inf.rhs)
                                                            : is_trivial(dual(inf.rhs), dual(inf.lhs));
    if (trivial) fail(inf, "trivial");
    if (inf.n() <= kMaxScanNodes && least_of(inf.lhs).web != inf.lhs) fail(inf, "lhs is not least");
    for (const auto& rule : config.rules.rules) {
      if (is_instance(inf, rule.inference)) fail(inf, "instance of " + rule.name);
    }
  }
  if (report.classes.empty()) return;
  const auto& codes = codes_of(state);
  auto ent = view(config, state);
  for (const auto& cls : report.classes) {
    const auto& inf = cls.representative;
    auto r = state.least->index_of(static_cast<std::uint64_t>(inf.lhs.edges()));
    auto s = state.least->index_of(static_cast<std::uint64_t>(inf.rhs.edges()));
    if (!r || !s) fail(inf, "sides are not in the graph list");
    for (std::size_t t = 0; t < codes.size(); ++t) {
      if (t == *r || t == *s) continue;
      auto ti = static_cast<std::uint32_t>(t);
      if (ent.valid(static_cast<std::uint32_t>(*r), ti) && ent.valid(ti, static_cast<std::uint32_t>(*s))) {
        fail(inf, "not logically minimal, interpolant " + std::to_string(codes[t]));
      }
    }
  }
}

}  // namespace linbasis
