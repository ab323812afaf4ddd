#pragma once

// The seven-phase search for minimal inferences that are not one-step
// instances of a rule set, with resumable per-phase checkpoints.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linbasis/cliques.hpp"
#include "linbasis/enumeration.hpp"
#include "linbasis/isomorphism.hpp"
#include "linbasis/rewrite.hpp"

namespace linbasis {

struct SearchConfig {
  int n = 0;
  RuleSet rules;
  GraphMode mode = GraphMode::p4free;
  Entailment entailment = Entailment::clique;
  // Root directory for checkpoints; empty disables them.
  std::string checkpoint_dir;
  int jobs = 1;
  bool long_run = false;
  // Progress and timing messages; never part of the report.
  std::function<void(const std::string&)> log;
};

// Throws BudgetError when the size needs the long-run flag or is out of reach.
void check_search_budget(int n, GraphMode mode, bool long_run);

// An inference as indices into the sorted graph list.
struct IndexPair {
  std::uint32_t lhs;
  std::uint32_t rhs;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

struct Classification {
  // Per minimal inference: index of the first matching rule, or -1 for residual.
  std::vector<std::int32_t> rule_of;
  std::vector<std::size_t> per_rule;
  std::vector<IndexPair> residual;
};

// Phase-4 result. The pair list is kept only while the candidate space
// (least graphs times graphs) stays below kRetainValidLimit; past that, phase 5
// re-tests validity itself and only the count survives.
inline constexpr std::uint64_t kRetainValidLimit = std::uint64_t{1} << 31;

struct ValidInferences {
  std::uint64_t count = 0;
  bool retained = true;
  std::vector<IndexPair> pairs;
};

struct SearchState {
  std::optional<std::vector<std::uint64_t>> graphs;
  std::optional<LeastMap> least;
  std::optional<CliqueCache> cliques;
  std::optional<ValidInferences> valid;
  std::optional<std::vector<IndexPair>> nontrivial;
  std::optional<std::vector<IndexPair>> minimal;
  std::optional<Classification> classified;
  // Index of each graph's complement; filled for the stable-set reading.
  std::vector<std::uint32_t> dual_index;
  std::array<std::string, 8> digests;
  std::vector<int> loaded_phases;
};

// Each phase reads the results of the earlier ones and throws MissingPhaseError
// when they are absent.
std::vector<std::uint64_t> phase1_graphs(const SearchConfig& config);
LeastMap phase2_least_map(const SearchConfig& config, const SearchState& state);
CliqueCache phase3_cliques(const SearchConfig& config, const SearchState& state);
// Pairs (R least, S != R) passing the configured entailment.
ValidInferences phase4_valid_inferences(const SearchConfig& config, const SearchState& state);
std::vector<IndexPair> phase5_nontrivial(const SearchConfig& config, const SearchState& state);
std::vector<IndexPair> phase6_logically_minimal(const SearchConfig& config, const SearchState& state);
Classification phase7_independent(const SearchConfig& config, const SearchState& state);

// Fills any phase results the state lacks, in order.
void run_phase(int phase, const SearchConfig& config, SearchState& state);

struct ResidualClass {
  GraphInference representative;
  // Absent when a side is not P4-free.
  std::optional<FormulaInference> formula;
  bool self_dual = false;
  std::size_t members = 0;
};

struct SearchReport {
  int n = 0;
  GraphMode mode = GraphMode::p4free;
  Entailment entailment = Entailment::clique;
  std::string rules_name;
  std::string rules_digest;
  std::size_t graphs = 0;
  std::size_t least = 0;
  std::size_t valid = 0;
  std::size_t nontrivial = 0;
  std::size_t minimal = 0;
  std::vector<std::pair<std::string, std::size_t>> instances;
  std::vector<GraphInference> residual;
  std::vector<ResidualClass> classes;
  // Phases restored from checkpoints; not part of the report text.
  std::vector<int> loaded_phases;
};

std::string format_report(const SearchReport& report);

// Runs phases 1 to 7, restoring any checkpoint whose digest chain matches, then
// re-verifies every residual inference independently before reporting.
SearchReport run_search(const SearchConfig& config);
// Same, keeping the phase results for further inspection.
SearchReport run_search(const SearchConfig& config, SearchState& state);

// Throws Error when some residual fails validity, non-triviality, leastness of
// its lhs, independence from the rules, or (for class representatives) direct
// logical minimality against every graph of the phase-1 list.
void verify_residuals(const SearchConfig& config, const SearchState& state,
                      const SearchReport& report);

// Checkpoint file of a phase under the configured root.
std::string checkpoint_path(const SearchConfig& config, int phase);

}  // namespace linbasis
