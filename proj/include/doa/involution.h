// Seed extraction, ordering search, covering and condition R checks, and the
// character counts that produce degree, dimension and evolution directions.
#pragma once

#include "doa/relation_engine.h"

namespace doa {

struct SeedSet {
  bool ok = false;
  std::vector<CompId> seeds;  // sorted by component key
  std::string failure_kind;   // "O1" or "O2" when rejected
  std::vector<std::string> failure_details;
  // Pairs (a, b): the failure clears only if value a ranks above value b.
  std::vector<std::pair<ValueId, ValueId>> demands;
};

SeedSet find_seeds(Problem& p, const Closure& closure,
                   const SolveOutcome& solve, const IndexOrdering& ord);

struct OrderingCandidate {
  IndexOrdering ordering;
  std::string sequence;  // value displays in rank order, "0 < 1 < 2"
  bool accepted = false;
  bool solve_failed = false;
  std::string failure_kind;
  std::vector<std::string> failure_details;
  int seed_count = -1;
};

struct OrderingSearch {
  bool ok = false;
  bool incompatible = false;
  bool conflict = false;
  std::string conflict_note;
  IndexOrdering selected;
  SolveOutcome solve;  // for the selected ordering, or the incompatible one
  SeedSet seeds;
  std::vector<OrderingCandidate> candidates;
  Diagnostics diags;
};

IndexOrdering make_ordering(const Problem& p, const std::string& name);

OrderingSearch search_ordering(Problem& p, const Closure& closure,
                               const std::string& hint, std::uint64_t rng_seed,
                               int trials);

struct CoveringResult {
  bool ok = true;
  std::vector<CompId> uncovered;
  bool truncation = false;  // frontier components block the check
};

CoveringResult check_covering(Problem& p, const Closure& closure,
                              const SolveOutcome& solve,
                              const std::vector<CompId>& seeds);

struct ConditionR {
  bool exact = false;
  bool upgraded = false;
  int manifold_dim = 0;
  int rank = 0;
  int symmetry_dimension = 0;
  std::vector<std::string> notes;
};

ConditionR check_condition_r(Problem& p, const SolveOutcome& solve);

struct Characters {
  std::vector<int> s;  // s'_k by rank k, index 0 unused
  int degree = 0;
  int dimension = 0;  // highest rank with a nonzero character
  int sigma_prime = 0;
  std::vector<std::string> evolution;  // direction displays, rank order
  int cartan_n = 0;       // sum of k * s'_k
  int normals_next = 0;   // foreground normals one order above the seeds
  bool cartan_ok = false;
  std::vector<int> prolonged;  // s*_k
};

Characters compute_characters(Problem& p, const SolveOutcome& solve,
                              const IndexOrdering& ord,
                              const std::vector<CompId>& seeds);

struct PipelineOptions {
  std::map<std::string, long> dims;
  std::string ordering_hint;
  int trials = 3;
  std::uint64_t rng_seed = 20260822ULL;
  int max_order_override = -1;
  int seed_order_override = -1;
  bool strip_eom = false;  // internal: base run for physicality checks
};

struct PipelineResult {
  bool ok = false;
  int exit_code = 1;
  std::string quality;  // exact, upper_bound, inconclusive, advisory,
                        // incompatible, error
  Problem problem;
  OrderingSearch search;
  CoveringResult covering;
  ConditionR cond_r;
  Characters chars;
  std::vector<int> normal_counts;  // foreground normals per order
  bool has_eom = false;
  bool eom_dimension_drop_ok = false;
  bool eom_new_direction_ok = false;
  int base_dimension = 0;
  int base_degree = 0;
  std::vector<std::string> new_directions;
  std::optional<int> dof;
  bool residues_ok = true;
  std::vector<std::string> notes;
  Diagnostics diags;
};

PipelineResult run_problem(const ProblemSpec& spec,
                           const PipelineOptions& opts);

}  // namespace doa
