// Brute-force verification oracle: dense rank-nullity counting over the full
// raw index grid, with no canonical-representative shortcuts.
#pragma once

#include <string>
#include <vector>

#include "doa/involution.h"

namespace doa {

struct OracleSymbol {
  std::string name;
  std::vector<int> sizes;  // raw slot ranges, indices run 0..size-1
  std::vector<GeneratorDecl> generators;
};

// Sparse exact linear system over one variable per raw grid tuple.
class DenseSystem {
 public:
  DenseSystem(std::vector<OracleSymbol> symbols, long long cap);

  bool over_cap() const { return over_cap_; }
  long long var_count() const { return total_; }
  long long var_id(int sym, const std::vector<int>& idx) const;

  // One row per generator per grid tuple: x_t - sign * x_{g(t)} = 0.
  void add_symmetry_rows();
  void add_row(const std::vector<std::pair<long long, Rat>>& entries);

  long long rank();
  long long nullity() { return var_count() - rank(); }

 private:
  std::vector<OracleSymbol> syms_;
  std::vector<long long> offs_;
  long long total_ = 0;
  bool over_cap_ = false;
  std::map<long long, std::map<long long, Rat>> pivots_;  // lead var -> row
};

struct OracleTerm {
  int sym = 0;
  std::vector<int> idx;
  Rat coeff = Rat(1);
};

// Independent-component count: symmetry rows plus caller-supplied relation
// rows, counted by rank-nullity. Returns -1 when the grid exceeds the cap.
long long brute_force_count(const std::vector<OracleSymbol>& symbols,
                            const std::vector<std::vector<OracleTerm>>& rows,
                            long long cap);

// Recount of the engine's foreground normal components at one derivative
// order: all raw tuples, generator and derivation-commutation rows, and the
// linear parts of the closed relation set. Returns -1 when the grid exceeds
// the budget.
long long dense_normal_count(Problem& p, const Closure& closure,
                             const SolveOutcome& solve, int order,
                             long long var_budget);

struct CrossCheck {
  std::vector<std::string> disagreements;
  std::vector<std::string> notes;
};

// Recomputes the counts of a finished pipeline run with the dense oracle
// where the budget allows, and checks the report's internal identities.
CrossCheck cross_check(PipelineResult& res, long long var_budget = 6000);

}  // namespace doa
