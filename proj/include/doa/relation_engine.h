// Closure of the relation set and staged generic-point elimination.
//
// Stage r works on rows whose symbolic leading order is r. Lower-order
// components are substituted by their generic-point values, so a stage-r row
// is linear in order-r columns up to an explicit nonlinear residual. Rows
// over specified components only (the background) reduce first; foreground
// rows then fold the background values into their coefficients.
#pragma once

#include <cstdint>

#include "doa/exterior.h"
#include "doa/rng.h"

namespace doa {

struct Closure {
  std::vector<Relation> relations;
  // Vertical parts of differentiated relations; they must evaluate to zero
  // at the solved generic point.
  std::vector<std::pair<std::string, Poly>> vacuity;
  std::set<std::string> fingerprints;
  Diagnostics diags;
};

// Bianchi, exchange, declared, constraint and frame-derivative closure of
// the problem's relations, up to the order budget.
Closure close_problem(Problem& p);

// Appends recombined rows discovered during elimination and sweeps their
// frame derivatives. Returns true when the closure actually grew.
bool extend_closure(Problem& p, Closure& closure,
                    const std::vector<Relation>& extra);

struct InstalledRow {
  CompId pivot = -1;
  // Linear tail after normalization (pivot coefficient 1), column-order
  // sorted; excludes the pivot.
  std::vector<std::pair<CompId, Rat>> tail;
  Poly residual;  // nonlinear part in columns of this stage
  Rat constant;
  std::map<int, Rat> lambda;  // combination of source relations
};

struct StageResult {
  std::vector<InstalledRow> bg_rows;
  std::vector<InstalledRow> fg_rows;
  std::vector<CompId> bg_normals;
  std::vector<CompId> fg_normals;
};

struct SolveOutcome {
  bool ok = false;
  bool incompatible = false;
  std::string witness;  // provenance of the incompatibility when set
  std::vector<StageResult> stages;  // indexed by order 0..max_order
  std::vector<std::optional<Rat>> values;  // generic point, by component id
  std::vector<Relation> injected;  // recombined rows found during restarts
  // Consequences that restrict the solution manifold nonlinearly without
  // changing any linear rank; reported, not installed.
  std::vector<std::string> restrictions;
  int restarts = 0;
  int trial_used = 0;
  bool trials_disagree = false;
  // pivot component -> (order, row index, background flag)
  std::map<CompId, std::tuple<int, int, bool>> pivot_of;
  Diagnostics diags;

  bool dependent(CompId c) const { return pivot_of.count(c) != 0; }
  int fg_rank(int order) const {
    return int(stages[std::size_t(order)].fg_rows.size());
  }
};

// Column preference: higher top-rank derivation index first, then
// lexicographically smaller component key. The preferred column pivots.
bool column_before(const Problem& p, const IndexOrdering& ord, CompId a,
                   CompId b);

SolveOutcome solve_system(Problem& p, const Closure& closure,
                          const IndexOrdering& ord, std::uint64_t rng_seed,
                          int trials);

std::optional<Rat> eval_poly(const Poly& poly,
                             const std::vector<std::optional<Rat>>& values);

}  // namespace doa
