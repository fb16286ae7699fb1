// Instantiated problem: the spec bound to concrete dimensions, with interned
// components, coframe atoms, structure equations and declared relations.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "doa/ast.h"
#include "doa/diagnostics.h"
#include "doa/index_algebra.h"
#include "doa/poly.h"

namespace doa {

enum class RelKind {
  kBianchi,    // residue of a squared exterior derivative or a decomposition
  kGeneric,    // derivation exchange relation
  kDeclared,   // relations section
  kConstraint, // constraints section
  kDerived,    // frame derivative of another relation
  kInjected,   // recombined row re-entered at its true leading order
};

struct Relation {
  Poly poly;
  RelKind kind = RelKind::kDeclared;
  std::string provenance;
  int constraint_idx = -1;  // index into Problem::constraints when applicable
};

struct ConstraintInfo {
  std::string name;
  std::string tag;  // "eom" or "branch"
  int leading_order = 0;
};

struct Problem {
  ProblemSpec spec;
  std::map<std::string, long> dims;

  std::vector<IndexClass> classes;
  std::vector<Value> values;
  std::vector<ValueId> derivation_values;  // declaration order
  std::vector<CoframeFamily> families;
  std::vector<Atom> atoms;
  std::vector<AtomId> basic_atom_of_value;  // -1 when absent
  std::vector<SymbolInfo> symbols;
  std::map<std::string, Rat> params;

  CompTable comps;
  std::vector<std::vector<CompId>> comps_by_order;

  // Exterior derivative of every atom, 2-forms over non-derived atoms only.
  // Derived atoms hold their declared equation with decompositions spliced in.
  std::vector<FormExpression> structure_of;
  std::vector<FormExpression> decomposition_of;  // derived atoms, 1-forms

  std::vector<Relation> declared_relations;
  std::vector<Relation> constraint_relations;
  std::vector<ConstraintInfo> constraints;

  int max_order = 2;
  int seed_order = 1;

  Diagnostics diags;

  int class_index(const std::string& name) const;
  int family_index(const std::string& name) const;
  int symbol_index(const std::string& name) const;

  int num_coframe() const { return int(atoms.size()) - num_derived_atoms; }
  int num_derived_atoms = 0;

  // Canonical atom reference: nullopt means the member vanishes (repeated
  // antisymmetric pair); sign relates the request to the stored member.
  std::optional<std::pair<int, AtomId>> atom_ref(
      int family, const std::vector<ValueId>& vals) const;

  // Canonical component reference with sign folding; nullopt when the
  // component vanishes by symmetry. Constant symbols are never interned.
  std::optional<std::pair<int, CompId>> comp_ref(
      int sym, const std::vector<ValueId>& primary,
      const std::vector<ValueId>& derivs);

  Rat constant_value(int sym, const std::vector<ValueId>& tuple) const;

  bool comp_specified(CompId c) const {
    return symbols[std::size_t(comps.key(c).sym)].specified;
  }
  bool comp_auxiliary(CompId c) const {
    return symbols[std::size_t(comps.key(c).sym)].auxiliary;
  }

  std::string value_display(ValueId v) const { return values[std::size_t(v)].display; }
  std::string comp_display(CompId c) const;
  std::string atom_display(AtomId a) const { return atoms[std::size_t(a)].display; }
  std::string poly_display(const Poly& p) const;
};

// Binds dimension parameters and builds the whole concrete model. Errors are
// collected in Problem::diags; callers must check has_error before use.
Problem instantiate(const ProblemSpec& spec,
                    const std::map<std::string, long>& dims);

}  // namespace doa
