// Exterior derivative over instantiated components and form expressions,
// plus the closure residues (squared derivatives, decomposition residues
// and derivation exchange relations).
#pragma once

#include "doa/problem.h"

namespace doa {

// d of one interned component as a 1-form: frame derivatives along every
// basic direction plus rotation and adjoint template terms on its slots.
// Requires order(c) <= max_order - 1.
FormExpression d_of_comp(Problem& p, CompId c);

FormExpression exterior_derivative(Problem& p, const FormExpression& fe);

struct ClosureRelations {
  std::vector<Relation> relations;  // rows from pure-basic residue monomials
  Diagnostics diags;                // mixed residue monomials must vanish
};

// d^2 residues of every atom and decomposition residues of derived atoms.
ClosureRelations derive_bianchi(Problem& p);

// Derivation exchange relations from d^2 of every component whose order
// leaves room for two more derivatives.
ClosureRelations generic_relations(Problem& p);

}  // namespace doa
