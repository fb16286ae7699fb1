// Sparse polynomials over component ids, and exterior form expressions whose
// coefficients are such polynomials.
#pragma once

#include <map>
#include <vector>

#include "doa/index_algebra.h"
#include "doa/rational.h"

namespace doa {

struct PolyTerm {
  Rat coeff;
  std::vector<CompId> factors;  // sorted; empty for a constant term

  bool operator==(const PolyTerm&) const = default;
};

struct Poly {
  std::vector<PolyTerm> terms;  // sorted by factor list, coefficients nonzero

  bool is_zero() const { return terms.empty(); }
  bool operator==(const Poly&) const = default;
};

Poly poly_zero();
Poly poly_const(const Rat& c);
Poly poly_comp(CompId c);
// Single term c * prod(factors); factors need not be sorted.
Poly poly_term(const Rat& c, std::vector<CompId> factors);

void poly_add_inplace(Poly& target, const Poly& other);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Rat& c);
Poly poly_mul(const Poly& a, const Poly& b);

// Largest derivation-index count among all components; -1 for constants.
int poly_leading_order(const Poly& p, const CompTable& comps);

// Strictly ascending atom ids.
struct FormMonomial {
  std::vector<AtomId> atoms;

  bool operator<(const FormMonomial& o) const { return atoms < o.atoms; }
  bool operator==(const FormMonomial&) const = default;
};

struct FormExpression {
  int degree = 0;
  std::map<FormMonomial, Poly> parts;

  bool is_zero() const { return parts.empty(); }
};

void fe_add_part(FormExpression& fe, const FormMonomial& mono, const Poly& p);
void fe_add_inplace(FormExpression& target, const FormExpression& other);
FormExpression fe_scale(const FormExpression& fe, const Rat& c);
FormExpression fe_wedge(const FormExpression& a, const FormExpression& b);

// Wedges a raw atom list into (sign, sorted monomial); nullopt if repeated.
std::optional<std::pair<int, FormMonomial>> monomial_from_atoms(
    std::vector<AtomId> atoms);

}  // namespace doa
