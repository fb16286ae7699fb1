#include <sstream>

#include "doa/exterior.h"

namespace doa {

namespace {

void add_one_form_term(FormExpression& fe, AtomId atom, const Rat& coeff,
                       std::vector<CompId> factors) {
  if (coeff == 0) return;
  fe_add_part(fe, FormMonomial{{atom}}, poly_term(coeff, std::move(factors)));
}

std::string mono_display(const Problem& p, const FormMonomial& mono) {
  std::ostringstream out;
  for (std::size_t i = 0; i < mono.atoms.size(); ++i) {
    if (i) out << "^";
    out << p.atom_display(mono.atoms[i]);
  }
  return out.str();
}

// Every coefficient of a vanishing form on the bundle coframe is a scalar
// relation; mixed monomials carry the decomposition identities.
void classify_residue(Problem& p, const FormExpression& residue,
                      const std::string& source, RelKind kind,
                      ClosureRelations& out) {
  for (const auto& [mono, poly] : residue.parts) {
    if (poly.is_zero()) continue;
    Relation rel;
    rel.poly = poly;
    rel.kind = kind;
    rel.provenance = source + " on " + mono_display(p, mono);
    out.relations.push_back(std::move(rel));
  }
}

}  // namespace

FormExpression d_of_comp(Problem& p, CompId c) {
  const CompKey key = p.comps.key(c);
  const SymbolInfo& sym = p.symbols[std::size_t(key.sym)];
  FormExpression fe;
  fe.degree = 1;

  // Frame derivatives.
  for (ValueId v : p.derivation_values) {
    std::vector<ValueId> der = key.derivs;
    der.push_back(v);
    auto next = p.comp_ref(key.sym, key.primary, der);
    AtomId basic = p.basic_atom_of_value[std::size_t(v)];
    if (next && basic >= 0) {
      add_one_form_term(fe, basic, Rat(next->first), {next->second});
    }
  }

  // Rotation templates act on every slot, primary and derivation alike.
  for (int famid : sym.rotation_families) {
    const CoframeFamily& fam = p.families[std::size_t(famid)];
    int cls = fam.slot_classes[0];
    const IndexClass& ic = p.classes[std::size_t(cls)];
    auto rotate_slot = [&](bool primary_slot, std::size_t pos) {
      ValueId a = primary_slot ? key.primary[pos] : key.derivs[pos];
      if (p.values[std::size_t(a)].cls != cls) return;
      for (int mi = 0; mi < ic.size; ++mi) {
        ValueId m = ic.first_value + mi;
        if (m == a) continue;
        std::vector<ValueId> prim = key.primary;
        std::vector<ValueId> der = key.derivs;
        (primary_slot ? prim[pos] : der[pos]) = m;
        auto comp = p.comp_ref(key.sym, prim, der);
        if (!comp) continue;
        auto atom = p.atom_ref(famid, {a, m});
        if (!atom) continue;
        add_one_form_term(fe, atom->second,
                          Rat(-comp->first * atom->first), {comp->second});
      }
    };
    for (std::size_t i = 0; i < key.primary.size(); ++i) rotate_slot(true, i);
    for (std::size_t i = 0; i < key.derivs.size(); ++i) rotate_slot(false, i);
  }

  // Adjoint action on group slots: d X_a picks up + C[a,b,c] X_b gamma_c.
  for (const auto& [famid, csym] : sym.adjoints) {
    const CoframeFamily& fam = p.families[std::size_t(famid)];
    int cls = fam.slot_classes[0];
    const IndexClass& ic = p.classes[std::size_t(cls)];
    for (std::size_t pos = 0; pos < key.primary.size(); ++pos) {
      ValueId a = key.primary[pos];
      if (p.values[std::size_t(a)].cls != cls) continue;
      for (int bi = 0; bi < ic.size; ++bi) {
        ValueId b = ic.first_value + bi;
        for (int cci = 0; cci < ic.size; ++cci) {
          ValueId cc = ic.first_value + cci;
          Rat cval = p.constant_value(csym, {a, b, cc});
          if (cval == 0) continue;
          std::vector<ValueId> prim = key.primary;
          prim[pos] = b;
          auto comp = p.comp_ref(key.sym, prim, key.derivs);
          if (!comp) continue;
          auto atom = p.atom_ref(famid, {cc});
          if (!atom) continue;
          add_one_form_term(fe, atom->second,
                            cval * comp->first * atom->first,
                            {comp->second});
        }
      }
    }
  }
  return fe;
}

FormExpression exterior_derivative(Problem& p, const FormExpression& fe) {
  FormExpression out;
  out.degree = fe.degree + 1;
  for (const auto& [mono, poly] : fe.parts) {
    // Coefficient differential wedged onto the monomial.
    FormExpression dpoly;
    dpoly.degree = 1;
    for (const auto& term : poly.terms) {
      for (std::size_t i = 0; i < term.factors.size(); ++i) {
        FormExpression dc = d_of_comp(p, term.factors[i]);
        std::vector<CompId> rest;
        rest.reserve(term.factors.size() - 1);
        for (std::size_t j = 0; j < term.factors.size(); ++j) {
          if (j != i) rest.push_back(term.factors[j]);
        }
        for (const auto& [m1, p1] : dc.parts) {
          for (const auto& t1 : p1.terms) {
            std::vector<CompId> merged = t1.factors;
            merged.insert(merged.end(), rest.begin(), rest.end());
            fe_add_part(dpoly, m1,
                        poly_term(term.coeff * t1.coeff, std::move(merged)));
          }
        }
      }
    }
    if (!dpoly.is_zero()) {
      FormExpression mono_fe;
      mono_fe.degree = int(mono.atoms.size());
      mono_fe.parts.emplace(mono, poly_const(Rat(1)));
      fe_add_inplace(out, fe_wedge(dpoly, mono_fe));
    }
    // Structure equations replace each atom of the monomial in turn.
    for (std::size_t i = 0; i < mono.atoms.size(); ++i) {
      FormExpression left;
      left.degree = int(i);
      FormMonomial lm;
      lm.atoms.assign(mono.atoms.begin(), mono.atoms.begin() + long(i));
      left.parts.emplace(std::move(lm),
                         poly_const(Rat(i % 2 == 0 ? 1 : -1)));
      FormExpression right;
      right.degree = int(mono.atoms.size() - i - 1);
      FormMonomial rm;
      rm.atoms.assign(mono.atoms.begin() + long(i) + 1, mono.atoms.end());
      right.parts.emplace(std::move(rm), poly_const(Rat(1)));
      FormExpression piece = fe_wedge(
          fe_wedge(left, p.structure_of[std::size_t(mono.atoms[i])]), right);
      for (const auto& [m2, p2] : piece.parts) {
        fe_add_part(out, m2, poly_mul(poly, p2));
      }
    }
  }
  return out;
}

ClosureRelations derive_bianchi(Problem& p) {
  ClosureRelations out;
  for (std::size_t a = 0; a < p.atoms.size(); ++a) {
    const CoframeFamily& fam =
        p.families[std::size_t(p.atoms[a].family)];
    if (fam.kind == CoframeKind::kDerived) {
      // Differentiating the decomposition must reproduce the declared
      // equation; the residue carries the decomposition's own relations.
      FormExpression res = exterior_derivative(p, p.decomposition_of[a]);
      fe_add_inplace(res, fe_scale(p.structure_of[a], Rat(-1)));
      classify_residue(p, res, "d(" + p.atom_display(AtomId(a)) + ")",
                       RelKind::kBianchi, out);
    }
    FormExpression res2 = exterior_derivative(p, p.structure_of[a]);
    classify_residue(p, res2, "d2(" + p.atom_display(AtomId(a)) + ")",
                     RelKind::kBianchi, out);
  }
  return out;
}

ClosureRelations generic_relations(Problem& p) {
  ClosureRelations out;
  for (int order = 0; order + 2 <= p.max_order; ++order) {
    for (CompId c : p.comps_by_order[std::size_t(order)]) {
      FormExpression res = exterior_derivative(p, d_of_comp(p, c));
      classify_residue(p, res, "d2(" + p.comp_display(c) + ")",
                       RelKind::kGeneric, out);
    }
  }
  return out;
}

}  // namespace doa
