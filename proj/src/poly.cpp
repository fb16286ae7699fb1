#include "doa/poly.h"

#include <algorithm>

namespace doa {

Poly poly_zero() { return {}; }

Poly poly_const(const Rat& c) {
  Poly p;
  if (c != 0) p.terms.push_back({c, {}});
  return p;
}

Poly poly_comp(CompId c) {
  Poly p;
  p.terms.push_back({Rat(1), {c}});
  return p;
}

Poly poly_term(const Rat& c, std::vector<CompId> factors) {
  Poly p;
  if (c == 0) return p;
  std::sort(factors.begin(), factors.end());
  p.terms.push_back({c, std::move(factors)});
  return p;
}

void poly_add_inplace(Poly& target, const Poly& other) {
  if (other.terms.empty()) return;
  Poly merged;
  merged.terms.reserve(target.terms.size() + other.terms.size());
  auto a = target.terms.begin(), ae = target.terms.end();
  auto b = other.terms.begin(), be = other.terms.end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->factors < b->factors)) {
      merged.terms.push_back(*a++);
    } else if (a == ae || b->factors < a->factors) {
      merged.terms.push_back(*b++);
    } else {
      Rat c = a->coeff + b->coeff;
      if (c != 0) merged.terms.push_back({c, a->factors});
      ++a;
      ++b;
    }
  }
  target = std::move(merged);
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  poly_add_inplace(out, b);
  return out;
}

Poly poly_scale(const Poly& a, const Rat& c) {
  if (c == 0) return {};
  Poly out = a;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& ta : a.terms) {
    Poly row;
    row.terms.reserve(b.terms.size());
    for (const auto& tb : b.terms) {
      std::vector<CompId> f = ta.factors;
      f.insert(f.end(), tb.factors.begin(), tb.factors.end());
      std::sort(f.begin(), f.end());
      row.terms.push_back({ta.coeff * tb.coeff, std::move(f)});
    }
    std::sort(row.terms.begin(), row.terms.end(),
              [](const PolyTerm& x, const PolyTerm& y) {
                return x.factors < y.factors;
              });
    poly_add_inplace(out, row);
  }
  return out;
}

int poly_leading_order(const Poly& p, const CompTable& comps) {
  int lead = -1;
  for (const auto& t : p.terms) {
    for (CompId c : t.factors) lead = std::max(lead, comps.order_of(c));
  }
  return lead;
}

void fe_add_part(FormExpression& fe, const FormMonomial& mono, const Poly& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = fe.parts.emplace(mono, p);
  if (!inserted) {
    poly_add_inplace(it->second, p);
    if (it->second.is_zero()) fe.parts.erase(it);
  }
}

void fe_add_inplace(FormExpression& target, const FormExpression& other) {
  for (const auto& [mono, poly] : other.parts) fe_add_part(target, mono, poly);
}

FormExpression fe_scale(const FormExpression& fe, const Rat& c) {
  FormExpression out;
  out.degree = fe.degree;
  if (c == 0) return out;
  for (const auto& [mono, poly] : fe.parts)
    out.parts.emplace(mono, poly_scale(poly, c));
  return out;
}

std::optional<std::pair<int, FormMonomial>> monomial_from_atoms(
    std::vector<AtomId> atoms) {
  int sign = 1;
  // Insertion sort tracking inversions keeps the sign of the permutation.
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    AtomId v = atoms[i];
    std::size_t j = i;
    while (j > 0 && atoms[j - 1] > v) {
      atoms[j] = atoms[j - 1];
      --j;
      sign = -sign;
    }
    atoms[j] = v;
  }
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i] == atoms[i - 1]) return std::nullopt;
  }
  return std::make_pair(sign, FormMonomial{std::move(atoms)});
}

FormExpression fe_wedge(const FormExpression& a, const FormExpression& b) {
  FormExpression out;
  out.degree = a.degree + b.degree;
  for (const auto& [ma, pa] : a.parts) {
    for (const auto& [mb, pb] : b.parts) {
      std::vector<AtomId> atoms = ma.atoms;
      atoms.insert(atoms.end(), mb.atoms.begin(), mb.atoms.end());
      auto mono = monomial_from_atoms(std::move(atoms));
      if (!mono) continue;
      Poly p = poly_mul(pa, pb);
      if (mono->first < 0) p = poly_scale(p, Rat(-1));
      fe_add_part(out, mono->second, p);
    }
  }
  return out;
}

}  // namespace doa
