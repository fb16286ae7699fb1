#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "doa/problem.h"

namespace doa {

int Problem::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].name == name) return int(i);
  return -1;
}

int Problem::family_index(const std::string& name) const {
  for (std::size_t i = 0; i < families.size(); ++i)
    if (families[i].name == name) return int(i);
  return -1;
}

int Problem::symbol_index(const std::string& name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == name) return int(i);
  return -1;
}

std::optional<std::pair<int, AtomId>> Problem::atom_ref(
    int family, const std::vector<ValueId>& vals) const {
  const CoframeFamily& fam = families[std::size_t(family)];
  std::vector<ValueId> key = vals;
  int sign = 1;
  if (fam.kind == CoframeKind::kVertical) {
    if (key[0] == key[1]) return std::nullopt;
    if (key[0] < key[1]) {
      std::swap(key[0], key[1]);
      sign = -1;
    }
  }
  for (int i = 0; i < fam.atom_count; ++i) {
    AtomId a = fam.first_atom + i;
    if (atoms[std::size_t(a)].values == key) return std::make_pair(sign, a);
  }
  return std::nullopt;
}

std::optional<std::pair<int, CompId>> Problem::comp_ref(
    int sym, const std::vector<ValueId>& primary,
    const std::vector<ValueId>& derivs) {
  const SymbolInfo& s = symbols[std::size_t(sym)];
  auto canon = canonicalize_tuple(s, primary);
  if (!canon) return std::nullopt;
  if (int(derivs.size()) > max_order)
    throw std::logic_error("component beyond max order");
  CompKey key{sym, canon->second, derivs};
  auto id = comps.find(key);
  if (!id) throw std::logic_error("component not interned");
  return std::make_pair(canon->first, *id);
}

Rat Problem::constant_value(int sym, const std::vector<ValueId>& tuple) const {
  const SymbolInfo& s = symbols[std::size_t(sym)];
  auto canon = canonicalize_tuple(s, tuple);
  if (!canon) return Rat(0);
  auto it = s.const_values.find(canon->second);
  if (it == s.const_values.end()) return Rat(0);
  return Rat(canon->first) * it->second;
}

std::string Problem::comp_display(CompId c) const {
  const CompKey& k = comps.key(c);
  std::ostringstream out;
  out << symbols[std::size_t(k.sym)].name;
  if (!k.primary.empty() || !k.derivs.empty()) {
    out << "[";
    for (std::size_t i = 0; i < k.primary.size(); ++i) {
      if (i) out << ",";
      out << value_display(k.primary[i]);
    }
    if (!k.derivs.empty()) {
      out << ";";
      for (std::size_t i = 0; i < k.derivs.size(); ++i) {
        if (i) out << ",";
        out << value_display(k.derivs[i]);
      }
    }
    out << "]";
  }
  return out.str();
}

std::string Problem::poly_display(const Poly& p) const {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : p.terms) {
    Rat c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    out << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool wrote = false;
    if (c != 1 || t.factors.empty()) {
      out << c.str();
      wrote = true;
    }
    for (CompId f : t.factors) {
      if (wrote) out << "*";
      out << comp_display(f);
      wrote = true;
    }
  }
  return out.str();
}

namespace {

long size_of(const SizeExpr& e, const std::map<std::string, long>& dims) {
  if (e.param.empty()) return e.offset;
  auto it = dims.find(e.param);
  return (it == dims.end() ? 0 : it->second) + e.offset;
}

// Shared evaluation context for structure equations and relations.
class Builder {
 public:
  explicit Builder(Problem& p) : p_(p) {}

  void err(std::string msg, int line = 0) {
    p_.diags.push_back(Diagnostic::error(std::move(msg), line));
  }

  std::optional<ValueId> resolve_index(const IndexRef& ref, int cls,
                                       const std::map<std::string, ValueId>& bind,
                                       int line) {
    if (ref.literal) {
      if (cls >= 0) {
        const IndexClass& c = p_.classes[std::size_t(cls)];
        for (int i = 0; i < c.size; ++i) {
          ValueId v = c.first_value + i;
          if (p_.values[std::size_t(v)].display == ref.text) return v;
        }
        err("literal index '" + ref.text + "' not in class '" + c.name + "'",
            line);
        return std::nullopt;
      }
      for (ValueId v : p_.derivation_values) {
        if (p_.values[std::size_t(v)].display == ref.text) return v;
      }
      err("literal index '" + ref.text + "' is not a derivation value", line);
      return std::nullopt;
    }
    auto it = bind.find(ref.text);
    if (it == bind.end()) {
      err("unbound index variable '" + ref.text + "'", line);
      return std::nullopt;
    }
    return it->second;
  }

  // Multiplies one scalar factor into (coeff, factors); false aborts the term
  // because the factor is identically zero.
  bool apply_factor(const CompRef& ref,
                    const std::map<std::string, ValueId>& bind, Rat& coeff,
                    std::vector<CompId>& factors, int line) {
    auto pit = p_.params.find(ref.symbol);
    if (pit != p_.params.end()) {
      coeff *= pit->second;
      return coeff != 0;
    }
    int sym = p_.symbol_index(ref.symbol);
    if (sym < 0) {
      err("unknown symbol '" + ref.symbol + "'", line);
      return false;
    }
    const SymbolInfo& info = p_.symbols[std::size_t(sym)];
    std::vector<ValueId> prim;
    for (std::size_t i = 0; i < ref.primary.size(); ++i) {
      auto v = resolve_index(ref.primary[i],
                             i < info.slot_classes.size()
                                 ? info.slot_classes[i]
                                 : -1,
                             bind, line);
      if (!v) return false;
      prim.push_back(*v);
    }
    std::vector<ValueId> der;
    for (const auto& d : ref.derivs) {
      auto v = resolve_index(d, -1, bind, line);
      if (!v) return false;
      der.push_back(*v);
    }
    if (info.constant) {
      if (!der.empty()) {
        err("constant symbol '" + ref.symbol + "' has no derivatives", line);
        return false;
      }
      Rat v = p_.constant_value(sym, prim);
      coeff *= v;
      return coeff != 0;
    }
    auto comp = p_.comp_ref(sym, prim, der);
    if (!comp) return false;  // vanishes by symmetry
    coeff *= comp->first;
    factors.push_back(comp->second);
    return true;
  }

  // Enumerates assignments for the given variables over their classes.
  // cls < 0 means any derivation value.
  void enumerate(const std::vector<std::pair<std::string, int>>& vars,
                 std::map<std::string, ValueId>& bind,
                 const std::function<void()>& fn, std::size_t at = 0) {
    if (at == vars.size()) {
      fn();
      return;
    }
    const auto& [name, cls] = vars[at];
    if (cls >= 0) {
      const IndexClass& c = p_.classes[std::size_t(cls)];
      for (int i = 0; i < c.size; ++i) {
        bind[name] = c.first_value + i;
        enumerate(vars, bind, fn, at + 1);
      }
    } else {
      for (ValueId v : p_.derivation_values) {
        bind[name] = v;
        enumerate(vars, bind, fn, at + 1);
      }
    }
    bind.erase(name);
  }

  // Class of a variable from its slot positions; -1 for derivation-only.
  int var_class(const std::string& name, const std::vector<RelTerm>& terms) {
    for (const auto& t : terms) {
      for (const auto& f : t.factors) {
        int sym = p_.symbol_index(f.symbol);
        if (sym < 0) continue;
        const auto& slots = p_.symbols[std::size_t(sym)].slot_classes;
        for (std::size_t i = 0; i < f.primary.size() && i < slots.size(); ++i) {
          if (!f.primary[i].literal && f.primary[i].text == name)
            return slots[i];
        }
      }
    }
    return -1;
  }

  Problem& p_;
};

class Instantiator {
 public:
  Instantiator(const ProblemSpec& spec, const std::map<std::string, long>& dims)
      : spec_(spec) {
    p_.spec = spec;
    p_.dims = dims;
  }

  Problem run() {
    p_.params = spec_.options.params;
    resolve_dims();
    if (has_error(p_.diags)) return std::move(p_);
    build_classes();
    build_families();
    build_symbols();
    if (has_error(p_.diags)) return std::move(p_);
    resolve_orders();
    enumerate_comps();
    build_structure();
    build_relations();
    return std::move(p_);
  }

 private:
  void resolve_dims() {
    std::set<std::string> needed;
    for (const auto& c : spec_.classes)
      if (!c.size.param.empty()) needed.insert(c.size.param);
    for (const auto& name : needed) {
      if (p_.dims.count(name)) continue;
      auto it = spec_.options.defaults.find(name);
      if (it != spec_.options.defaults.end()) {
        p_.dims[name] = it->second;
      } else {
        p_.diags.push_back(Diagnostic::error(
            "dimension parameter '" + name + "' has no value"));
      }
    }
    for (const auto& [name, v] : p_.dims) {
      if (!needed.count(name)) {
        p_.diags.push_back(
            Diagnostic::warning("unused dimension parameter '" + name + "'"));
      }
      for (const auto& r : spec_.options.dims) {
        if (r.param == name && (v < r.lo || v > r.hi)) {
          p_.diags.push_back(Diagnostic::warning(
              "dimension " + name + "=" + std::to_string(v) +
              " outside the declared range"));
        }
      }
    }
  }

  void build_classes() {
    for (const auto& c : spec_.classes) {
      IndexClass ic;
      ic.name = c.name;
      ic.kind = c.kind;
      long size = c.kind == ClassKind::kSpecial ? 1 : size_of(c.size, p_.dims);
      if (size < 1) {
        p_.diags.push_back(Diagnostic::error(
            "class '" + c.name + "' is empty at these dimensions"));
        size = 0;
      }
      ic.size = int(size);
      ic.first_value = int(p_.values.size());
      for (int i = 0; i < ic.size; ++i) {
        Value v;
        v.cls = int(p_.classes.size());
        v.ordinal = i;
        v.display =
            c.kind == ClassKind::kSpecial ? "0" : std::to_string(i + 1);
        p_.values.push_back(std::move(v));
      }
      p_.classes.push_back(std::move(ic));
    }
    for (std::size_t ci = 0; ci < p_.classes.size(); ++ci) {
      if (p_.classes[ci].kind == ClassKind::kGroup) continue;
      for (int i = 0; i < p_.classes[ci].size; ++i)
        p_.derivation_values.push_back(p_.classes[ci].first_value + i);
    }
  }

  void build_families() {
    p_.basic_atom_of_value.assign(p_.values.size(), -1);
    for (const auto& f : spec_.coframe) {
      CoframeFamily fam;
      fam.name = f.name;
      fam.kind = f.kind;
      for (const auto& sc : f.slot_classes)
        fam.slot_classes.push_back(p_.class_index(sc));
      fam.first_atom = int(p_.atoms.size());
      auto add_atom = [&](std::vector<ValueId> vals) {
        Atom a;
        a.family = int(p_.families.size());
        a.is_basic = f.kind == CoframeKind::kBasic;
        std::ostringstream d;
        d << f.name << "[";
        for (std::size_t i = 0; i < vals.size(); ++i) {
          if (i) d << ",";
          d << p_.value_display(vals[i]);
        }
        d << "]";
        a.display = d.str();
        a.values = std::move(vals);
        if (a.is_basic)
          p_.basic_atom_of_value[std::size_t(a.values[0])] =
              int(p_.atoms.size());
        p_.atoms.push_back(std::move(a));
      };
      const IndexClass& c0 = p_.classes[std::size_t(fam.slot_classes[0])];
      if (f.kind == CoframeKind::kVertical) {
        for (int a = 1; a < c0.size; ++a) {
          for (int b = 0; b < a; ++b) {
            add_atom({c0.first_value + a, c0.first_value + b});
          }
        }
      } else {
        for (int i = 0; i < c0.size; ++i) add_atom({c0.first_value + i});
        if (f.kind == CoframeKind::kDerived) p_.num_derived_atoms += c0.size;
      }
      fam.atom_count = int(p_.atoms.size()) - fam.first_atom;
      p_.families.push_back(std::move(fam));
    }
  }

  void build_symbols() {
    for (const auto& s : spec_.symbols) {
      SymbolInfo info;
      info.name = s.name;
      for (const auto& sc : s.slot_classes)
        info.slot_classes.push_back(p_.class_index(sc));
      info.group = close_generators(int(s.slot_classes.size()), s.generators);
      for (const auto& r : s.rotations)
        info.rotation_families.push_back(p_.family_index(r));
      for (const auto& [fam, csym] : s.adjoints) {
        info.adjoints.emplace_back(p_.family_index(fam),
                                   p_.symbol_index(csym));
      }
      info.specified = s.specified;
      info.auxiliary = s.auxiliary;
      info.constant = s.constant;
      p_.symbols.push_back(std::move(info));
    }
    // Adjoint constant symbol ids resolve against the final symbol list.
    for (std::size_t i = 0; i < p_.symbols.size(); ++i) {
      for (const auto& adj : p_.symbols[i].adjoints) {
        if (adj.second < 0) {
          p_.diags.push_back(Diagnostic::error(
              "unresolved adjoint constants on '" + p_.symbols[i].name + "'"));
        }
      }
    }
    Builder b(p_);
    for (const auto& v : spec_.values) {
      int sym = p_.symbol_index(v.symbol);
      if (sym < 0) continue;
      SymbolInfo& info = p_.symbols[std::size_t(sym)];
      std::vector<ValueId> tuple;
      bool ok = true;
      std::map<std::string, ValueId> empty;
      for (std::size_t i = 0; i < v.indices.size(); ++i) {
        auto val = b.resolve_index({true, v.indices[i]},
                                   i < info.slot_classes.size()
                                       ? info.slot_classes[i]
                                       : -1,
                                   empty, v.line);
        if (!val) {
          ok = false;
          break;
        }
        tuple.push_back(*val);
      }
      if (!ok) continue;
      auto canon = canonicalize_tuple(info, tuple);
      if (!canon) {
        p_.diags.push_back(Diagnostic::error(
            "value assigned to identically vanishing component of '" +
                v.symbol + "'",
            v.line));
        continue;
      }
      Rat stored = Rat(canon->first) * v.value;
      auto [it, inserted] = info.const_values.emplace(canon->second, stored);
      if (!inserted && it->second != stored) {
        p_.diags.push_back(Diagnostic::error(
            "conflicting values for one orbit of '" + v.symbol + "'", v.line));
      }
    }
  }

  void resolve_orders() {
    int seed = spec_.options.seed_order > 0 ? spec_.options.seed_order : 1;
    // Constraints and declared relations with higher leading order push the
    // seed order up so seeds sit at the system's true frontier.
    int declared_lead = 0;
    auto scan = [&](const std::vector<RelTerm>& terms) {
      for (const auto& t : terms) {
        for (const auto& f : t.factors)
          declared_lead = std::max(declared_lead, int(f.derivs.size()));
      }
    };
    for (const auto& r : spec_.relations) {
      scan(r.lhs);
      scan(r.rhs);
    }
    for (const auto& c : spec_.constraints) {
      scan(c.lhs);
      scan(c.rhs);
    }
    seed = std::max(seed, declared_lead);
    p_.seed_order = seed;
    p_.max_order = spec_.options.max_order >= 2 ? spec_.options.max_order
                                                : seed + 1;
    if (p_.max_order < seed + 1) {
      p_.diags.push_back(Diagnostic::error(
          "max_order " + std::to_string(p_.max_order) +
          " is too small for seed order " + std::to_string(seed)));
    }
  }

  void enumerate_comps() {
    p_.comps_by_order.assign(std::size_t(p_.max_order) + 1, {});
    for (std::size_t sym = 0; sym < p_.symbols.size(); ++sym) {
      const SymbolInfo& info = p_.symbols[sym];
      if (info.constant) continue;
      std::set<std::vector<ValueId>> reps;
      std::vector<ValueId> tuple(info.slot_classes.size());
      std::function<void(std::size_t)> rec = [&](std::size_t at) {
        if (at == tuple.size()) {
          auto canon = canonicalize_tuple(info, tuple);
          if (canon) reps.insert(canon->second);
          return;
        }
        const IndexClass& c = p_.classes[std::size_t(info.slot_classes[at])];
        for (int i = 0; i < c.size; ++i) {
          tuple[at] = c.first_value + i;
          rec(at + 1);
        }
      };
      rec(0);
      for (int order = 0; order <= p_.max_order; ++order) {
        std::vector<ValueId> der(static_cast<std::size_t>(order));
        std::function<void(std::size_t)> drec = [&](std::size_t at) {
          if (at == der.size()) {
            for (const auto& rep : reps) {
              CompId id = p_.comps.intern({int(sym), rep, der});
              p_.comps_by_order[std::size_t(order)].push_back(id);
            }
            return;
          }
          for (ValueId v : p_.derivation_values) {
            der[at] = v;
            drec(at + 1);
          }
        };
        drec(0);
      }
    }
  }

  // One structure or decomposition equation evaluated for one member atom.
  void eval_equation(const StructEq& eq, AtomId member,
                     FormExpression& target) {
    Builder b(p_);
    const Atom& atom = p_.atoms[std::size_t(member)];
    std::map<std::string, ValueId> bind;
    for (std::size_t i = 0; i < eq.lhs.indices.size(); ++i) {
      const IndexRef& idx = eq.lhs.indices[i];
      if (idx.literal) continue;  // literal match checked by caller
      bind[idx.text] = atom.values[i];
    }
    target.degree = eq.is_let ? 1 : 2;
    for (const auto& term : eq.terms) {
      // Unbound variables are summed; single occurrences are rejected.
      std::map<std::string, int> counts;
      std::map<std::string, int> var_cls;
      auto see = [&](const IndexRef& r, int cls) {
        if (r.literal || bind.count(r.text)) return;
        counts[r.text]++;
        auto [it, inserted] = var_cls.emplace(r.text, cls);
        if (!inserted && it->second < 0) it->second = cls;
      };
      for (const auto& f : term.factors) {
        int sym = p_.symbol_index(f.symbol);
        const SymbolInfo* info =
            sym >= 0 ? &p_.symbols[std::size_t(sym)] : nullptr;
        for (std::size_t i = 0; i < f.primary.size(); ++i) {
          see(f.primary[i],
              info && i < info->slot_classes.size() ? info->slot_classes[i]
                                                    : -1);
        }
        for (const auto& d : f.derivs) see(d, -1);
      }
      for (const auto& fr : term.forms) {
        int fam = p_.family_index(fr.family);
        const CoframeFamily* ff =
            fam >= 0 ? &p_.families[std::size_t(fam)] : nullptr;
        for (std::size_t i = 0; i < fr.indices.size(); ++i) {
          see(fr.indices[i],
              ff && i < ff->slot_classes.size() ? ff->slot_classes[i] : -1);
        }
      }
      std::vector<std::pair<std::string, int>> summed;
      for (const auto& [name, cnt] : counts) {
        if (cnt == 1) {
          b.err("index variable '" + name + "' occurs once and is not bound",
                eq.line);
          return;
        }
        summed.emplace_back(name, var_cls[name]);
      }
      b.enumerate(summed, bind, [&] {
        Rat coeff = term.coeff;
        std::vector<CompId> factors;
        for (const auto& f : term.factors) {
          if (!b.apply_factor(f, bind, coeff, factors, eq.line)) return;
        }
        FormExpression fe;
        fe.degree = 0;
        fe.parts.emplace(FormMonomial{}, poly_term(coeff, factors));
        for (const auto& fr : term.forms) {
          auto part = resolve_form(fr, bind, eq.line);
          if (!part) return;  // vanishing member
          fe = fe_wedge(fe, *part);
        }
        fe_add_inplace(target, fe);
      });
    }
  }

  std::optional<FormExpression> resolve_form(
      const FormRef& ref, const std::map<std::string, ValueId>& bind,
      int line) {
    Builder b(p_);
    int fam = p_.family_index(ref.family);
    if (fam < 0) {
      b.err("unknown coframe family '" + ref.family + "'", line);
      return std::nullopt;
    }
    const CoframeFamily& f = p_.families[std::size_t(fam)];
    std::vector<ValueId> vals;
    for (std::size_t i = 0; i < ref.indices.size(); ++i) {
      auto v = b.resolve_index(ref.indices[i],
                               i < f.slot_classes.size() ? f.slot_classes[i]
                                                         : -1,
                               bind, line);
      if (!v) return std::nullopt;
      vals.push_back(*v);
    }
    auto at = p_.atom_ref(fam, vals);
    if (!at) return FormExpression{1, {}};  // vanishing antisymmetric member
    if (f.kind == CoframeKind::kDerived) {
      const FormExpression& dec = p_.decomposition_of[std::size_t(at->second)];
      return at->first < 0 ? fe_scale(dec, Rat(-1)) : dec;
    }
    FormExpression fe;
    fe.degree = 1;
    fe.parts.emplace(FormMonomial{{at->second}},
                     poly_const(Rat(at->first)));
    return fe;
  }

  void build_structure() {
    p_.structure_of.assign(p_.atoms.size(), FormExpression{});
    p_.decomposition_of.assign(p_.atoms.size(), FormExpression{});
    std::vector<int> d_seen(p_.atoms.size(), 0), let_seen(p_.atoms.size(), 0);

    auto members_of = [&](const StructEq& eq) {
      std::vector<AtomId> out;
      int fam = p_.family_index(eq.lhs.family);
      if (fam < 0) return out;
      const CoframeFamily& f = p_.families[std::size_t(fam)];
      bool literal = false;
      for (const auto& idx : eq.lhs.indices) literal |= idx.literal;
      if (literal) {
        Builder b(p_);
        std::map<std::string, ValueId> empty;
        std::vector<ValueId> vals;
        for (std::size_t i = 0; i < eq.lhs.indices.size(); ++i) {
          if (!eq.lhs.indices[i].literal) {
            b.err("mixed literal and variable indices on left-hand side",
                  eq.line);
            return out;
          }
          auto v = b.resolve_index(eq.lhs.indices[i],
                                   i < f.slot_classes.size()
                                       ? f.slot_classes[i]
                                       : -1,
                                   empty, eq.line);
          if (!v) return out;
          vals.push_back(*v);
        }
        auto at = p_.atom_ref(fam, vals);
        if (at && at->first == 1) out.push_back(at->second);
        else
          Builder(p_).err("left-hand side member is not canonical", eq.line);
      } else {
        for (int i = 0; i < f.atom_count; ++i) out.push_back(f.first_atom + i);
      }
      return out;
    };

    // Decompositions first so derived forms can be spliced below.
    for (const auto& eq : spec_.structure) {
      if (!eq.is_let) continue;
      for (const auto& term : eq.terms) {
        for (const auto& fr : term.forms) {
          int fam = p_.family_index(fr.family);
          if (fam >= 0 &&
              p_.families[std::size_t(fam)].kind == CoframeKind::kDerived) {
            p_.diags.push_back(Diagnostic::error(
                "decompositions may not reference derived forms", eq.line));
          }
        }
      }
      for (AtomId member : members_of(eq)) {
        if (let_seen[std::size_t(member)]++) {
          p_.diags.push_back(Diagnostic::error(
              "duplicate decomposition for " + p_.atom_display(member),
              eq.line));
          continue;
        }
        eval_equation(eq, member, p_.decomposition_of[std::size_t(member)]);
      }
    }
    for (const auto& eq : spec_.structure) {
      if (eq.is_let) continue;
      for (AtomId member : members_of(eq)) {
        if (d_seen[std::size_t(member)]++) {
          p_.diags.push_back(Diagnostic::error(
              "duplicate structure equation for " + p_.atom_display(member),
              eq.line));
          continue;
        }
        eval_equation(eq, member, p_.structure_of[std::size_t(member)]);
      }
    }
    for (std::size_t a = 0; a < p_.atoms.size(); ++a) {
      const CoframeFamily& f =
          p_.families[std::size_t(p_.atoms[a].family)];
      if (!d_seen[a]) {
        p_.diags.push_back(Diagnostic::error(
            "no structure equation covers " + p_.atom_display(int(a))));
      }
      if (f.kind == CoframeKind::kDerived && !let_seen[a]) {
        p_.diags.push_back(Diagnostic::error(
            "no decomposition covers " + p_.atom_display(int(a))));
      }
    }
  }

  void add_relation_instances(const std::vector<RelTerm>& lhs,
                              const std::vector<RelTerm>& rhs,
                              const std::string& name, RelKind kind,
                              int constraint_idx, int line,
                              std::vector<Relation>& out) {
    Builder b(p_);
    std::vector<RelTerm> terms = lhs;
    for (RelTerm t : rhs) {
      t.coeff = -t.coeff;
      terms.push_back(std::move(t));
    }
    // Per-term repetition marks a variable as summed; appearing in another
    // term exactly once as well would be ambiguous.
    std::set<std::string> summed, single;
    for (const auto& t : terms) {
      std::map<std::string, int> counts;
      for (const auto& f : t.factors) {
        for (const auto& r : f.primary)
          if (!r.literal) counts[r.text]++;
        for (const auto& r : f.derivs)
          if (!r.literal) counts[r.text]++;
      }
      for (const auto& [v, c] : counts) (c >= 2 ? summed : single).insert(v);
    }
    std::vector<std::pair<std::string, int>> free_vars;
    for (const auto& v : single) {
      if (summed.count(v)) {
        b.err("index '" + v + "' is both summed and free in '" + name + "'",
              line);
        return;
      }
      free_vars.emplace_back(v, b.var_class(v, terms));
    }
    std::map<std::string, ValueId> bind;
    b.enumerate(free_vars, bind, [&] {
      Poly poly;
      for (const auto& term : terms) {
        std::vector<std::pair<std::string, int>> local;
        std::set<std::string> seen;
        for (const auto& f : term.factors) {
          for (const auto& r : f.primary) {
            if (!r.literal && summed.count(r.text) && seen.insert(r.text).second)
              local.emplace_back(r.text, b.var_class(r.text, terms));
          }
          for (const auto& r : f.derivs) {
            if (!r.literal && summed.count(r.text) && seen.insert(r.text).second)
              local.emplace_back(r.text, b.var_class(r.text, terms));
          }
        }
        b.enumerate(local, bind, [&] {
          Rat coeff = term.coeff;
          std::vector<CompId> factors;
          for (const auto& f : term.factors) {
            if (!b.apply_factor(f, bind, coeff, factors, line)) return;
          }
          poly_add_inplace(poly, poly_term(coeff, std::move(factors)));
        });
      }
      if (!poly.is_zero()) {
        Relation rel;
        rel.poly = std::move(poly);
        rel.kind = kind;
        std::ostringstream prov;
        prov << name;
        if (!bind.empty()) {
          prov << "(";
          bool first = true;
          for (const auto& [v, val] : bind) {
            if (!first) prov << ",";
            prov << v << "=" << p_.value_display(val);
            first = false;
          }
          prov << ")";
        }
        rel.provenance = prov.str();
        rel.constraint_idx = constraint_idx;
        out.push_back(std::move(rel));
      }
    });
  }

  void build_relations() {
    for (const auto& r : spec_.relations) {
      add_relation_instances(r.lhs, r.rhs, r.name, RelKind::kDeclared, -1,
                             r.line, p_.declared_relations);
    }
    for (std::size_t i = 0; i < spec_.constraints.size(); ++i) {
      const auto& c = spec_.constraints[i];
      std::size_t before = p_.constraint_relations.size();
      add_relation_instances(c.lhs, c.rhs, c.name, RelKind::kConstraint,
                             int(i), c.line, p_.constraint_relations);
      int lead = 0;
      for (std::size_t j = before; j < p_.constraint_relations.size(); ++j) {
        lead = std::max(lead, poly_leading_order(
                                  p_.constraint_relations[j].poly, p_.comps));
      }
      p_.constraints.push_back({c.name, c.tag, lead});
    }
  }

  const ProblemSpec& spec_;
  Problem p_;
};

}  // namespace

Problem instantiate(const ProblemSpec& spec,
                    const std::map<std::string, long>& dims) {
  Instantiator inst(spec, dims);
  return inst.run();
}

}  // namespace doa
