#include <map>
#include <set>

#include "doa/parser.h"

namespace doa {
namespace {

const IndexClassDecl* find_class(const ProblemSpec& spec,
                                 const std::string& name) {
  for (const auto& c : spec.classes)
    if (c.name == name) return &c;
  return nullptr;
}

const CoframeDecl* find_family(const ProblemSpec& spec,
                               const std::string& name) {
  for (const auto& f : spec.coframe)
    if (f.name == name) return &f;
  return nullptr;
}

const SymbolDecl* find_symbol(const ProblemSpec& spec,
                              const std::string& name) {
  for (const auto& s : spec.symbols)
    if (s.name == name) return &s;
  return nullptr;
}

// Checks variable class consistency in one equation or relation term list.
// Classes are keyed by name; the empty string stands for "any derivation
// value" (derivation-only variables).
class VarChecker {
 public:
  VarChecker(const ProblemSpec& spec, Diagnostics& diags, int line)
      : spec_(spec), diags_(diags), line_(line) {}

  void see_primary(const IndexRef& ref, const std::string& cls) {
    if (ref.literal) return;
    auto [it, inserted] = classes_.emplace(ref.text, cls);
    if (!inserted && !it->second.empty() && it->second != cls) {
      diags_.push_back(Diagnostic::error(
          "index variable '" + ref.text + "' used with classes '" +
              it->second + "' and '" + cls + "'",
          line_));
    }
    if (!inserted && it->second.empty()) it->second = cls;
  }

  void see_deriv(const IndexRef& ref) {
    if (ref.literal) return;
    classes_.emplace(ref.text, std::string());
  }

  void see_comp(const CompRef& ref) {
    const SymbolDecl* sym = find_symbol(spec_, ref.symbol);
    if (!sym) return;  // reported elsewhere
    if (ref.primary.size() != sym->slot_classes.size()) {
      diags_.push_back(Diagnostic::error(
          "'" + ref.symbol + "' takes " +
              std::to_string(sym->slot_classes.size()) + " indices, got " +
              std::to_string(ref.primary.size()),
          line_));
      return;
    }
    for (std::size_t i = 0; i < ref.primary.size(); ++i)
      see_primary(ref.primary[i], sym->slot_classes[i]);
    for (const auto& d : ref.derivs) see_deriv(d);
  }

  void see_form(const FormRef& ref) {
    const CoframeDecl* fam = find_family(spec_, ref.family);
    if (!fam) return;
    if (ref.indices.size() != fam->slot_classes.size()) {
      diags_.push_back(Diagnostic::error(
          "form '" + ref.family + "' takes " +
              std::to_string(fam->slot_classes.size()) + " indices, got " +
              std::to_string(ref.indices.size()),
          line_));
      return;
    }
    for (std::size_t i = 0; i < ref.indices.size(); ++i)
      see_primary(ref.indices[i], fam->slot_classes[i]);
  }

 private:
  const ProblemSpec& spec_;
  Diagnostics& diags_;
  int line_;
  std::map<std::string, std::string> classes_;
};

void check_rel_body(const ProblemSpec& spec, Diagnostics& diags,
                    const std::vector<RelTerm>& lhs,
                    const std::vector<RelTerm>& rhs, int line) {
  VarChecker vc(spec, diags, line);
  auto check_side = [&](const std::vector<RelTerm>& side) {
    for (const auto& term : side) {
      for (const auto& f : term.factors) {
        if (!find_symbol(spec, f.symbol) &&
            !spec.options.params.count(f.symbol)) {
          diags.push_back(Diagnostic::error(
              "unknown symbol '" + f.symbol + "'", line));
          continue;
        }
        if (spec.options.params.count(f.symbol)) {
          if (!f.primary.empty() || !f.derivs.empty()) {
            diags.push_back(Diagnostic::error(
                "parameter '" + f.symbol + "' takes no indices", line));
          }
          continue;
        }
        vc.see_comp(f);
      }
    }
  };
  check_side(lhs);
  check_side(rhs);
}

}  // namespace

Diagnostics validate_spec(const ProblemSpec& spec) {
  Diagnostics diags;
  auto err = [&](std::string msg, int line = 0) {
    diags.push_back(Diagnostic::error(std::move(msg), line));
  };

  if (spec.name.empty()) err("missing problem name");

  std::set<std::string> names;
  for (const auto& c : spec.classes) {
    if (!names.insert(c.name).second) err("duplicate name '" + c.name + "'", c.line);
    if (c.size.param.empty() && c.size.offset < 1 &&
        c.kind != ClassKind::kSpecial) {
      err("class '" + c.name + "' has non-positive size", c.line);
    }
  }
  std::set<std::string> fam_and_sym;
  for (const auto& f : spec.coframe) {
    if (!fam_and_sym.insert(f.name).second)
      err("duplicate name '" + f.name + "'", f.line);
  }
  for (const auto& s : spec.symbols) {
    if (!fam_and_sym.insert(s.name).second)
      err("duplicate name '" + s.name + "'", s.line);
  }
  for (const auto& [p, v] : spec.options.params) {
    if (fam_and_sym.count(p)) err("parameter '" + p + "' shadows a declaration");
  }

  // Coframe shape rules and the basic covering of derivation classes.
  std::map<std::string, int> basic_cover;
  bool any_basic = false;
  for (const auto& f : spec.coframe) {
    for (const auto& sc : f.slot_classes) {
      if (!find_class(spec, sc))
        err("unknown index class '" + sc + "'", f.line);
    }
    switch (f.kind) {
      case CoframeKind::kBasic:
      case CoframeKind::kDerived: {
        if (f.slot_classes.size() != 1) {
          err("family '" + f.name + "' must have exactly one slot", f.line);
          break;
        }
        const IndexClassDecl* c = find_class(spec, f.slot_classes[0]);
        if (c && c->kind == ClassKind::kGroup) {
          err("family '" + f.name + "' cannot be indexed by a group class",
              f.line);
        }
        if (f.kind == CoframeKind::kBasic) {
          any_basic = true;
          basic_cover[f.slot_classes[0]]++;
        }
        break;
      }
      case CoframeKind::kVertical: {
        if (f.slot_classes.size() != 2 ||
            f.slot_classes[0] != f.slot_classes[1]) {
          err("vertical family '" + f.name +
                  "' needs two slots of one class",
              f.line);
          break;
        }
        const IndexClassDecl* c = find_class(spec, f.slot_classes[0]);
        if (c && c->kind != ClassKind::kBasic)
          err("vertical family '" + f.name + "' needs a basic class", f.line);
        break;
      }
      case CoframeKind::kGroup: {
        if (f.slot_classes.size() != 1) {
          err("group family '" + f.name + "' must have exactly one slot",
              f.line);
          break;
        }
        const IndexClassDecl* c = find_class(spec, f.slot_classes[0]);
        if (c && c->kind != ClassKind::kGroup)
          err("group family '" + f.name + "' needs a group class", f.line);
        break;
      }
    }
  }
  if (!any_basic) err("no basic coframe subset: at least one basic family is required");
  for (const auto& c : spec.classes) {
    if (c.kind == ClassKind::kGroup) continue;
    int cover = basic_cover.count(c.name) ? basic_cover[c.name] : 0;
    if (cover != 1) {
      err("derivation class '" + c.name + "' must be carried by exactly one "
          "basic family, found " + std::to_string(cover));
    }
  }

  for (const auto& s : spec.symbols) {
    for (const auto& sc : s.slot_classes) {
      if (!find_class(spec, sc))
        err("unknown index class '" + sc + "'", s.line);
    }
    if (s.specified && s.auxiliary)
      err("symbol '" + s.name + "' cannot be both specified and auxiliary",
          s.line);
    if (s.constant && (s.specified || s.auxiliary))
      err("constant symbol '" + s.name + "' takes no other attribute", s.line);
    for (const auto& g : s.generators) {
      int arity = int(s.slot_classes.size());
      if (g.a < 1 || g.a > arity || g.b < 1 || g.b > arity || g.a == g.b) {
        err("generator slots out of range on '" + s.name + "'", s.line);
      } else if (s.slot_classes[g.a - 1] != s.slot_classes[g.b - 1]) {
        err("generator joins slots of different classes on '" + s.name + "'",
            s.line);
      }
    }
    for (const auto& r : s.rotations) {
      const CoframeDecl* f = find_family(spec, r);
      if (!f) {
        err("unknown rotation family '" + r + "' on '" + s.name + "'", s.line);
      } else if (f->kind != CoframeKind::kVertical) {
        err("rotation family '" + r + "' is not vertical", s.line);
      }
      if (s.constant) err("constant symbol '" + s.name + "' takes no template", s.line);
    }
    for (const auto& [fam, csym] : s.adjoints) {
      const CoframeDecl* f = find_family(spec, fam);
      if (!f || f->kind != CoframeKind::kGroup) {
        err("adjoint family '" + fam + "' is not a group family", s.line);
        continue;
      }
      const SymbolDecl* c = find_symbol(spec, csym);
      if (!c || !c->constant || c->slot_classes.size() != 3 ||
          c->slot_classes[0] != f->slot_classes[0] ||
          c->slot_classes[1] != f->slot_classes[0] ||
          c->slot_classes[2] != f->slot_classes[0]) {
        err("adjoint constants '" + csym + "' must be a constant symbol with "
            "three slots of the group class", s.line);
      }
      if (s.constant) err("constant symbol '" + s.name + "' takes no template", s.line);
    }
  }

  for (const auto& v : spec.values) {
    const SymbolDecl* s = find_symbol(spec, v.symbol);
    if (!s) {
      err("value for unknown symbol '" + v.symbol + "'", v.line);
      continue;
    }
    if (!s->constant) {
      err("value table on non-constant symbol '" + v.symbol + "'", v.line);
      continue;
    }
    if (v.indices.size() != s->slot_classes.size())
      err("value index count mismatch for '" + v.symbol + "'", v.line);
  }

  // Structure equations: one d-equation set per family, one let per derived.
  std::map<std::string, int> d_count, let_count;
  for (const auto& eq : spec.structure) {
    const CoframeDecl* fam = find_family(spec, eq.lhs.family);
    if (!fam) {
      err("structure equation for unknown family '" + eq.lhs.family + "'",
          eq.line);
      continue;
    }
    (eq.is_let ? let_count : d_count)[fam->name]++;
    if (eq.is_let && fam->kind != CoframeKind::kDerived)
      err("'let' is only valid for derived families", eq.line);
    VarChecker vc(spec, diags, eq.line);
    vc.see_form(eq.lhs);
    std::set<std::string> lhs_vars;
    for (const auto& idx : eq.lhs.indices) {
      if (!idx.literal && !lhs_vars.insert(idx.text).second)
        err("repeated variable on equation left-hand side", eq.line);
    }
    for (const auto& term : eq.terms) {
      for (const auto& f : term.factors) {
        if (!find_symbol(spec, f.symbol)) {
          err("unknown symbol '" + f.symbol + "'", eq.line);
          continue;
        }
        vc.see_comp(f);
      }
      for (const auto& fr : term.forms) {
        const CoframeDecl* ff = find_family(spec, fr.family);
        if (!ff) {
          err("unknown coframe family '" + fr.family + "'", eq.line);
          continue;
        }
        vc.see_form(fr);
      }
      std::size_t want = eq.is_let ? 1 : 2;
      if (term.forms.size() != want) {
        err(eq.is_let ? "decomposition terms must be single forms"
                      : "structure terms must be wedge pairs",
            eq.line);
      }
    }
  }
  for (const auto& f : spec.coframe) {
    int d = d_count.count(f.name) ? d_count[f.name] : 0;
    int l = let_count.count(f.name) ? let_count[f.name] : 0;
    if (f.kind == CoframeKind::kDerived) {
      if (d < 1)
        err("derived family '" + f.name + "' needs a structure equation");
      if (l != 1)
        err("derived family '" + f.name + "' needs exactly one decomposition");
    } else {
      if (d < 1) err("family '" + f.name + "' has no structure equation");
      if (l > 0) err("family '" + f.name + "' cannot have a decomposition");
    }
  }

  for (const auto& r : spec.relations)
    check_rel_body(spec, diags, r.lhs, r.rhs, r.line);
  for (const auto& c : spec.constraints)
    check_rel_body(spec, diags, c.lhs, c.rhs, c.line);

  const OptionsDecl& o = spec.options;
  std::set<std::string> size_params;
  for (const auto& c : spec.classes)
    if (!c.size.param.empty()) size_params.insert(c.size.param);
  for (const auto& d : o.dims) {
    if (!size_params.count(d.param))
      err("dims range for unused parameter '" + d.param + "'");
    if (d.lo > d.hi) err("empty dims range for '" + d.param + "'");
  }
  for (const auto& [k, v] : o.defaults) {
    if (!size_params.count(k)) err("default for unused parameter '" + k + "'");
  }
  if (o.seed_order == 0) {
    err("seed_order 0 is not allowed: involutive seeds must carry a "
        "derivation index (rule I3 would fail for any additional function)");
  }
  if (o.max_order >= 0 && o.max_order < 2)
    err("max_order must be at least 2");
  if (!o.ordering.empty() && o.ordering != "special_smallest" &&
      o.ordering != "special_greatest" && o.ordering != "natural" &&
      o.ordering != "reversed") {
    err("unknown ordering hint '" + o.ordering + "'");
  }
  if (spec.symbols.empty())
    diags.push_back(Diagnostic::note("no invariant symbols declared"));
  return diags;
}

}  // namespace doa
