#include <cctype>
#include <sstream>

#include "doa/parser.h"

namespace doa {

std::optional<Rat> rat_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string num, den = "1";
  std::size_t slash = s.find('/', i);
  num = s.substr(i, slash == std::string::npos ? std::string::npos : slash - i);
  if (slash != std::string::npos) den = s.substr(slash + 1);
  if (num.empty() || den.empty()) return std::nullopt;
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  for (char c : den)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  Rat r{BigInt(num), BigInt(den)};
  return neg ? Rat(-r) : r;
}

namespace {

void emit_rat(std::ostream& out, const Rat& r) { out << r.str(); }

void emit_index_list(std::ostream& out, const std::vector<IndexRef>& refs) {
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i) out << ",";
    out << refs[i].text;
  }
}

void emit_comp_ref(std::ostream& out, const CompRef& ref) {
  out << ref.symbol;
  if (!ref.primary.empty() || !ref.derivs.empty()) {
    out << "[";
    emit_index_list(out, ref.primary);
    if (!ref.derivs.empty()) {
      out << ";";
      emit_index_list(out, ref.derivs);
    }
    out << "]";
  }
}

void emit_form_ref(std::ostream& out, const FormRef& ref) {
  out << ref.family << "[";
  emit_index_list(out, ref.indices);
  out << "]";
}

bool has_forms(const RelTerm&) { return false; }
bool has_forms(const StructTerm& t) { return !t.forms.empty(); }

// Shared by relation and structure terms: sign, coefficient, factors.
template <typename Term, typename EmitRest>
void emit_terms(std::ostream& out, const std::vector<Term>& terms,
                EmitRest emit_rest) {
  if (terms.empty()) {
    out << "0";
    return;
  }
  bool first = true;
  for (const auto& t : terms) {
    Rat c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out << "- ";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    bool bare = t.factors.empty() && !has_forms(t);
    if (c != 1 || bare) {
      emit_rat(out, c);
      if (!bare) out << " ";
    }
    emit_rest(out, t);
  }
}

void emit_rel_rest(std::ostream& out, const RelTerm& t) {
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i) out << " ";
    emit_comp_ref(out, t.factors[i]);
  }
}

void emit_struct_rest(std::ostream& out, const StructTerm& t) {
  bool any = false;
  for (const auto& f : t.factors) {
    if (any) out << " ";
    emit_comp_ref(out, f);
    any = true;
  }
  for (std::size_t i = 0; i < t.forms.size(); ++i) {
    if (any) out << (i ? " ^ " : " ");
    emit_form_ref(out, t.forms[i]);
    any = true;
  }
}

}  // namespace

std::string serialize_spec(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "problem " << spec.name << "\n";
  if (!spec.classes.empty()) {
    out << "indices\n";
    for (const auto& c : spec.classes) {
      out << "  ";
      switch (c.kind) {
        case ClassKind::kBasic: out << "basic "; break;
        case ClassKind::kSpecial: out << "special "; break;
        case ClassKind::kGroup: out << "group "; break;
      }
      out << c.name;
      if (c.kind != ClassKind::kSpecial) {
        out << " size ";
        if (!c.size.param.empty()) {
          out << c.size.param;
          if (c.size.offset > 0) out << "+" << c.size.offset;
          if (c.size.offset < 0) out << "-" << -c.size.offset;
        } else {
          out << c.size.offset;
        }
      }
      out << "\n";
    }
  }
  if (!spec.coframe.empty()) {
    out << "coframe\n";
    for (const auto& f : spec.coframe) {
      out << "  ";
      switch (f.kind) {
        case CoframeKind::kBasic: out << "basic "; break;
        case CoframeKind::kVertical: out << "vertical "; break;
        case CoframeKind::kGroup: out << "group "; break;
        case CoframeKind::kDerived: out << "derived "; break;
      }
      out << f.name << "[";
      for (std::size_t i = 0; i < f.slot_classes.size(); ++i) {
        if (i) out << ",";
        out << f.slot_classes[i];
      }
      out << "]\n";
    }
  }
  if (!spec.symbols.empty() || !spec.values.empty()) {
    out << "invariants\n";
    for (const auto& s : spec.symbols) {
      out << "  symbol " << s.name;
      if (!s.slot_classes.empty()) {
        out << "[";
        for (std::size_t i = 0; i < s.slot_classes.size(); ++i) {
          if (i) out << ",";
          out << s.slot_classes[i];
        }
        out << "]";
      }
      for (const auto& g : s.generators) {
        out << " " << (g.antisym ? "antisym" : "sym") << "(" << g.a << ","
            << g.b << ")";
      }
      for (const auto& r : s.rotations) out << " rotate(" << r << ")";
      for (const auto& a : s.adjoints)
        out << " adjoint(" << a.first << "," << a.second << ")";
      if (s.specified) out << " specified";
      if (s.auxiliary) out << " auxiliary";
      if (s.constant) out << " constant";
      out << "\n";
    }
    for (const auto& v : spec.values) {
      out << "  value " << v.symbol << "[";
      for (std::size_t i = 0; i < v.indices.size(); ++i) {
        if (i) out << ",";
        out << v.indices[i];
      }
      out << "] = ";
      emit_rat(out, v.value);
      out << "\n";
    }
  }
  if (!spec.structure.empty()) {
    out << "structure\n";
    for (const auto& eq : spec.structure) {
      out << "  " << (eq.is_let ? "let " : "d ");
      emit_form_ref(out, eq.lhs);
      out << " = ";
      emit_terms(out, eq.terms, emit_struct_rest);
      out << "\n";
    }
  }
  if (!spec.relations.empty()) {
    out << "relations\n";
    for (const auto& r : spec.relations) {
      out << "  relation " << r.name << ": ";
      emit_terms(out, r.lhs, emit_rel_rest);
      out << " = ";
      emit_terms(out, r.rhs, emit_rel_rest);
      out << "\n";
    }
  }
  if (!spec.constraints.empty()) {
    out << "constraints\n";
    for (const auto& c : spec.constraints) {
      out << "  constraint " << c.tag << " " << c.name << ": ";
      emit_terms(out, c.lhs, emit_rel_rest);
      out << " = ";
      emit_terms(out, c.rhs, emit_rel_rest);
      out << "\n";
    }
  }
  const OptionsDecl& o = spec.options;
  bool any_opt = !o.dims.empty() || !o.defaults.empty() || o.seed_order >= 0 ||
                 o.max_order >= 0 || !o.ordering.empty() || !o.params.empty();
  if (any_opt) {
    out << "options\n";
    for (const auto& d : o.dims)
      out << "  dims " << d.param << " " << d.lo << " " << d.hi << "\n";
    for (const auto& [k, v] : o.defaults)
      out << "  default " << k << " " << v << "\n";
    if (o.seed_order >= 0) out << "  seed_order " << o.seed_order << "\n";
    if (o.max_order >= 0) out << "  max_order " << o.max_order << "\n";
    if (!o.ordering.empty()) out << "  ordering " << o.ordering << "\n";
    for (const auto& [k, v] : o.params) {
      out << "  param " << k << " ";
      emit_rat(out, v);
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace doa
