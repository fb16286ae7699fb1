#include "doa/parser.h"

#include <algorithm>
#include <set>

#include "doa/lexer.h"

namespace doa {
namespace {

// Cursor over one token line.
class Cursor {
 public:
  Cursor(const TokenLine& tl, Diagnostics& diags)
      : toks_(tl.toks), line_(tl.line), diags_(diags) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }
  const Token* next() { return done() ? nullptr : &toks_[pos_++]; }
  int line() const { return line_; }

  bool accept(TokKind k) {
    if (!done() && toks_[pos_].kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool expect(TokKind k, const std::string& what) {
    if (accept(k)) return true;
    fail("expected " + what);
    return false;
  }

  bool accept_ident(const std::string& word) {
    if (!done() && toks_[pos_].kind == TokKind::kIdent &&
        toks_[pos_].text == word) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string take_ident(const std::string& what) {
    if (!done() && toks_[pos_].kind == TokKind::kIdent) {
      return toks_[pos_++].text;
    }
    fail("expected " + what);
    return {};
  }

  void fail(const std::string& msg) {
    if (!failed_) diags_.push_back(Diagnostic::error(msg, line_));
    failed_ = true;
  }
  bool failed() const { return failed_; }

 private:
  const std::vector<Token>& toks_;
  int line_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

std::optional<long> parse_long(Cursor& cur, bool allow_negative) {
  bool neg = false;
  if (allow_negative && cur.accept(TokKind::kMinus)) neg = true;
  const Token* t = cur.peek();
  if (!t || t->kind != TokKind::kInt) {
    cur.fail("expected integer");
    return std::nullopt;
  }
  cur.next();
  long v = std::stol(t->text);
  return neg ? -v : v;
}

// Rational literal: [-] INT [/ INT].
std::optional<Rat> parse_rat(Cursor& cur) {
  bool neg = cur.accept(TokKind::kMinus);
  const Token* t = cur.peek();
  if (!t || t->kind != TokKind::kInt) {
    cur.fail("expected rational");
    return std::nullopt;
  }
  cur.next();
  Rat r(BigInt(t->text), 1);
  if (cur.accept(TokKind::kSlash)) {
    const Token* d = cur.peek();
    if (!d || d->kind != TokKind::kInt) {
      cur.fail("expected denominator");
      return std::nullopt;
    }
    cur.next();
    r /= Rat(BigInt(d->text), 1);
  }
  return neg ? Rat(-r) : r;
}

// "n", "n-1", "n+1", "3".
std::optional<SizeExpr> parse_size(Cursor& cur) {
  SizeExpr e;
  const Token* t = cur.peek();
  if (!t) {
    cur.fail("expected size expression");
    return std::nullopt;
  }
  if (t->kind == TokKind::kIdent) {
    e.param = t->text;
    cur.next();
    if (cur.accept(TokKind::kMinus)) {
      auto v = parse_long(cur, false);
      if (!v) return std::nullopt;
      e.offset = -*v;
    } else if (cur.accept(TokKind::kPlus)) {
      auto v = parse_long(cur, false);
      if (!v) return std::nullopt;
      e.offset = *v;
    }
    return e;
  }
  if (t->kind == TokKind::kInt) {
    cur.next();
    e.offset = std::stol(t->text);
    return e;
  }
  cur.fail("expected size expression");
  return std::nullopt;
}

std::optional<std::vector<IndexRef>> parse_index_list(Cursor& cur,
                                                      TokKind stop1,
                                                      TokKind stop2) {
  std::vector<IndexRef> out;
  while (true) {
    const Token* t = cur.peek();
    if (!t) {
      cur.fail("unterminated index list");
      return std::nullopt;
    }
    if (t->kind == stop1 || t->kind == stop2) return out;
    if (!out.empty() && !cur.expect(TokKind::kComma, "','")) return std::nullopt;
    t = cur.peek();
    if (!t) {
      cur.fail("unterminated index list");
      return std::nullopt;
    }
    if (t->kind == TokKind::kIdent) {
      out.push_back({false, t->text});
      cur.next();
    } else if (t->kind == TokKind::kInt) {
      out.push_back({true, t->text});
      cur.next();
    } else {
      cur.fail("expected index variable or literal");
      return std::nullopt;
    }
  }
}

// IDENT [ '[' primary [';' derivs] ']' ]
std::optional<CompRef> parse_comp_ref(Cursor& cur) {
  CompRef ref;
  ref.line = cur.line();
  ref.symbol = cur.take_ident("symbol name");
  if (cur.failed()) return std::nullopt;
  if (!cur.accept(TokKind::kLBracket)) return ref;
  const Token* t = cur.peek();
  if (t && t->kind != TokKind::kSemicolon) {
    auto prim =
        parse_index_list(cur, TokKind::kSemicolon, TokKind::kRBracket);
    if (!prim) return std::nullopt;
    ref.primary = std::move(*prim);
  }
  if (cur.accept(TokKind::kSemicolon)) {
    auto der = parse_index_list(cur, TokKind::kRBracket, TokKind::kRBracket);
    if (!der) return std::nullopt;
    ref.derivs = std::move(*der);
  }
  if (!cur.expect(TokKind::kRBracket, "']'")) return std::nullopt;
  return ref;
}

// Relation term list: [sign][rat] factor* { (+|-) ... }.
std::optional<std::vector<RelTerm>> parse_rel_terms(Cursor& cur,
                                                    TokKind stop) {
  std::vector<RelTerm> terms;
  // A bare "0" denotes the empty sum.
  if (const Token* t = cur.peek();
      t && t->kind == TokKind::kInt && t->text == "0" &&
      (!cur.peek(1) || cur.peek(1)->kind == stop)) {
    cur.next();
    return terms;
  }
  bool first = true;
  while (true) {
    const Token* t = cur.peek();
    if (!t || t->kind == stop) {
      if (first) cur.fail("expected term");
      return terms;
    }
    Rat sign = 1;
    if (cur.accept(TokKind::kMinus)) {
      sign = -1;
    } else if (cur.accept(TokKind::kPlus)) {
      if (first) {
        cur.fail("unexpected '+'");
        return std::nullopt;
      }
    } else if (!first) {
      cur.fail("expected '+' or '-' between terms");
      return std::nullopt;
    }
    first = false;
    RelTerm term;
    term.coeff = sign;
    t = cur.peek();
    if (t && t->kind == TokKind::kInt) {
      auto r = parse_rat(cur);
      if (!r) return std::nullopt;
      term.coeff = sign * *r;
    }
    while ((t = cur.peek()) && t->kind == TokKind::kIdent) {
      auto ref = parse_comp_ref(cur);
      if (!ref) return std::nullopt;
      term.factors.push_back(std::move(*ref));
    }
    terms.push_back(std::move(term));
  }
}

class Parser {
 public:
  explicit Parser(const std::string& text) {
    lines_ = tokenize(text, result_.diags);
  }

  ParseResult run() {
    parse_problem_line();
    std::size_t i = 1;
    static const std::vector<std::string> kSections = {
        "indices", "coframe",     "invariants", "structure",
        "relations", "constraints", "options"};
    std::size_t section_rank = 0;
    while (i < lines_.size()) {
      Cursor cur(lines_[i], result_.diags);
      const Token* head = cur.peek();
      if (!head || head->kind != TokKind::kIdent) {
        result_.diags.push_back(
            Diagnostic::error("expected section header", lines_[i].line));
        ++i;
        continue;
      }
      auto it = std::find(kSections.begin(), kSections.end(), head->text);
      if (it == kSections.end()) {
        result_.diags.push_back(Diagnostic::error(
            "unknown section '" + head->text + "'", lines_[i].line));
        ++i;
        continue;
      }
      std::size_t rank = std::size_t(it - kSections.begin());
      if (rank < section_rank) {
        result_.diags.push_back(Diagnostic::error(
            "section '" + head->text + "' out of order", lines_[i].line));
      }
      section_rank = rank + 1;
      ++i;
      while (i < lines_.size() && !is_section_header(lines_[i])) {
        parse_entry(head->text, lines_[i]);
        ++i;
      }
    }
    result_.ok = !has_error(result_.diags);
    return std::move(result_);
  }

 private:
  static bool is_section_header(const TokenLine& tl) {
    if (tl.toks.empty() || tl.toks[0].kind != TokKind::kIdent) return false;
    static const std::set<std::string> kSections = {
        "indices", "coframe",     "invariants", "structure",
        "relations", "constraints", "options"};
    return tl.toks.size() >= 1 && kSections.count(tl.toks[0].text) > 0 &&
           (tl.toks.size() == 1);
  }

  void parse_problem_line() {
    if (lines_.empty()) {
      result_.diags.push_back(Diagnostic::error("empty input", 1));
      return;
    }
    Cursor cur(lines_[0], result_.diags);
    if (!cur.accept_ident("problem")) {
      cur.fail("expected 'problem NAME'");
      return;
    }
    result_.spec.name = cur.take_ident("problem name");
    if (!cur.done()) cur.fail("trailing tokens after problem name");
  }

  void parse_entry(const std::string& section, const TokenLine& tl) {
    Cursor cur(tl, result_.diags);
    if (section == "indices") {
      parse_index_decl(cur);
    } else if (section == "coframe") {
      parse_coframe_decl(cur);
    } else if (section == "invariants") {
      parse_invariant_decl(cur);
    } else if (section == "structure") {
      parse_structure_decl(cur);
    } else if (section == "relations") {
      parse_relation_decl(cur);
    } else if (section == "constraints") {
      parse_constraint_decl(cur);
    } else if (section == "options") {
      parse_option_decl(cur);
    }
    if (!cur.failed() && !cur.done()) cur.fail("trailing tokens");
  }

  void parse_index_decl(Cursor& cur) {
    IndexClassDecl d;
    d.line = cur.line();
    if (cur.accept_ident("basic")) {
      d.kind = ClassKind::kBasic;
    } else if (cur.accept_ident("special")) {
      d.kind = ClassKind::kSpecial;
    } else if (cur.accept_ident("group")) {
      d.kind = ClassKind::kGroup;
    } else {
      cur.fail("expected 'basic', 'special' or 'group'");
      return;
    }
    d.name = cur.take_ident("class name");
    if (cur.failed()) return;
    if (d.kind == ClassKind::kSpecial) {
      d.size = SizeExpr{"", 1};
    } else {
      if (!cur.accept_ident("size")) {
        cur.fail("expected 'size'");
        return;
      }
      auto s = parse_size(cur);
      if (!s) return;
      d.size = *s;
    }
    result_.spec.classes.push_back(std::move(d));
  }

  void parse_coframe_decl(Cursor& cur) {
    CoframeDecl d;
    d.line = cur.line();
    if (cur.accept_ident("basic")) {
      d.kind = CoframeKind::kBasic;
    } else if (cur.accept_ident("vertical")) {
      d.kind = CoframeKind::kVertical;
    } else if (cur.accept_ident("group")) {
      d.kind = CoframeKind::kGroup;
    } else if (cur.accept_ident("derived")) {
      d.kind = CoframeKind::kDerived;
    } else {
      cur.fail("expected coframe kind");
      return;
    }
    d.name = cur.take_ident("family name");
    if (cur.failed()) return;
    if (!cur.expect(TokKind::kLBracket, "'['")) return;
    auto slots = parse_index_list(cur, TokKind::kRBracket, TokKind::kRBracket);
    if (!slots) return;
    for (const auto& s : *slots) {
      if (s.literal) {
        cur.fail("coframe slots must be class names");
        return;
      }
      d.slot_classes.push_back(s.text);
    }
    if (!cur.expect(TokKind::kRBracket, "']'")) return;
    result_.spec.coframe.push_back(std::move(d));
  }

  void parse_invariant_decl(Cursor& cur) {
    if (cur.accept_ident("symbol")) {
      SymbolDecl d;
      d.line = cur.line();
      d.name = cur.take_ident("symbol name");
      if (cur.failed()) return;
      if (cur.accept(TokKind::kLBracket)) {
        auto slots =
            parse_index_list(cur, TokKind::kRBracket, TokKind::kRBracket);
        if (!slots) return;
        for (const auto& s : *slots) {
          if (s.literal) {
            cur.fail("symbol slots must be class names");
            return;
          }
          d.slot_classes.push_back(s.text);
        }
        if (!cur.expect(TokKind::kRBracket, "']'")) return;
      }
      while (!cur.done()) {
        if (cur.accept_ident("specified")) {
          d.specified = true;
        } else if (cur.accept_ident("auxiliary")) {
          d.auxiliary = true;
        } else if (cur.accept_ident("constant")) {
          d.constant = true;
        } else if (const Token* t = cur.peek();
                   t && t->kind == TokKind::kIdent &&
                   (t->text == "antisym" || t->text == "sym")) {
          GeneratorDecl g;
          g.antisym = t->text == "antisym";
          cur.next();
          if (!cur.expect(TokKind::kLBracket, "'('")) return;
          auto a = parse_long(cur, false);
          if (!a) return;
          if (!cur.expect(TokKind::kComma, "','")) return;
          auto b = parse_long(cur, false);
          if (!b) return;
          if (!cur.expect(TokKind::kRBracket, "')'")) return;
          g.a = int(*a);
          g.b = int(*b);
          d.generators.push_back(g);
        } else if (cur.accept_ident("rotate")) {
          if (!cur.expect(TokKind::kLBracket, "'('")) return;
          std::string fam = cur.take_ident("coframe family");
          if (cur.failed()) return;
          if (!cur.expect(TokKind::kRBracket, "')'")) return;
          d.rotations.push_back(fam);
        } else if (cur.accept_ident("adjoint")) {
          if (!cur.expect(TokKind::kLBracket, "'('")) return;
          std::string fam = cur.take_ident("coframe family");
          if (cur.failed()) return;
          if (!cur.expect(TokKind::kComma, "','")) return;
          std::string sym = cur.take_ident("constant symbol");
          if (cur.failed()) return;
          if (!cur.expect(TokKind::kRBracket, "')'")) return;
          d.adjoints.emplace_back(fam, sym);
        } else {
          cur.fail("unknown symbol attribute");
          return;
        }
      }
      result_.spec.symbols.push_back(std::move(d));
    } else if (cur.accept_ident("value")) {
      ValueDecl d;
      d.line = cur.line();
      d.symbol = cur.take_ident("symbol name");
      if (cur.failed()) return;
      if (!cur.expect(TokKind::kLBracket, "'['")) return;
      auto idx = parse_index_list(cur, TokKind::kRBracket, TokKind::kRBracket);
      if (!idx) return;
      for (const auto& s : *idx) {
        if (!s.literal) {
          cur.fail("value indices must be literals");
          return;
        }
        d.indices.push_back(s.text);
      }
      if (!cur.expect(TokKind::kRBracket, "']'")) return;
      if (!cur.expect(TokKind::kEquals, "'='")) return;
      auto r = parse_rat(cur);
      if (!r) return;
      d.value = *r;
      result_.spec.values.push_back(std::move(d));
    } else {
      cur.fail("expected 'symbol' or 'value'");
    }
  }

  // Structure term sequence with '^' between coframe forms. Classification
  // into scalar factors vs forms happens here using the declared names.
  std::optional<std::vector<StructTerm>> parse_struct_terms(Cursor& cur) {
    std::vector<StructTerm> terms;
    if (const Token* t = cur.peek();
        t && t->kind == TokKind::kInt && t->text == "0" && !cur.peek(1)) {
      cur.next();
      return terms;
    }
    bool first = true;
    while (!cur.done()) {
      Rat sign = 1;
      if (cur.accept(TokKind::kMinus)) {
        sign = -1;
      } else if (cur.accept(TokKind::kPlus)) {
        if (first) {
          cur.fail("unexpected '+'");
          return std::nullopt;
        }
      } else if (!first) {
        cur.fail("expected '+' or '-' between terms");
        return std::nullopt;
      }
      first = false;
      StructTerm term;
      term.coeff = sign;
      if (const Token* t = cur.peek(); t && t->kind == TokKind::kInt) {
        auto r = parse_rat(cur);
        if (!r) return std::nullopt;
        term.coeff = sign * *r;
      }
      bool after_form = false;
      while (true) {
        const Token* t = cur.peek();
        if (!t || t->kind == TokKind::kPlus || t->kind == TokKind::kMinus) break;
        bool wedged = cur.accept(TokKind::kWedge);
        if (wedged && !after_form) {
          cur.fail("'^' must follow a coframe form");
          return std::nullopt;
        }
        auto ref = parse_comp_ref(cur);
        if (!ref) return std::nullopt;
        if (coframe_names_.count(ref->symbol)) {
          if (!ref->derivs.empty()) {
            cur.fail("coframe forms carry no derivation indices");
            return std::nullopt;
          }
          if (after_form && !wedged) {
            cur.fail("missing '^' between coframe forms");
            return std::nullopt;
          }
          term.forms.push_back(FormRef{ref->symbol, ref->primary});
          after_form = true;
        } else {
          if (wedged) {
            cur.fail("'^' must join coframe forms");
            return std::nullopt;
          }
          if (after_form) {
            cur.fail("scalar factors must precede the forms");
            return std::nullopt;
          }
          term.factors.push_back(std::move(*ref));
        }
      }
      terms.push_back(std::move(term));
    }
    return terms;
  }

  void parse_structure_decl(Cursor& cur) {
    refresh_names();
    StructEq eq;
    eq.line = cur.line();
    if (cur.accept_ident("d")) {
      eq.is_let = false;
    } else if (cur.accept_ident("let")) {
      eq.is_let = true;
    } else {
      cur.fail("expected 'd' or 'let'");
      return;
    }
    auto lhs = parse_comp_ref(cur);
    if (!lhs) return;
    if (!lhs->derivs.empty()) {
      cur.fail("left-hand side carries no derivation indices");
      return;
    }
    eq.lhs = FormRef{lhs->symbol, lhs->primary};
    if (!cur.expect(TokKind::kEquals, "'='")) return;
    auto terms = parse_struct_terms(cur);
    if (!terms) return;
    eq.terms = std::move(*terms);
    result_.spec.structure.push_back(std::move(eq));
  }

  void parse_relation_decl(Cursor& cur) {
    if (!cur.accept_ident("relation")) {
      cur.fail("expected 'relation'");
      return;
    }
    RelationDecl d;
    d.line = cur.line();
    d.name = cur.take_ident("relation name");
    if (cur.failed()) return;
    if (!cur.expect(TokKind::kColon, "':'")) return;
    auto lhs = parse_rel_terms(cur, TokKind::kEquals);
    if (!lhs) return;
    d.lhs = std::move(*lhs);
    if (!cur.expect(TokKind::kEquals, "'='")) return;
    auto rhs = parse_rel_terms(cur, TokKind::kEquals);
    if (!rhs) return;
    d.rhs = std::move(*rhs);
    result_.spec.relations.push_back(std::move(d));
  }

  void parse_constraint_decl(Cursor& cur) {
    if (!cur.accept_ident("constraint")) {
      cur.fail("expected 'constraint'");
      return;
    }
    ConstraintDecl d;
    d.line = cur.line();
    if (cur.accept_ident("eom")) {
      d.tag = "eom";
    } else if (cur.accept_ident("branch")) {
      d.tag = "branch";
    } else {
      cur.fail("expected 'eom' or 'branch'");
      return;
    }
    d.name = cur.take_ident("constraint name");
    if (cur.failed()) return;
    if (!cur.expect(TokKind::kColon, "':'")) return;
    auto lhs = parse_rel_terms(cur, TokKind::kEquals);
    if (!lhs) return;
    d.lhs = std::move(*lhs);
    if (!cur.expect(TokKind::kEquals, "'='")) return;
    auto rhs = parse_rel_terms(cur, TokKind::kEquals);
    if (!rhs) return;
    d.rhs = std::move(*rhs);
    result_.spec.constraints.push_back(std::move(d));
  }

  void parse_option_decl(Cursor& cur) {
    OptionsDecl& opt = result_.spec.options;
    if (cur.accept_ident("dims")) {
      DimRange r;
      r.param = cur.take_ident("dimension name");
      if (cur.failed()) return;
      auto lo = parse_long(cur, false);
      if (!lo) return;
      auto hi = parse_long(cur, false);
      if (!hi) return;
      r.lo = *lo;
      r.hi = *hi;
      opt.dims.push_back(r);
    } else if (cur.accept_ident("default")) {
      std::string name = cur.take_ident("dimension name");
      if (cur.failed()) return;
      auto v = parse_long(cur, false);
      if (!v) return;
      opt.defaults[name] = *v;
    } else if (cur.accept_ident("seed_order")) {
      auto v = parse_long(cur, false);
      if (!v) return;
      opt.seed_order = int(*v);
    } else if (cur.accept_ident("max_order")) {
      auto v = parse_long(cur, false);
      if (!v) return;
      opt.max_order = int(*v);
    } else if (cur.accept_ident("ordering")) {
      opt.ordering = cur.take_ident("ordering name");
    } else if (cur.accept_ident("param")) {
      std::string name = cur.take_ident("parameter name");
      if (cur.failed()) return;
      auto r = parse_rat(cur);
      if (!r) return;
      opt.params[name] = *r;
    } else {
      cur.fail("unknown option");
    }
  }

  void refresh_names() {
    if (!coframe_names_.empty()) return;
    for (const auto& c : result_.spec.coframe) coframe_names_.insert(c.name);
  }

  std::vector<TokenLine> lines_;
  ParseResult result_;
  std::set<std::string> coframe_names_;
};

}  // namespace

ParseResult parse_spec(const std::string& text) {
  Parser p(text);
  return p.run();
}

}  // namespace doa
