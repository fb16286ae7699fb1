// Abstract syntax for .doa problem descriptions, prior to instantiation.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "doa/rational.h"

namespace doa {

// Class sizes are affine in a single dimension parameter: "n", "n-1", "p", "3".
struct SizeExpr {
  std::string param;  // empty means literal
  long offset = 0;    // param + offset, or the literal itself

  bool operator==(const SizeExpr&) const = default;
};

enum class ClassKind { kBasic, kSpecial, kGroup };

struct IndexClassDecl {
  std::string name;
  ClassKind kind = ClassKind::kBasic;
  SizeExpr size;  // special classes always have size 1
  int line = 0;

  bool operator==(const IndexClassDecl& o) const {
    return name == o.name && kind == o.kind && size == o.size;
  }
};

enum class CoframeKind { kBasic, kVertical, kGroup, kDerived };

struct CoframeDecl {
  std::string name;
  CoframeKind kind = CoframeKind::kBasic;
  std::vector<std::string> slot_classes;
  int line = 0;

  bool operator==(const CoframeDecl& o) const {
    return name == o.name && kind == o.kind && slot_classes == o.slot_classes;
  }
};

// Sign permutation generator acting on two primary slots (1-based).
struct GeneratorDecl {
  bool antisym = true;
  int a = 0;
  int b = 0;

  bool operator==(const GeneratorDecl&) const = default;
};

struct SymbolDecl {
  std::string name;
  std::vector<std::string> slot_classes;
  std::vector<GeneratorDecl> generators;
  std::vector<std::string> rotations;                     // coframe family names
  std::vector<std::pair<std::string, std::string>> adjoints;  // (family, const symbol)
  bool specified = false;
  bool auxiliary = false;
  bool constant = false;
  int line = 0;

  bool operator==(const SymbolDecl& o) const {
    return name == o.name && slot_classes == o.slot_classes &&
           generators == o.generators && rotations == o.rotations &&
           adjoints == o.adjoints && specified == o.specified &&
           auxiliary == o.auxiliary && constant == o.constant;
  }
};

// Entry of a constant symbol's value table, indices given as literal displays.
struct ValueDecl {
  std::string symbol;
  std::vector<std::string> indices;
  Rat value;
  int line = 0;

  bool operator==(const ValueDecl& o) const {
    return symbol == o.symbol && indices == o.indices && value == o.value;
  }
};

// One index position in a reference: a variable name or a literal display.
struct IndexRef {
  bool literal = false;
  std::string text;

  bool operator==(const IndexRef&) const = default;
};

struct CompRef {
  std::string symbol;
  std::vector<IndexRef> primary;
  std::vector<IndexRef> derivs;
  int line = 0;

  bool operator==(const CompRef& o) const {
    return symbol == o.symbol && primary == o.primary && derivs == o.derivs;
  }
};

struct FormRef {
  std::string family;
  std::vector<IndexRef> indices;

  bool operator==(const FormRef&) const = default;
};

// One summand of a structure equation right-hand side: coefficient, scalar
// factors, and a wedge of coframe forms.
struct StructTerm {
  Rat coeff = 1;
  std::vector<CompRef> factors;
  std::vector<FormRef> forms;

  bool operator==(const StructTerm& o) const {
    return coeff == o.coeff && factors == o.factors && forms == o.forms;
  }
};

struct StructEq {
  bool is_let = false;  // "let" gives a derived form's decomposition
  FormRef lhs;
  std::vector<StructTerm> terms;  // empty means zero right-hand side
  int line = 0;

  bool operator==(const StructEq& o) const {
    return is_let == o.is_let && lhs == o.lhs && terms == o.terms;
  }
};

struct RelTerm {
  Rat coeff = 1;
  std::vector<CompRef> factors;  // empty factor list is a pure constant

  bool operator==(const RelTerm& o) const {
    return coeff == o.coeff && factors == o.factors;
  }
};

struct RelationDecl {
  std::string name;
  std::vector<RelTerm> lhs;
  std::vector<RelTerm> rhs;
  int line = 0;

  bool operator==(const RelationDecl& o) const {
    return name == o.name && lhs == o.lhs && rhs == o.rhs;
  }
};

struct ConstraintDecl {
  std::string name;
  std::string tag;  // "eom" or "branch"
  std::vector<RelTerm> lhs;
  std::vector<RelTerm> rhs;
  int line = 0;

  bool operator==(const ConstraintDecl& o) const {
    return name == o.name && tag == o.tag && lhs == o.lhs && rhs == o.rhs;
  }
};

struct DimRange {
  std::string param;
  long lo = 0;
  long hi = 0;

  bool operator==(const DimRange&) const = default;
};

struct OptionsDecl {
  std::vector<DimRange> dims;
  std::map<std::string, long> defaults;
  int seed_order = -1;  // -1 means unset
  int max_order = -1;
  std::string ordering;  // candidate hint, empty when unset
  std::map<std::string, Rat> params;

  bool operator==(const OptionsDecl&) const = default;
};

struct ProblemSpec {
  std::string name;
  std::vector<IndexClassDecl> classes;
  std::vector<CoframeDecl> coframe;
  std::vector<SymbolDecl> symbols;
  std::vector<ValueDecl> values;
  std::vector<StructEq> structure;
  std::vector<RelationDecl> relations;
  std::vector<ConstraintDecl> constraints;
  OptionsDecl options;

  bool operator==(const ProblemSpec&) const = default;
};

}  // namespace doa
