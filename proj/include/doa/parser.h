// Parser, validator and canonical serializer for .doa descriptions.
#pragma once

#include <string>

#include "doa/ast.h"
#include "doa/diagnostics.h"

namespace doa {

struct ParseResult {
  ProblemSpec spec;
  Diagnostics diags;
  bool ok = false;
};

ParseResult parse_spec(const std::string& text);

// Structural checks that need no dimension values: unknown names, slot
// arity, generator ranges, derived-form bookkeeping, option sanity.
Diagnostics validate_spec(const ProblemSpec& spec);

// Canonical text form; parse(serialize(parse(x))) == parse(x).
std::string serialize_spec(const ProblemSpec& spec);

}  // namespace doa
