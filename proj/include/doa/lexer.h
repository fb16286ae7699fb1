// Line-oriented tokenizer for the .doa language.
#pragma once

#include <string>
#include <vector>

#include "doa/diagnostics.h"

namespace doa {

enum class TokKind {
  kIdent,
  kInt,
  kLBracket,
  kRBracket,
  kComma,
  kSemicolon,
  kColon,
  kEquals,
  kPlus,
  kMinus,
  kSlash,
  kWedge,
};

struct Token {
  TokKind kind;
  std::string text;  // identifier name or integer digits
  int line = 0;
};

// One logical line of tokens (comments and blank lines dropped).
struct TokenLine {
  std::vector<Token> toks;
  int line = 0;
};

std::vector<TokenLine> tokenize(const std::string& input, Diagnostics& diags);

}  // namespace doa
