#include "doa/lexer.h"

#include <cctype>

namespace doa {

std::vector<TokenLine> tokenize(const std::string& input, Diagnostics& diags) {
  std::vector<TokenLine> lines;
  TokenLine cur;
  int line = 1;
  std::size_t i = 0;
  auto flush = [&] {
    if (!cur.toks.empty()) {
      cur.line = cur.toks.front().line;
      lines.push_back(std::move(cur));
      cur = TokenLine{};
    }
  };
  while (i < input.size()) {
    char c = input[i];
    if (c == '\n') {
      flush();
      ++line;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < input.size() && input[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < input.size() &&
             (std::isalnum(static_cast<unsigned char>(input[j])) ||
              input[j] == '_')) {
        ++j;
      }
      cur.toks.push_back({TokKind::kIdent, input.substr(i, j - i), line});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < input.size() &&
             std::isdigit(static_cast<unsigned char>(input[j]))) {
        ++j;
      }
      cur.toks.push_back({TokKind::kInt, input.substr(i, j - i), line});
      i = j;
      continue;
    }
    TokKind kind;
    switch (c) {
      case '[': kind = TokKind::kLBracket; break;
      case ']': kind = TokKind::kRBracket; break;
      case ',': kind = TokKind::kComma; break;
      case ';': kind = TokKind::kSemicolon; break;
      case ':': kind = TokKind::kColon; break;
      case '=': kind = TokKind::kEquals; break;
      case '+': kind = TokKind::kPlus; break;
      case '-': kind = TokKind::kMinus; break;
      case '/': kind = TokKind::kSlash; break;
      case '^': kind = TokKind::kWedge; break;
      case '(': kind = TokKind::kLBracket; break;  // () and [] are interchangeable
      case ')': kind = TokKind::kRBracket; break;
      default:
        diags.push_back(Diagnostic::error(
            std::string("unexpected character '") + c + "'", line));
        ++i;
        continue;
    }
    cur.toks.push_back({kind, std::string(1, c), line});
    ++i;
  }
  flush();
  return lines;
}

}  // namespace doa
