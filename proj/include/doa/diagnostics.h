// Diagnostic records shared by the parser, validator and engine.
#pragma once

#include <string>
#include <vector>

namespace doa {

enum class Severity { kNote, kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string message;
  int line = 0;  // 1-based source line when known, 0 otherwise

  static Diagnostic error(std::string msg, int line = 0) {
    return {Severity::kError, std::move(msg), line};
  }
  static Diagnostic warning(std::string msg, int line = 0) {
    return {Severity::kWarning, std::move(msg), line};
  }
  static Diagnostic note(std::string msg, int line = 0) {
    return {Severity::kNote, std::move(msg), line};
  }
};

using Diagnostics = std::vector<Diagnostic>;

bool has_error(const Diagnostics& diags);
std::string format_diagnostics(const Diagnostics& diags);

}  // namespace doa
