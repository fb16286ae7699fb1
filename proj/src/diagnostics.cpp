#include "doa/diagnostics.h"

#include <sstream>

namespace doa {

bool has_error(const Diagnostics& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::kError) return true;
  }
  return false;
}

std::string format_diagnostics(const Diagnostics& diags) {
  std::ostringstream out;
  for (const auto& d : diags) {
    switch (d.severity) {
      case Severity::kError: out << "error"; break;
      case Severity::kWarning: out << "warning"; break;
      case Severity::kNote: out << "note"; break;
    }
    if (d.line > 0) out << " (line " << d.line << ")";
    out << ": " << d.message << "\n";
  }
  return out.str();
}

}  // namespace doa
