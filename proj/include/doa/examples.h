// Registry of the bundled example specs embedded at build time.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace doa {

struct ExampleInfo {
  std::string name;
  const char* text;
};

const std::vector<ExampleInfo>& bundled_examples();

// Resolves a bundled name to its spec text; family names without a variant
// suffix resolve to their default variant.
std::optional<std::string> find_example(const std::string& name);

// One line per example family, in the documented order.
std::vector<std::string> example_listing();

}  // namespace doa
