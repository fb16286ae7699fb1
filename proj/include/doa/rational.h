// Exact rational arithmetic used throughout the engine.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace doa {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string rat_to_string(const Rat& r) {
  return r.str();
}

// Parses "p", "-p", "p/q" with optional leading sign. Returns nullopt on junk.
std::optional<Rat> rat_from_string(const std::string& s);

}  // namespace doa
