// Deterministic random stream for generic-point substitution.
//
// SplitMix64 is used instead of a stdlib engine because report files must be
// byte-identical for a given seed on every platform.
#pragma once

#include <cstdint>

#include "doa/rational.h"

namespace doa {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next();
};

// Stateless value source: the value of a column depends only on (seed, tag),
// so re-running a stage after a restart reproduces the same generic point.
class ValueStream {
 public:
  explicit ValueStream(std::uint64_t seed) : seed_(seed) {}

  // Small nonzero rational, numerator in [-limit, limit] \ {0}, denominator in
  // [1, 7]. Small magnitudes keep the exact arithmetic cheap.
  Rat value_for(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace doa
