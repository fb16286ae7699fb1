#include "doa/rng.h"

namespace doa {

std::uint64_t SplitMix64::next() {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rat ValueStream::value_for(std::uint64_t tag) const {
  SplitMix64 mix(seed_ ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  std::uint64_t a = mix.next();
  std::uint64_t b = mix.next();
  long num = static_cast<long>(a % 199) - 99;  // [-99, 99]
  if (num == 0) num = 101;
  long den = static_cast<long>(b % 7) + 1;  // [1, 7]
  return Rat(num, den);
}

}  // namespace doa
