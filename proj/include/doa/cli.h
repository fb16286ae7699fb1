// Command-line front end, exposed as a function so tests can drive it
// in-process.
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "doa/rational.h"

namespace doa {

// args excludes the program name. Returns the process exit status:
// 0 exact, 1 usage/parse/internal error, 2 upper bound or inconclusive or
// advisory, 3 incompatible, 4 oracle disagreement (verify only).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Formats an exact polynomial fit, highest power first, e.g. "n^2 - 3*n".
std::string polynomial_string(const std::vector<Rat>& coeffs,
                              const std::string& var);

// Exact Lagrange interpolation through the given points; returns
// coefficients by ascending power, trailing zeros trimmed.
std::vector<Rat> lagrange_fit(const std::vector<std::pair<long, long>>& pts);

}  // namespace doa
