#pragma once

#include <string>
#include <string_view>

#include "cgrid/interval.hpp"

namespace cgrid {

/// Tightest interval enclosing the exact value of a decimal literal such as
/// "-0.000656767" or "1e-12". A literal that is exactly representable yields a
/// point interval; otherwise the result has width one ulp.
/// @throws std::invalid_argument on malformed input.
Interval parse_decimal(std::string_view text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace cgrid
