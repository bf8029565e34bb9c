#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace opc {

/// Exact arbitrary-precision rational; always kept in lowest terms.
using Rational = mpq_class;

/// Parses `p/q`, an integer, or a terminating decimal such as `0.125`.
/// Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Shortest exact text: `p/q`, or `p` when the denominator is one.
std::string to_string(const Rational& r);

/// Always `num/den`, as used in the JSON encoding.
std::string to_fraction_string(const Rational& r);

} // namespace opc
