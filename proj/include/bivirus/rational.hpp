#pragma once

#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bivirus {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a decimal literal such as "0.125", "-3", "2.5e-3".
/// Throws ParseError on anything else.
Rational parse_decimal(std::string_view text);

}  // namespace bivirus
