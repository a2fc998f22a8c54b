#include "bivirus/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "bivirus/errors.hpp"

namespace bivirus {

Rational parse_decimal(std::string_view text) {
  using boost::multiprecision::cpp_int;
  const auto fail = [&]() -> ParseError {
    return ParseError("not a decimal literal: '" + std::string(text) + "'");
  };

  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';

  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      --exponent;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw fail();

  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits_start || pos - digits_start > 4) throw fail();
    exponent += std::strtol(std::string(text.substr(start, pos - start)).c_str(), nullptr, 10);
  }
  if (pos != text.size()) throw fail();

  const auto first = digits.find_first_not_of('0');
  cpp_int mantissa(first == std::string::npos ? std::string("0") : digits.substr(first));
  if (negative) mantissa = -mantissa;
  const cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
}

}  // namespace bivirus
