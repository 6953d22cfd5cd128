#include "cgrid/decimal.hpp"

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace cgrid {

namespace {

// Exact rational value of a decimal literal.
mpq_class exact_value(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exp10;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal literal: '" + std::string(s) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("malformed decimal literal: '" + std::string(s) + "'");
    ++i;
    long e = 0;
    const char* first = s.data() + i;
    const char* last = s.data() + s.size();
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("malformed exponent: '" + std::string(s) + "'");
    exp10 += e;
  }
  if (exp10 > 400 || exp10 < -800) throw std::invalid_argument("decimal exponent out of range: '" + std::string(s) + "'");
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

}  // namespace

Interval parse_decimal(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  const mpq_class exact = exact_value(s);
  const std::string owned(s);
  char* end = nullptr;
  const double d = std::strtod(owned.c_str(), &end);
  if (!std::isfinite(d)) throw std::invalid_argument("decimal literal overflows binary64: '" + owned + "'");
  const int c = cmp(exact, mpq_class(d));
  if (c == 0) return Interval(d);
  if (c < 0) return Interval(rounding::prev(d), d);
  return Interval(d, rounding::next(d));
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace cgrid
