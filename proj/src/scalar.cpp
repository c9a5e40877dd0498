#include "skt/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace skt {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::Rational ? "rational" : "float";
}

namespace {

boost::multiprecision::mpz_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  return boost::multiprecision::mpz_int(std::string(digits));
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string exp_text(text.substr(e + 1));
    if (exp_text.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    std::size_t used = 0;
    exponent = std::stol(exp_text, &used);
    if (used != exp_text.size())
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<long>(text.size() - dot - 1);
    if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  } else {
    digits = std::string(text);
  }
  Rational value(parse_integer(digits, whole));
  boost::multiprecision::mpz_int ten = 10;
  boost::multiprecision::mpz_int scale = boost::multiprecision::pow(ten, static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= Rational(scale);
  } else {
    value /= Rational(scale);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), text);
    Rational den = parse_decimal(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text, text);
}

std::string format_rational(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

template <>
double scalar_from_double<double>(double x) {
  return x;
}

template <>
Rational scalar_from_double<Rational>(double x) {
  // exact binary value of the double
  return Rational(x);
}

template <>
double exact_sqrt<double>(const double& x) {
  if (x < 0) throw std::domain_error("square root of a negative number");
  return std::sqrt(x);
}

template <>
Rational exact_sqrt<Rational>(const Rational& x) {
  if (x < 0) throw std::domain_error("square root of a negative number");
  auto num = boost::multiprecision::numerator(x);
  auto den = boost::multiprecision::denominator(x);
  auto rn = boost::multiprecision::sqrt(num);
  auto rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den)
    throw std::domain_error("no exact rational square root of " + format_rational(x));
  return Rational(rn) / Rational(rd);
}

}  // namespace skt
