#include "bcd/design.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bcd {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  }
  BigInt value(std::string(s), 10);
  return negative ? BigInt(-value) : value;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    if (!exp_part.empty() && exp_part.front() == '+') exp_part.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (ec != std::errc() || ptr != exp_part.data() + exp_part.size() || std::labs(exponent) > 4096) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(s);
  } else {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  }
  if (!all_digits(digits)) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational value = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  value.canonicalize();
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational value(num, den);
    value.canonicalize();
    return value;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  if (canonical.get_den() == 1) return canonical.get_num().get_str();
  return canonical.get_str();
}

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  const BigInt num = abs(value.get_num());
  const BigInt& den = value.get_den();
  // At least 40 significant digits of |value|, plus a sticky digit when the
  // expansion continues, handed to the correctly rounding strtod.
  const long gap = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10)) -
                   static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10));
  long shift = 40 + std::max(gap, 0L);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift));
  BigInt quotient, remainder;
  mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), BigInt(num * scale).get_mpz_t(), den.get_mpz_t());
  std::string text = value < 0 ? "-" : "";
  text += quotient.get_str();
  if (remainder != 0) {
    text += '1';
    ++shift;
  }
  text += "e-" + std::to_string(shift);
  return std::strtod(text.c_str(), nullptr);
}

Rational pow(const Rational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational result(num, den);
  result.canonicalize();
  return result;
}

DesignParams::DesignParams(double p) : p_(p), q_(1.0 - p) {
  if (!(p >= 0.5 && p <= 1.0)) {
    std::ostringstream os;
    os << "coin bias p=" << p << " outside [1/2, 1]";
    throw std::invalid_argument(os.str());
  }
}

DesignParams::DesignParams(const Rational& p) : DesignParams(to_double(p)) {
  if (p < Rational(1, 2) || p > 1) {
    throw std::invalid_argument("coin bias p=" + to_string(p) + " outside [1/2, 1]");
  }
  exact_p_ = p;
}

DesignParams DesignParams::parse(std::string_view text) { return DesignParams(parse_rational(text)); }

double DesignParams::r() const noexcept {
  if (q_ == 0.0) return std::numeric_limits<double>::infinity();
  return p_ / q_;
}

const Rational& DesignParams::exact_p() const {
  if (!exact_p_) throw std::logic_error("design params carry no exact value of p");
  return *exact_p_;
}

Rational DesignParams::exact_q() const { return Rational(1) - exact_p(); }

std::string DesignParams::label() const {
  if (exact_p_) return to_string(*exact_p_);
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

double NumericMode::overflow_for(int n) const {
  if (overflow_guard == 0.0) return 4.0 * std::max(n, 1);
  if (!(overflow_guard > 2.0 * n)) {
    std::ostringstream os;
    os << "overflow guard M=" << overflow_guard << " must exceed 2n=" << 2 * n;
    throw std::invalid_argument(os.str());
  }
  return overflow_guard;
}

void NumericMode::require_exact(const DesignParams& params, int n) const {
  if (!exact()) throw std::invalid_argument("rational evaluation requested in float mode");
  if (!params.has_exact()) {
    throw std::invalid_argument("rational mode needs p given as a ratio of integers");
  }
  if (n > rational_cap) {
    std::ostringstream os;
    os << "rational mode is capped at n=" << rational_cap << " (got n=" << n << ")";
    throw std::invalid_argument(os.str());
  }
}

std::string to_string(Backend backend) {
  return backend == Backend::exact_rational ? "rational" : "float";
}

}  // namespace bcd
