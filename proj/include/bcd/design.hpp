#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace bcd {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "2/3", "0.6", "1" or "7e-1" into an exact rational.
/// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form ("1" when the denominator is one).
std::string to_string(const Rational& value);

/// Exact integer power of a rational.
Rational pow(const Rational& base, unsigned long exponent);

/// Nearest double (mpq_class::get_d truncates toward zero).
double to_double(const Rational& value);

/// Bias of the coin. Holds p in [1/2, 1], q = 1 - p and the odds ratio
/// r = p/q (infinite at p = 1). When built from a rational (or from text)
/// the exact value is retained so the rational backend can use it.
class DesignParams {
 public:
  explicit DesignParams(double p);
  explicit DesignParams(const Rational& p);

  /// Accepts a fraction ("2/3") or a decimal ("0.7"); both are exact.
  static DesignParams parse(std::string_view text);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  /// +infinity when p == 1.
  double r() const noexcept;

  bool has_exact() const noexcept { return exact_p_.has_value(); }
  /// Throws std::logic_error if the params were built from a double.
  const Rational& exact_p() const;
  Rational exact_q() const;

  bool complete_randomization() const noexcept { return p_ == 0.5; }
  bool deterministic_pairs() const noexcept { return p_ == 1.0; }

  std::string label() const;

 private:
  double p_;
  double q_;
  std::optional<Rational> exact_p_;
};

enum class Backend { float64_stable, exact_rational };

/// Selects the arithmetic used by the exact formulas.
///
/// In the float backend, products of many factors are evaluated with the
/// guarded interleaving of stable_term_product: `overflow_guard` (M) bounds
/// the running product and must exceed 2n, `underflow_guard` (m) is the level
/// below which products are kept in factored form. A zero overflow guard
/// selects M = 4n.
struct NumericMode {
  Backend backend = Backend::float64_stable;
  double overflow_guard = 0.0;
  double underflow_guard = 1e-300;
  int rational_cap = 256;

  static NumericMode float64() { return {}; }
  static NumericMode rational() {
    NumericMode mode;
    mode.backend = Backend::exact_rational;
    return mode;
  }

  bool exact() const noexcept { return backend == Backend::exact_rational; }

  /// M for a computation at size n. Throws std::invalid_argument when an
  /// explicit guard does not exceed 2n.
  double overflow_for(int n) const;

  /// Throws std::invalid_argument unless this is a rational mode that can
  /// evaluate size n for the given params.
  void require_exact(const DesignParams& params, int n) const;
};

std::string to_string(Backend backend);

}  // namespace bcd
