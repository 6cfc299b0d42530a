#pragma once

#include <span>
#include <utility>
#include <vector>

namespace bcd {

struct ProductGuards {
  double overflow;            // M: the running product is kept below this
  double underflow = 1e-300;  // m: below this the product is split into parts
};

/// A nonnegative number stored as a product of parts, each of which is a
/// normal double. Products of many small probabilities that would underflow
/// stay representable; value() collapses them (and may flush to zero).
class FactoredValue {
 public:
  FactoredValue() = default;  // the empty product, 1
  explicit FactoredValue(double v);

  static FactoredValue zero();

  std::span<const double> parts() const noexcept { return parts_; }
  bool is_zero() const noexcept { return zero_; }

  double value() const noexcept;
  /// Natural log; -inf for zero.
  double log() const noexcept;

  FactoredValue& operator*=(double factor);

 private:
  friend FactoredValue stable_term_product(std::span<const double>, std::span<const double>,
                                           const ProductGuards&);
  friend FactoredValue sum_factored(std::span<const FactoredValue>, double);

  std::vector<double> parts_;
  bool zero_ = false;
};

/// Product of `small` (factors in [0, 1]) and `large` (factors >= 1),
/// interleaved so the running product stays inside [m, M]:
///   1. multiply large factors until the product exceeds M,
///   2. multiply small factors (largest first) until it drops below M,
///   3. repeat until the large factors are exhausted,
///   4. finish with the remaining small factors, largest to smallest; each
///      time the product would fall under m the current part is saved and a
///      new part is started.
/// Small factors not already in descending order are sorted. An empty input
/// is the empty product 1; any zero factor gives zero.
FactoredValue stable_term_product(std::span<const double> small, std::span<const double> large,
                                  const ProductGuards& guards);

/// Sum of nonnegative factored terms. Plain summation when every term is a
/// normal double above the underflow guard; otherwise each term is rescaled
/// by the largest one and the common scale is kept in factored form.
FactoredValue sum_factored(std::span<const FactoredValue> terms, double underflow = 1e-300);

/// Builds a descending list of small factors from constant runs
/// (value, multiplicity) and the reciprocals 1/2, 1/3, ..., 1/top.
std::vector<double> descending_factors(std::vector<std::pair<double, int>> runs, int reciprocal_top);

}  // namespace bcd
