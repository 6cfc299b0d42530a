#include "bcd/stable_product.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace bcd {

FactoredValue::FactoredValue(double v) {
  if (v < 0.0 || std::isnan(v)) throw std::invalid_argument("factored values are nonnegative");
  if (v == 0.0) {
    zero_ = true;
  } else if (v != 1.0) {
    parts_.push_back(v);
  }
}

FactoredValue FactoredValue::zero() { return FactoredValue(0.0); }

double FactoredValue::value() const noexcept {
  if (zero_) return 0.0;
  double result = 1.0;
  for (double part : parts_) result *= part;
  return result;
}

double FactoredValue::log() const noexcept {
  if (zero_) return -std::numeric_limits<double>::infinity();
  double result = 0.0;
  for (double part : parts_) result += std::log(part);
  return result;
}

FactoredValue& FactoredValue::operator*=(double factor) {
  if (factor < 0.0 || std::isnan(factor)) throw std::invalid_argument("factored values are nonnegative");
  if (zero_) return *this;
  if (factor == 0.0) {
    zero_ = true;
    parts_.clear();
    return *this;
  }
  if (!parts_.empty() && std::isnormal(parts_.back() * factor)) {
    parts_.back() *= factor;
  } else {
    parts_.push_back(factor);
  }
  return *this;
}

FactoredValue stable_term_product(std::span<const double> small, std::span<const double> large,
                                  const ProductGuards& guards) {
  std::vector<double> sorted_copy;
  if (!std::is_sorted(small.begin(), small.end(), std::greater<>())) {
    sorted_copy.assign(small.begin(), small.end());
    std::sort(sorted_copy.begin(), sorted_copy.end(), std::greater<>());
    small = sorted_copy;
  }
  if (!small.empty() && small.back() == 0.0) return FactoredValue::zero();

  FactoredValue result;
  double running = 1.0;
  std::size_t next_small = 0;
  std::size_t next_large = 0;

  while (next_large < large.size()) {
    while (next_large < large.size() && (running <= guards.overflow || next_small == small.size())) {
      running *= large[next_large++];
    }
    while (next_small < small.size() && running >= guards.overflow) running *= small[next_small++];
  }
  for (; next_small < small.size(); ++next_small) {
    const double factor = small[next_small];
    if (running * factor < guards.underflow) {
      result.parts_.push_back(running);
      running = factor;
    } else {
      running *= factor;
    }
  }
  if (running != 1.0 || result.parts_.empty()) result.parts_.push_back(running);
  if (result.parts_.size() == 1 && result.parts_.front() == 1.0) result.parts_.clear();
  return result;
}

FactoredValue sum_factored(std::span<const FactoredValue> terms, double underflow) {
  bool plain = true;
  double max_log = -std::numeric_limits<double>::infinity();
  const FactoredValue* largest = nullptr;
  for (const auto& term : terms) {
    if (term.is_zero()) continue;
    if (term.parts().size() > 1 || term.value() < underflow) plain = false;
    const double l = term.log();
    if (l > max_log) {
      max_log = l;
      largest = &term;
    }
  }
  if (largest == nullptr) return FactoredValue::zero();

  if (plain) {
    double total = 0.0;
    for (const auto& term : terms) total += term.value();
    return FactoredValue(total);
  }

  double ratio_sum = 0.0;
  for (const auto& term : terms) {
    if (term.is_zero()) continue;
    ratio_sum += std::exp(term.log() - max_log);
  }
  FactoredValue result = *largest;
  result *= ratio_sum;
  return result;
}

std::vector<double> descending_factors(std::vector<std::pair<double, int>> runs, int reciprocal_top) {
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::size_t total = static_cast<std::size_t>(std::max(reciprocal_top - 1, 0));
  for (const auto& [value, count] : runs) total += static_cast<std::size_t>(std::max(count, 0));

  std::vector<double> out;
  out.reserve(total);
  int next_reciprocal = 2;
  for (const auto& [value, count] : runs) {
    while (next_reciprocal <= reciprocal_top && 1.0 / next_reciprocal > value) {
      out.push_back(1.0 / next_reciprocal++);
    }
    out.insert(out.end(), static_cast<std::size_t>(std::max(count, 0)), value);
  }
  while (next_reciprocal <= reciprocal_top) out.push_back(1.0 / next_reciprocal++);
  return out;
}

}  // namespace bcd
