#include "bcd/first_visit.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bcd/stable_product.hpp"

namespace bcd {

namespace {

bool reachable(int k, int l) { return l >= std::abs(k) && (l - std::abs(k)) % 2 == 0; }

}  // namespace

double first_visit(int k, int l, const DesignParams& params, const NumericMode& mode) {
  if (mode.exact()) return to_double(first_visit_exact(k, l, params));
  if (k == 0) return l == 0 ? 1.0 : 0.0;
  if (l <= 0 || !reachable(k, l)) return 0.0;
  const int steps_down = (l + std::abs(k)) / 2;
  const int steps_up = (l - std::abs(k)) / 2;
  // C(l, steps_up) = prod_{i=1}^{steps_up} (steps_down + i) / i
  const std::vector<double> small = descending_factors(
      {{static_cast<double>(std::abs(k)) / l, 1}, {params.p(), steps_down}, {params.q(), steps_up}}, steps_up);
  std::vector<double> large;
  large.reserve(static_cast<std::size_t>(steps_up));
  for (int i = 1; i <= steps_up; ++i) large.push_back(static_cast<double>(steps_down + i));
  return stable_term_product(small, large, {mode.overflow_for(l), mode.underflow_guard}).value();
}

Rational first_visit_exact(int k, int l, const DesignParams& params) {
  if (k == 0) return l == 0 ? 1 : 0;
  if (l <= 0 || !reachable(k, l)) return 0;
  const int steps_down = (l + std::abs(k)) / 2;
  const int steps_up = (l - std::abs(k)) / 2;
  BigInt ways;
  mpz_bin_uiui(ways.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(steps_down));
  Rational value(std::abs(k), l);
  value.canonicalize();
  return value * Rational(ways) * pow(params.exact_p(), static_cast<unsigned long>(steps_down)) *
         pow(params.exact_q(), static_cast<unsigned long>(steps_up));
}

template <class Scalar>
BasicFirstVisitTable<Scalar>::BasicFirstVisitTable(const DesignParams& params, int max_state, int max_horizon,
                                                   const NumericMode& mode)
    : max_state_(max_state), max_horizon_(max_horizon) {
  if (max_state < 0 || max_horizon < 0) throw std::invalid_argument("first-visit table bounds must be nonnegative");
  single_.resize(static_cast<std::size_t>(max_state + 1));
  cumulative_.resize(static_cast<std::size_t>(max_state + 1));
  for (int k = 1; k <= max_state; ++k) {
    auto& row = single_[static_cast<std::size_t>(k)];
    auto& sums = cumulative_[static_cast<std::size_t>(k)];
    row.assign(static_cast<std::size_t>(max_horizon + 1), Scalar(0));
    sums.assign(static_cast<std::size_t>(max_horizon + 1), Scalar(0));
    Scalar running(0);
    for (int l = 0; l <= max_horizon; ++l) {
      if (reachable(k, l)) {
        if constexpr (std::is_same_v<Scalar, Rational>) {
          row[static_cast<std::size_t>(l)] = first_visit_exact(k, l, params);
        } else {
          row[static_cast<std::size_t>(l)] = first_visit(k, l, params, mode);
        }
        running += row[static_cast<std::size_t>(l)];
      }
      sums[static_cast<std::size_t>(l)] = running;
    }
  }
}

template <class Scalar>
Scalar BasicFirstVisitTable<Scalar>::f(int k, int l) const {
  if (k == 0) return Scalar(l == 0 ? 1 : 0);
  if (l < 0 || !reachable(k, l)) return Scalar(0);
  if (std::abs(k) > max_state_ || l > max_horizon_) {
    throw std::out_of_range("first-visit lookup outside table: k=" + std::to_string(k) + " l=" + std::to_string(l));
  }
  return single_[static_cast<std::size_t>(std::abs(k))][static_cast<std::size_t>(l)];
}

template <class Scalar>
Scalar BasicFirstVisitTable<Scalar>::f_hat(int k, int u) const {
  if (k == 0) return Scalar(1);
  if (u < std::abs(k)) return Scalar(0);
  if (std::abs(k) > max_state_ || u > max_horizon_) {
    throw std::out_of_range("cumulative first-visit lookup outside table: k=" + std::to_string(k) +
                            " u=" + std::to_string(u));
  }
  return cumulative_[static_cast<std::size_t>(std::abs(k))][static_cast<std::size_t>(u)];
}

template class BasicFirstVisitTable<double>;
template class BasicFirstVisitTable<Rational>;

}  // namespace bcd
