#pragma once

#include <type_traits>
#include <vector>

#include "bcd/design.hpp"

namespace bcd {

/// t(k) = P(next assignment is A | current imbalance k):
/// 1/2 at balance, q above it, p below it.
class TransitionRule {
 public:
  explicit TransitionRule(DesignParams params) : params_(std::move(params)) {}

  const DesignParams& params() const noexcept { return params_; }

  double operator()(int k) const noexcept { return k == 0 ? 0.5 : (k > 0 ? params_.q() : params_.p()); }
  Rational exact(int k) const { return k == 0 ? Rational(1, 2) : (k > 0 ? params_.exact_q() : params_.exact_p()); }

  template <class Scalar>
  Scalar at(int k) const {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return exact(k);
    } else {
      return (*this)(k);
    }
  }

 private:
  DesignParams params_;
};

/// Probability that the imbalance walk started at k first reaches 0 after
/// exactly l steps (gambler's ruin against an infinitely rich adversary):
///   |k|/l * C(l, (l+|k|)/2) * p^((l+|k|)/2) * q^((l-|k|)/2),
/// zero when l < |k| or l - |k| is odd; f(0, 0) = 1 and f(k != 0, 0) = 0.
double first_visit(int k, int l, const DesignParams& params, const NumericMode& mode = {});
Rational first_visit_exact(int k, int l, const DesignParams& params);

/// Memoized first-visit probabilities f(k, l) and their partial sums
/// f_hat(k, u) = sum_{l=|k|}^{u} f(k, l), with f_hat(0, u) = 1, for
/// |k| <= max_state and horizons up to max_horizon.
template <class Scalar>
class BasicFirstVisitTable {
 public:
  BasicFirstVisitTable(const DesignParams& params, int max_state, int max_horizon, const NumericMode& mode = {});

  int max_state() const noexcept { return max_state_; }
  int max_horizon() const noexcept { return max_horizon_; }

  Scalar f(int k, int l) const;
  /// Throws std::out_of_range outside the tabulated region (except where
  /// the value is trivially 0 or 1).
  Scalar f_hat(int k, int u) const;

 private:
  int max_state_;
  int max_horizon_;
  std::vector<std::vector<Scalar>> single_;      // [|k|][l]
  std::vector<std::vector<Scalar>> cumulative_;  // [|k|][u]
};

using FirstVisitTable = BasicFirstVisitTable<double>;
using ExactFirstVisitTable = BasicFirstVisitTable<Rational>;

extern template class BasicFirstVisitTable<double>;
extern template class BasicFirstVisitTable<Rational>;

}  // namespace bcd
