#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bcd/design.hpp"

namespace bcd {

enum class Parity { even, odd };

inline Parity parity_of(int n) { return n % 2 == 0 ? Parity::even : Parity::odd; }

/// Stationary law of the |D_n| chain (period 2, reflecting at 0):
///   pi_0 = (r - 1) / (2r),  pi_j = (r^2 - 1) / (2 r^(j+1)) for j >= 1.
/// At p = 1 the limits pi_0 = pi_1 = 1/2 are used.
class StationaryDist {
 public:
  explicit StationaryDist(DesignParams params);

  const DesignParams& params() const noexcept { return params_; }
  double pi(int j) const;

  /// lim P(D_2m = 0) = 2 pi_0 = (r - 1) / r.
  double balance_limit_even() const { return 2.0 * pi(0); }
  /// lim P(|D_2m+1| = 1) = 2 pi_1 = (r^2 - 1) / r^2.
  double balance_limit_odd() const { return 2.0 * pi(1); }

 private:
  DesignParams params_;
};

/// Throws std::domain_error at p = 1/2, where the chain has no stationary
/// distribution.
StationaryDist stationary_pmf(const DesignParams& params);

/// Limiting Var(D_n) along even or odd n:
///   even: 4r(r^2+1)/(r^2-1)^2,  odd: 8r^2/(r^2-1)^2 + 1.
/// p = 1 gives the limits 0 and 1. Throws std::domain_error at p = 1/2.
/// When p is held exactly the result is the nearest double to the exact
/// rational value.
double asymptotic_var(const DesignParams& params, Parity parity);
Rational asymptotic_var_exact(const DesignParams& params, Parity parity);

/// |2 pi_k - P(|D_n| = k)| / P(|D_n| = k). For k = 0 this compares with
/// P(D_n = 0); for k >= 1 both signs of the imbalance are pooled. Returns
/// +inf when P(|D_n| = k) = 0.
double steady_state_relative_error(int n, int k, const DesignParams& params, const NumericMode& mode = {});

/// Smallest n (same parity as k, n >= max(k, 1)) from which the stationary
/// approximation stays within `tol` for every same-parity n up to n_max.
/// std::nullopt means no such n <= n_max.
std::optional<int> steady_state_threshold(int k, const DesignParams& params, double tol, int n_max = 500,
                                          const NumericMode& mode = {});

/// Same search for several tolerances, sharing the probability evaluations.
std::vector<std::optional<int>> steady_state_thresholds(int k, const DesignParams& params,
                                                        std::span<const double> tols, int n_max = 500,
                                                        const NumericMode& mode = {});

}  // namespace bcd
