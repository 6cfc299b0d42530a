#include "bcd/stationary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcd/imbalance.hpp"

namespace bcd {

namespace {

void require_positive_recurrent(const DesignParams& params) {
  if (params.complete_randomization()) {
    throw std::domain_error("no stationary distribution at p = 1/2 (the imbalance walk is null recurrent)");
  }
}

}  // namespace

StationaryDist::StationaryDist(DesignParams params) : params_(std::move(params)) {
  require_positive_recurrent(params_);
}

double StationaryDist::pi(int j) const {
  if (j < 0) return 0.0;
  if (params_.deterministic_pairs()) return j <= 1 ? 0.5 : 0.0;
  const double r = params_.r();
  if (j == 0) return (r - 1.0) / (2.0 * r);
  return (r * r - 1.0) / 2.0 * std::pow(r, -(j + 1));
}

StationaryDist stationary_pmf(const DesignParams& params) { return StationaryDist(params); }

double asymptotic_var(const DesignParams& params, Parity parity) {
  require_positive_recurrent(params);
  if (params.deterministic_pairs()) return parity == Parity::even ? 0.0 : 1.0;
  if (params.has_exact()) return to_double(asymptotic_var_exact(params, parity));
  const double r = params.r();
  const double r2 = r * r;
  const double denom = (r2 - 1.0) * (r2 - 1.0);
  return parity == Parity::even ? 4.0 * r * (r2 + 1.0) / denom : 8.0 * r2 / denom + 1.0;
}

Rational asymptotic_var_exact(const DesignParams& params, Parity parity) {
  require_positive_recurrent(params);
  if (params.deterministic_pairs()) return parity == Parity::even ? 0 : 1;
  const Rational r = params.exact_p() / params.exact_q();
  const Rational r2 = r * r;
  const Rational denom = (r2 - 1) * (r2 - 1);
  if (parity == Parity::even) return 4 * r * (r2 + 1) / denom;
  return 8 * r2 / denom + 1;
}

double steady_state_relative_error(int n, int k, const DesignParams& params, const NumericMode& mode) {
  const StationaryDist stationary(params);
  const double exact = k == 0 ? pmf_value(n, 0, params, mode) : 2.0 * pmf_value(n, k, params, mode);
  if (exact == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(2.0 * stationary.pi(k) - exact) / exact;
}

std::vector<std::optional<int>> steady_state_thresholds(int k, const DesignParams& params,
                                                        std::span<const double> tols, int n_max,
                                                        const NumericMode& mode) {
  require_positive_recurrent(params);
  if (k < 0) throw std::invalid_argument("threshold state k must be nonnegative");
  if (n_max < k) throw std::invalid_argument("n_max must be at least k");
  for (double tol : tols) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  }

  const int first = k == 0 ? 2 : k;
  int top = n_max;
  if ((top - k) % 2 != 0) --top;

  std::vector<std::optional<int>> thresholds(tols.size());
  std::vector<bool> open(tols.size(), true);
  std::size_t still_open = tols.size();
  for (int n = top; n >= first && still_open > 0; n -= 2) {
    const double error = steady_state_relative_error(n, k, params, mode);
    for (std::size_t i = 0; i < tols.size(); ++i) {
      if (!open[i]) continue;
      if (error <= tols[i]) {
        thresholds[i] = n;
      } else {
        open[i] = false;
        --still_open;
      }
    }
  }
  return thresholds;
}

std::optional<int> steady_state_threshold(int k, const DesignParams& params, double tol, int n_max,
                                          const NumericMode& mode) {
  const double tols[] = {tol};
  return steady_state_thresholds(k, params, tols, n_max, mode).front();
}

}  // namespace bcd
