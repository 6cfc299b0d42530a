#pragma once

#include <vector>

#include "bcd/design.hpp"
#include "bcd/stable_product.hpp"

namespace bcd {

/// Exact distribution of the imbalance D_n after n assignments.
///
/// Support is {-n, -n+2, ..., n}; mass() returns 0 off the support. In the
/// rational backend the exact masses are kept alongside the doubles.
class ImbalancePMF {
 public:
  ImbalancePMF(int n, DesignParams params, std::vector<double> mass, std::vector<Rational> exact = {});

  int n() const noexcept { return n_; }
  const DesignParams& params() const noexcept { return params_; }

  double mass(int k) const noexcept;
  /// P(|D_n| = k).
  double abs_mass(int k) const noexcept;

  bool has_exact() const noexcept { return !exact_.empty(); }
  /// Throws std::logic_error in float mode.
  Rational exact_mass(int k) const;

  std::vector<int> support() const;
  double total() const;
  Rational exact_total() const;
  /// E[D_n^2], which is Var(D_n) since the distribution is symmetric.
  double second_moment() const;

 private:
  bool on_support(int k) const noexcept { return k >= -n_ && k <= n_ && ((n_ - k) % 2 == 0); }

  int n_;
  DesignParams params_;
  std::vector<double> mass_;  // index (k + n) / 2
  std::vector<Rational> exact_;
};

/// Factors of the l-th summand of the closed form for P(D_n = k): the
/// `small` ones lie in (0, 1], the `large` ones are (n+k)/2+1 ... (n+k)/2+l.
/// For p < 1 and l >= 1 there are (n+k)/2 + 2l small and l large factors.
struct TermFactors {
  std::vector<double> small;
  std::vector<double> large;
};
TermFactors imbalance_term_factors(int n, int k, int l, const DesignParams& params);

/// Exact rational value of the same summand.
Rational imbalance_term_exact(int n, int k, int l, const DesignParams& params);

/// P(D_n = k) from the closed form. k may be negative; off-support
/// arguments give 0.
double pmf_value(int n, int k, const DesignParams& params, const NumericMode& mode = {});
Rational pmf_value_exact(int n, int k, const DesignParams& params);

/// Full distribution of D_n from the closed form (n >= 1).
ImbalancePMF pmf_dn(int n, const DesignParams& params, const NumericMode& mode = {});

/// Independent route: iterate the one-step recurrences of the imbalance
/// walk from D_0 = 0.
ImbalancePMF dp_pmf_dn(int n, const DesignParams& params);
ImbalancePMF dp_pmf_dn_exact(int n, const DesignParams& params);

/// Var(D_n) as the sum over k >= 1 of k^2 P(|D_n| = k).
double var_dn(int n, const DesignParams& params, const NumericMode& mode = {});
Rational var_dn_exact(int n, const DesignParams& params);

}  // namespace bcd
