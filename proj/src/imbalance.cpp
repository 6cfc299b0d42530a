#include "bcd/imbalance.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace bcd {

namespace {

void require_steps(int n) {
  if (n < 1) throw std::invalid_argument("step count n must be >= 1 (got " + std::to_string(n) + ")");
}

bool on_support(int n, int k) { return std::abs(k) <= n && (n - k) % 2 == 0; }

// Largest summation index of the closed form for P(D_n = k), k >= 0.
int last_term(int n, int k) { return k == 0 ? n / 2 - 1 : (n - k) / 2; }

BigInt binomial(unsigned long top, unsigned long bottom) {
  BigInt result;
  mpz_bin_uiui(result.get_mpz_t(), top, bottom);
  return result;
}

template <class Scalar>
std::vector<Scalar> recurrence_rows(int n, const Scalar& p, const Scalar& q) {
  const Scalar half = Scalar(1) / Scalar(2);
  // a[k] = P(D_j = k) for k = 0..j
  std::vector<Scalar> a{Scalar(1)};
  for (int j = 0; j < n; ++j) {
    std::vector<Scalar> b(static_cast<std::size_t>(j + 2), Scalar(0));
    auto at = [&](int k) -> Scalar { return k <= j ? a[static_cast<std::size_t>(k)] : Scalar(0); };
    b[0] = Scalar(2) * p * at(1);
    if (j == 0) {
      b[1] = half * at(0);
    } else {
      b[1] = half * at(0) + p * at(2);
      for (int k = 2; k <= j; ++k) b[static_cast<std::size_t>(k)] = q * at(k - 1) + p * at(k + 1);
      b[static_cast<std::size_t>(j + 1)] = q * at(j);
    }
    a = std::move(b);
  }
  return a;
}

}  // namespace

ImbalancePMF::ImbalancePMF(int n, DesignParams params, std::vector<double> mass, std::vector<Rational> exact)
    : n_(n), params_(std::move(params)), mass_(std::move(mass)), exact_(std::move(exact)) {
  require_steps(n);
  if (mass_.size() != static_cast<std::size_t>(n + 1)) throw std::invalid_argument("pmf needs n+1 masses");
  if (!exact_.empty() && exact_.size() != mass_.size()) throw std::invalid_argument("exact masses size mismatch");
}

double ImbalancePMF::mass(int k) const noexcept {
  return on_support(k) ? mass_[static_cast<std::size_t>((k + n_) / 2)] : 0.0;
}

double ImbalancePMF::abs_mass(int k) const noexcept {
  if (k < 0) return 0.0;
  return k == 0 ? mass(0) : mass(k) + mass(-k);
}

Rational ImbalancePMF::exact_mass(int k) const {
  if (exact_.empty()) throw std::logic_error("pmf was computed without exact masses");
  return on_support(k) ? exact_[static_cast<std::size_t>((k + n_) / 2)] : Rational(0);
}

std::vector<int> ImbalancePMF::support() const {
  std::vector<int> ks;
  for (int k = -n_; k <= n_; k += 2) ks.push_back(k);
  return ks;
}

double ImbalancePMF::total() const {
  double sum = 0.0;
  for (double m : mass_) sum += m;
  return sum;
}

Rational ImbalancePMF::exact_total() const {
  Rational sum = 0;
  for (int k = -n_; k <= n_; k += 2) sum += exact_mass(k);
  return sum;
}

double ImbalancePMF::second_moment() const {
  double sum = 0.0;
  for (int k = -n_; k <= n_; k += 2) sum += static_cast<double>(k) * k * mass(k);
  return sum;
}

TermFactors imbalance_term_factors(int n, int k, int l, const DesignParams& params) {
  k = std::abs(k);
  if (!on_support(n, k) || l < 0 || l > std::max(last_term(n, k), 0)) {
    throw std::invalid_argument("no such summand in the closed form for P(D_n = k)");
  }
  const int half_sum = (n + k) / 2;
  const double ratio = static_cast<double>(n + k - 2 * l) / static_cast<double>(n + k + 2 * l);
  TermFactors factors;
  if (k == 0) {
    factors.small = descending_factors({{ratio, 1}, {params.p(), n / 2}, {params.q(), l}}, l);
  } else {
    factors.small = descending_factors(
        {{0.5, 1}, {ratio, 1}, {params.p(), (n - k) / 2}, {params.q(), k + l - 1}}, l);
  }
  factors.large.reserve(static_cast<std::size_t>(l));
  for (int i = 1; i <= l; ++i) factors.large.push_back(static_cast<double>(half_sum + i));
  return factors;
}

Rational imbalance_term_exact(int n, int k, int l, const DesignParams& params) {
  k = std::abs(k);
  const Rational& p = params.exact_p();
  const Rational q = params.exact_q();
  const int half_sum = (n + k) / 2;
  Rational term(n + k - 2 * l, n + k + 2 * l);
  term.canonicalize();
  term *= Rational(binomial(static_cast<unsigned long>(half_sum + l), static_cast<unsigned long>(l)));
  if (k == 0) {
    term *= pow(p, static_cast<unsigned long>(n / 2)) * pow(q, static_cast<unsigned long>(l));
  } else {
    term *= Rational(1, 2) * pow(p, static_cast<unsigned long>((n - k) / 2)) *
            pow(q, static_cast<unsigned long>(k + l - 1));
  }
  return term;
}

double pmf_value(int n, int k, const DesignParams& params, const NumericMode& mode) {
  require_steps(n);
  if (mode.exact()) return to_double(pmf_value_exact(n, k, params));
  k = std::abs(k);
  if (!on_support(n, k)) return 0.0;
  const ProductGuards guards{mode.overflow_for(n), mode.underflow_guard};
  std::vector<FactoredValue> terms;
  for (int l = 0; l <= last_term(n, k); ++l) {
    const TermFactors f = imbalance_term_factors(n, k, l, params);
    terms.push_back(stable_term_product(f.small, f.large, guards));
  }
  return sum_factored(terms, guards.underflow).value();
}

Rational pmf_value_exact(int n, int k, const DesignParams& params) {
  require_steps(n);
  k = std::abs(k);
  if (!on_support(n, k)) return 0;
  Rational sum = 0;
  for (int l = 0; l <= last_term(n, k); ++l) sum += imbalance_term_exact(n, k, l, params);
  return sum;
}

ImbalancePMF pmf_dn(int n, const DesignParams& params, const NumericMode& mode) {
  require_steps(n);
  std::vector<double> mass(static_cast<std::size_t>(n + 1));
  std::vector<Rational> exact;
  if (mode.exact()) {
    mode.require_exact(params, n);
    exact.resize(mass.size());
    for (int k = n % 2; k <= n; k += 2) {
      const Rational value = pmf_value_exact(n, k, params);
      exact[static_cast<std::size_t>((n + k) / 2)] = value;
      exact[static_cast<std::size_t>((n - k) / 2)] = value;
    }
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = to_double(exact[i]);
  } else {
    for (int k = n % 2; k <= n; k += 2) {
      const double value = pmf_value(n, k, params, mode);
      mass[static_cast<std::size_t>((n + k) / 2)] = value;
      mass[static_cast<std::size_t>((n - k) / 2)] = value;
    }
  }
  return ImbalancePMF(n, params, std::move(mass), std::move(exact));
}

ImbalancePMF dp_pmf_dn(int n, const DesignParams& params) {
  require_steps(n);
  const std::vector<double> half_line = recurrence_rows<double>(n, params.p(), params.q());
  std::vector<double> mass(static_cast<std::size_t>(n + 1));
  for (int k = n % 2; k <= n; k += 2) {
    mass[static_cast<std::size_t>((n + k) / 2)] = half_line[static_cast<std::size_t>(k)];
    mass[static_cast<std::size_t>((n - k) / 2)] = half_line[static_cast<std::size_t>(k)];
  }
  return ImbalancePMF(n, params, std::move(mass));
}

ImbalancePMF dp_pmf_dn_exact(int n, const DesignParams& params) {
  require_steps(n);
  const std::vector<Rational> half_line = recurrence_rows<Rational>(n, params.exact_p(), params.exact_q());
  std::vector<Rational> exact(static_cast<std::size_t>(n + 1));
  for (int k = n % 2; k <= n; k += 2) {
    exact[static_cast<std::size_t>((n + k) / 2)] = half_line[static_cast<std::size_t>(k)];
    exact[static_cast<std::size_t>((n - k) / 2)] = half_line[static_cast<std::size_t>(k)];
  }
  std::vector<double> mass(exact.size());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = to_double(exact[i]);
  return ImbalancePMF(n, params, std::move(mass), std::move(exact));
}

double var_dn(int n, const DesignParams& params, const NumericMode& mode) {
  require_steps(n);
  if (mode.exact()) return to_double(var_dn_exact(n, params));
  double sum = 0.0;
  for (int k = (n % 2 == 0) ? 2 : 1; k <= n; k += 2) {
    sum += static_cast<double>(k) * k * 2.0 * pmf_value(n, k, params, mode);
  }
  return sum;
}

Rational var_dn_exact(int n, const DesignParams& params) {
  require_steps(n);
  Rational sum = 0;
  for (int k = (n % 2 == 0) ? 2 : 1; k <= n; k += 2) sum += Rational(2 * k * k) * pmf_value_exact(n, k, params);
  return sum;
}

}  // namespace bcd
