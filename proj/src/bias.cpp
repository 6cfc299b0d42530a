#include "bcd/bias.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bcd/imbalance.hpp"

namespace bcd {

namespace {

void require_step(int j) {
  if (j < 1) throw std::invalid_argument("step index must be >= 1 (got " + std::to_string(j) + ")");
}

// p^m sum_{l=0}^{m-1} (m-l)/(m+l) C(m+l, l) q^l, built term by term from
// the ratio of consecutive binomial-power products.
double balance_series(int m, double p, double q) {
  double binomial_power = std::pow(p, m);  // p^m C(m+l, l) q^l at l = 0
  double sum = 0.0;
  for (int l = 0; l < m; ++l) {
    sum += static_cast<double>(m - l) / static_cast<double>(m + l) * binomial_power;
    binomial_power *= q * static_cast<double>(m + l + 1) / static_cast<double>(l + 1);
  }
  return sum;
}

Rational balance_series_exact(int m, const Rational& p, const Rational& q) {
  Rational sum = 0;
  BigInt binomial = 1;  // C(m+l, l)
  for (int l = 0; l < m; ++l) {
    Rational ratio(m - l, m + l);
    ratio.canonicalize();
    sum += ratio * Rational(binomial) * pow(q, static_cast<unsigned long>(l));
    binomial = binomial * (m + l + 1) / (l + 1);
  }
  return pow(p, static_cast<unsigned long>(m)) * sum;
}

}  // namespace

double selection_bias_step(int j, const DesignParams& params, const NumericMode& mode) {
  require_step(j);
  if (mode.exact()) return to_double(selection_bias_step_exact(j, params));
  const double balanced = j == 1 ? 1.0 : pmf_value(j - 1, 0, params, mode);
  return 0.5 * balanced + params.p() * (1.0 - balanced);
}

Rational selection_bias_step_exact(int j, const DesignParams& params) {
  require_step(j);
  const Rational balanced = j == 1 ? Rational(1) : pmf_value_exact(j - 1, 0, params);
  return Rational(1, 2) * balanced + params.exact_p() * (Rational(1) - balanced);
}

double selection_bias_step_closed_form(int j, const DesignParams& params) {
  require_step(j);
  if (j == 1) return 0.5;
  if (j % 2 == 0) return params.p();
  const int m = (j - 1) / 2;
  return params.p() - (params.p() - 0.5) * balance_series(m, params.p(), params.q());
}

double selection_bias_total_closed_form(int n, const DesignParams& params) {
  require_step(n);
  double series = 0.0;
  for (int m = 1; m <= (n - 1) / 2; ++m) series += balance_series(m, params.p(), params.q());
  return 0.5 + (n - 1) * params.p() - (params.p() - 0.5) * series;
}

Rational selection_bias_total_closed_form_exact(int n, const DesignParams& params) {
  require_step(n);
  const Rational& p = params.exact_p();
  const Rational q = params.exact_q();
  Rational series = 0;
  for (int m = 1; m <= (n - 1) / 2; ++m) series += balance_series_exact(m, p, q);
  return Rational(1, 2) + Rational(n - 1) * p - (p - Rational(1, 2)) * series;
}

SelectionBiasReport selection_bias_report(int n, const DesignParams& params, const NumericMode& mode) {
  require_step(n);
  SelectionBiasReport report{n, params, {}, 0.0, 0.0, 0.0, 0.0};
  report.per_step.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    report.per_step.push_back(selection_bias_step(j, params, mode));
    report.total += report.per_step.back();
  }
  report.closed_form_total = mode.exact() ? to_double(selection_bias_total_closed_form_exact(n, params))
                                          : selection_bias_total_closed_form(n, params);
  report.excess = report.total - n / 2.0;
  report.average_excess = report.excess / n;
  return report;
}

double asymptotic_excess(const DesignParams& params) {
  if (params.deterministic_pairs()) return 0.25;
  if (params.has_exact()) return to_double(asymptotic_excess_exact(params));
  const double r = params.r();
  return (r - 1.0) / (4.0 * r);
}

Rational asymptotic_excess_exact(const DesignParams& params) {
  if (params.deterministic_pairs()) return Rational(1, 4);
  const Rational r = params.exact_p() / params.exact_q();
  return (r - 1) / (4 * r);
}

double accidental_bias(std::span<const double> z, const AssignmentCovariance& cov) {
  if (z.size() != static_cast<std::size_t>(cov.n())) {
    throw std::invalid_argument("covariate length " + std::to_string(z.size()) + " does not match n=" +
                                std::to_string(cov.n()));
  }
  double norm2 = 0.0;
  for (double v : z) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) throw std::invalid_argument("covariate vector must have unit norm");
  return cov.matrix().quadratic_form(z);
}

}  // namespace bcd
