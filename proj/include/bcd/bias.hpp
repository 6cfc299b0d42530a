#pragma once

#include <span>
#include <vector>

#include "bcd/covariance.hpp"
#include "bcd/design.hpp"

namespace bcd {

/// Probability that an investigator who always guesses the arm assigned
/// least often so far (a fair guess at balance) is right at step j:
///   1/2 P(D_{j-1} = 0) + p P(|D_{j-1}| > 0).
double selection_bias_step(int j, const DesignParams& params, const NumericMode& mode = {});
Rational selection_bias_step_exact(int j, const DesignParams& params);

/// Closed form of the step-j guessing probability: 1/2 at j = 1, p at even
/// j, and for j = 2m + 1
///   p - (p - 1/2) p^m sum_{l=0}^{m-1} (m-l)/(m+l) C(m+l, l) q^l.
double selection_bias_step_closed_form(int j, const DesignParams& params);

/// Total expected number of correct guesses over n trials in closed form:
///   1/2 + (n-1) p - (p - 1/2) sum_{m=1}^{[(n-1)/2]} p^m sum_{l=0}^{m-1} (m-l)/(m+l) C(m+l, l) q^l.
double selection_bias_total_closed_form(int n, const DesignParams& params);
Rational selection_bias_total_closed_form_exact(int n, const DesignParams& params);

struct SelectionBiasReport {
  int n;
  DesignParams params;
  std::vector<double> per_step;  // guessing probability at steps 1..n
  double total;                  // sum of per_step
  double closed_form_total;      // independent closed-form evaluation
  double excess;                 // total - n/2
  double average_excess;         // excess / n
};

SelectionBiasReport selection_bias_report(int n, const DesignParams& params, const NumericMode& mode = {});

/// Limiting excess selection bias per trial, (r - 1) / (4r); 1/4 at p = 1.
/// Nearest double to the exact value when p is held exactly.
double asymptotic_excess(const DesignParams& params);
Rational asymptotic_excess_exact(const DesignParams& params);

/// z' Sigma z for a unit vector z. Throws std::invalid_argument on a
/// dimension mismatch or when | ||z|| - 1 | > 1e-10; z is never renormalized.
double accidental_bias(std::span<const double> z, const AssignmentCovariance& cov);

}  // namespace bcd
