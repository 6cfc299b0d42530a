#pragma once

#include <vector>

#include "bcd/design.hpp"
#include "bcd/first_visit.hpp"
#include "bcd/matrix.hpp"
#include "bcd/parallel.hpp"

namespace bcd {

enum class PmfSource { closed_form, recurrence };

/// Rows d(j, k) = P(D_j = k) for j = 0..max_step, with d(0, 0) = 1. This is
/// the imbalance-distribution provider consumed by the joint-assignment
/// formula.
template <class Scalar>
class BasicImbalanceTable {
 public:
  BasicImbalanceTable(const DesignParams& params, int max_step, PmfSource source = PmfSource::closed_form,
                      const NumericMode& mode = {});

  int max_step() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  Scalar d(int j, int k) const;

 private:
  std::vector<std::vector<Scalar>> rows_;  // rows_[j][(k + j) / 2]
};

using ImbalanceTable = BasicImbalanceTable<double>;
using ExactImbalanceTable = BasicImbalanceTable<Rational>;

extern template class BasicImbalanceTable<double>;
extern template class BasicImbalanceTable<Rational>;

/// P(T_m = 1 | D_n = k) = (1/2 - t(k)) f_hat(k, m-n-1) + t(k) for
/// 1 <= n < m, |k| <= n, n - k even. Any other argument is a conditioning
/// event of probability zero and yields 0.
template <class Scalar>
Scalar cond_assignment(int m, int n, int k, const TransitionRule& rule, const BasicFirstVisitTable<Scalar>& visits) {
  if (n < 1 || m <= n || std::abs(k) > n || (n - k) % 2 != 0) return Scalar(0);
  const Scalar t = rule.at<Scalar>(k);
  return (Scalar(1) / Scalar(2) - t) * visits.f_hat(k, m - n - 1) + t;
}

/// P(T_n = 1, T_m = 1) for 1 <= n < m:
///   sum_{k=-n+1}^{n-1} [(1/2 - t(k+1)) f_hat(k+1, m-n-1) + t(k+1)] d(n-1, k) t(k).
/// Summands whose k has the wrong parity vanish through d(n-1, k) = 0.
template <class Scalar>
Scalar joint_assignment(int n, int m, const TransitionRule& rule, const BasicImbalanceTable<Scalar>& imbalance,
                        const BasicFirstVisitTable<Scalar>& visits) {
  if (n < 1 || m <= n) throw std::invalid_argument("joint assignment needs 1 <= n < m");
  const Scalar half = Scalar(1) / Scalar(2);
  const int gap = m - n - 1;
  Scalar sum(0);
  for (int k = -(n - 1); k <= n - 1; k += 2) {
    const Scalar t_next = rule.at<Scalar>(k + 1);
    sum += ((half - t_next) * visits.f_hat(k + 1, gap) + t_next) * imbalance.d(n - 1, k) * rule.at<Scalar>(k);
  }
  return sum;
}

/// The same probability assembled through cond_assignment, one conditional
/// per reachable value of D_n.
template <class Scalar>
Scalar joint_assignment_by_conditioning(int n, int m, const TransitionRule& rule,
                                        const BasicImbalanceTable<Scalar>& imbalance,
                                        const BasicFirstVisitTable<Scalar>& visits) {
  Scalar sum(0);
  for (int k = -(n - 1); k <= n - 1; ++k) {
    const Scalar weight = imbalance.d(n - 1, k);
    if (weight == Scalar(0)) continue;
    sum += cond_assignment(m, n, k + 1, rule, visits) * weight * rule.at<Scalar>(k);
  }
  return sum;
}

double cond_assignment(int m, int n, int k, const DesignParams& params);
Rational cond_assignment_exact(int m, int n, int k, const DesignParams& params);
double joint_assignment(int n, int m, const DesignParams& params);
Rational joint_assignment_exact(int n, int m, const DesignParams& params);

/// Covariance matrix of the +/-1 assignments T_1..T_n: unit diagonal and
/// sigma_ij = 4 P(T_i = 1, T_j = 1) - 1 off it. Indices are 0-based.
class AssignmentCovariance {
 public:
  AssignmentCovariance(int n, DesignParams params, Matrix values, std::vector<Rational> exact = {});

  int n() const noexcept { return n_; }
  const DesignParams& params() const noexcept { return params_; }
  const Matrix& matrix() const noexcept { return values_; }
  double operator()(int i, int j) const { return values_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }

  bool has_exact() const noexcept { return !exact_.empty(); }
  Rational exact(int i, int j) const;

  bool symmetric(double tol = 0.0) const;
  bool unit_diagonal() const;
  bool entries_in_range() const;
  /// Every off-diagonal submatrix of the 2x2 partition has equal entries
  /// (a trailing partial block is compared on the entries it has). Exact
  /// comparison when rational entries are present.
  bool block_constant(double tol = 0.0) const;

 private:
  int n_;
  DesignParams params_;
  Matrix values_;
  std::vector<Rational> exact_;  // row-major, empty in float mode
};

/// Builds the n x n covariance matrix from the closed form. The first-visit
/// and imbalance tables are built up front and shared read-only by the
/// worker threads filling the upper triangle.
AssignmentCovariance sigma(int n, const DesignParams& params, const NumericMode& mode = {},
                           unsigned threads = 1);

}  // namespace bcd
