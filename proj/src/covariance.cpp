#include "bcd/covariance.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bcd/imbalance.hpp"

namespace bcd {

template <class Scalar>
BasicImbalanceTable<Scalar>::BasicImbalanceTable(const DesignParams& params, int max_step, PmfSource source,
                                                 const NumericMode& mode) {
  if (max_step < 0) throw std::invalid_argument("imbalance table needs max_step >= 0");
  rows_.resize(static_cast<std::size_t>(max_step + 1));
  rows_[0] = {Scalar(1)};
  for (int j = 1; j <= max_step; ++j) {
    auto& row = rows_[static_cast<std::size_t>(j)];
    row.resize(static_cast<std::size_t>(j + 1));
    if constexpr (std::is_same_v<Scalar, Rational>) {
      const ImbalancePMF pmf = source == PmfSource::closed_form ? pmf_dn(j, params, NumericMode::rational())
                                                                : dp_pmf_dn_exact(j, params);
      for (int k = -j; k <= j; k += 2) row[static_cast<std::size_t>((k + j) / 2)] = pmf.exact_mass(k);
    } else {
      const ImbalancePMF pmf = source == PmfSource::closed_form ? pmf_dn(j, params, mode) : dp_pmf_dn(j, params);
      for (int k = -j; k <= j; k += 2) row[static_cast<std::size_t>((k + j) / 2)] = pmf.mass(k);
    }
  }
}

template <class Scalar>
Scalar BasicImbalanceTable<Scalar>::d(int j, int k) const {
  if (j < 0 || j > max_step()) throw std::out_of_range("imbalance table has no row " + std::to_string(j));
  if (std::abs(k) > j || (j - k) % 2 != 0) return Scalar(0);
  return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>((k + j) / 2)];
}

template class BasicImbalanceTable<double>;
template class BasicImbalanceTable<Rational>;

double cond_assignment(int m, int n, int k, const DesignParams& params) {
  if (n < 1 || m <= n) return 0.0;
  const FirstVisitTable visits(params, std::abs(k), m - n - 1);
  return cond_assignment(m, n, k, TransitionRule(params), visits);
}

Rational cond_assignment_exact(int m, int n, int k, const DesignParams& params) {
  if (n < 1 || m <= n) return 0;
  const ExactFirstVisitTable visits(params, std::abs(k), m - n - 1);
  return cond_assignment(m, n, k, TransitionRule(params), visits);
}

double joint_assignment(int n, int m, const DesignParams& params) {
  if (n < 1 || m <= n) throw std::invalid_argument("joint assignment needs 1 <= n < m");
  const ImbalanceTable imbalance(params, n - 1);
  const FirstVisitTable visits(params, n, m - n - 1);
  return joint_assignment(n, m, TransitionRule(params), imbalance, visits);
}

Rational joint_assignment_exact(int n, int m, const DesignParams& params) {
  if (n < 1 || m <= n) throw std::invalid_argument("joint assignment needs 1 <= n < m");
  const ExactImbalanceTable imbalance(params, n - 1);
  const ExactFirstVisitTable visits(params, n, m - n - 1);
  return joint_assignment(n, m, TransitionRule(params), imbalance, visits);
}

AssignmentCovariance::AssignmentCovariance(int n, DesignParams params, Matrix values, std::vector<Rational> exact)
    : n_(n), params_(std::move(params)), values_(std::move(values)), exact_(std::move(exact)) {
  if (n < 1) throw std::invalid_argument("covariance dimension must be >= 1");
  if (values_.rows() != static_cast<std::size_t>(n) || values_.cols() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("covariance matrix must be n x n");
  }
  if (!exact_.empty() && exact_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("exact covariance entries must be n x n");
  }
}

Rational AssignmentCovariance::exact(int i, int j) const {
  if (exact_.empty()) throw std::logic_error("covariance was computed without exact entries");
  return exact_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
}

bool AssignmentCovariance::symmetric(double tol) const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (has_exact() && exact(i, j) != exact(j, i)) return false;
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    }
  }
  return true;
}

bool AssignmentCovariance::unit_diagonal() const {
  for (int i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 1.0) return false;
    if (has_exact() && exact(i, i) != 1) return false;
  }
  return true;
}

bool AssignmentCovariance::entries_in_range() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!(v >= -1.0 && v <= 1.0)) return false;
    }
  }
  return true;
}

bool AssignmentCovariance::block_constant(double tol) const {
  for (int bi = 0; bi < n_; bi += 2) {
    for (int bj = 0; bj < n_; bj += 2) {
      if (bi == bj) continue;
      const int i_end = std::min(bi + 2, n_);
      const int j_end = std::min(bj + 2, n_);
      for (int i = bi; i < i_end; ++i) {
        for (int j = bj; j < j_end; ++j) {
          if (has_exact()) {
            if (exact(i, j) != exact(bi, bj)) return false;
          } else if (std::abs((*this)(i, j) - (*this)(bi, bj)) > tol) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

namespace {

template <class Scalar>
std::vector<Scalar> upper_triangle(int n, const DesignParams& params, const NumericMode& mode, unsigned threads) {
  const TransitionRule rule(params);
  const BasicImbalanceTable<Scalar> imbalance(params, n - 1, PmfSource::closed_form, mode);
  const BasicFirstVisitTable<Scalar> visits(params, n, std::max(n - 2, 0), mode);
  std::vector<Scalar> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Scalar(0));
  // Row i (1-based) of the upper triangle.
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const int i = static_cast<int>(row) + 1;
    entries[row * static_cast<std::size_t>(n) + row] = Scalar(1);
    for (int j = i + 1; j <= n; ++j) {
      entries[row * static_cast<std::size_t>(n) + static_cast<std::size_t>(j - 1)] =
          Scalar(4) * joint_assignment(i, j, rule, imbalance, visits) - Scalar(1);
    }
  });
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      entries[static_cast<std::size_t>(i * n + j)] = entries[static_cast<std::size_t>(j * n + i)];
    }
  }
  return entries;
}

}  // namespace

AssignmentCovariance sigma(int n, const DesignParams& params, const NumericMode& mode, unsigned threads) {
  if (n < 1) throw std::invalid_argument("covariance dimension must be >= 1");
  Matrix values(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  if (mode.exact()) {
    mode.require_exact(params, n);
    std::vector<Rational> exact = upper_triangle<Rational>(n, params, mode, threads);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        values(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            to_double(exact[static_cast<std::size_t>(i * n + j)]);
      }
    }
    return AssignmentCovariance(n, params, std::move(values), std::move(exact));
  }
  const std::vector<double> entries = upper_triangle<double>(n, params, mode, threads);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      values(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = entries[static_cast<std::size_t>(i * n + j)];
    }
  }
  return AssignmentCovariance(n, params, std::move(values));
}

}  // namespace bcd
