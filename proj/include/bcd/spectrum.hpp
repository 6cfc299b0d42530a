#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bcd/covariance.hpp"
#include "bcd/matrix.hpp"

namespace bcd {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted in
/// descending order. Iterates until the off-diagonal Frobenius norm is at
/// most `tol`; throws ConvergenceError after max_rotations rotations
/// (0 selects 100 n^2).
std::vector<double> symmetric_eigenvalues(const Matrix& a, double tol = 1e-10, long max_rotations = 0);

std::vector<double> eigen_spectrum(const AssignmentCovariance& cov, double tol = 1e-10);

/// || Sigma v - 2p v || for v = (sqrt(2)/2, -sqrt(2)/2, 0, ..., 0).
double verify_2p_eigenpair(int n, const DesignParams& params);
double verify_2p_eigenpair(const AssignmentCovariance& cov);

/// Diagnostic for the open question of whether 2p is always the largest
/// eigenvalue. Reported, never enforced.
struct ConjectureReport {
  int n;
  double two_p;
  double max_eigenvalue;
  double difference;  // max_eigenvalue - 2p
  bool holds(double tol = 1e-8) const { return std::abs(difference) <= tol; }
};
ConjectureReport check_max_eigenvalue_conjecture(const AssignmentCovariance& cov, double tol = 1e-10);

}  // namespace bcd
