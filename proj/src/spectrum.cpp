#include "bcd/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace bcd {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// Zeroes a(p, q) with a plane rotation; only the upper triangle is kept
// consistent since the matrix stays symmetric.
void rotate(Matrix& a, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (r == p || r == q) continue;
    const double arp = a(r, p);
    const double arq = a(r, q);
    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& input, double tol, long max_rotations) {
  if (input.rows() != input.cols()) throw std::invalid_argument("eigenvalues need a square matrix");
  const std::size_t n = input.rows();
  if (max_rotations <= 0) max_rotations = 100L * static_cast<long>(n * n);
  Matrix a = input;

  long rotations = 0;
  while (off_diagonal_norm(a) > tol) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        if (++rotations > max_rotations) {
          std::ostringstream os;
          os << "Jacobi iteration did not converge within " << max_rotations << " rotations (off-diagonal norm "
             << off_diagonal_norm(a) << ")";
          throw ConvergenceError(os.str());
        }
        rotate(a, p, q);
      }
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

std::vector<double> eigen_spectrum(const AssignmentCovariance& cov, double tol) {
  return symmetric_eigenvalues(cov.matrix(), tol);
}

double verify_2p_eigenpair(const AssignmentCovariance& cov) {
  if (cov.n() < 2) throw std::invalid_argument("the 2p eigenpair needs n >= 2");
  std::vector<double> v(static_cast<std::size_t>(cov.n()), 0.0);
  v[0] = std::sqrt(2.0) / 2.0;
  v[1] = -std::sqrt(2.0) / 2.0;
  const std::vector<double> sv = cov.matrix().multiply(v);
  const double two_p = 2.0 * cov.params().p();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = sv[i] - two_p * v[i];
    sum += r * r;
  }
  return std::sqrt(sum);
}

double verify_2p_eigenpair(int n, const DesignParams& params) { return verify_2p_eigenpair(sigma(n, params)); }

ConjectureReport check_max_eigenvalue_conjecture(const AssignmentCovariance& cov, double tol) {
  const std::vector<double> spectrum = eigen_spectrum(cov, tol);
  const double two_p = 2.0 * cov.params().p();
  return {cov.n(), two_p, spectrum.front(), spectrum.front() - two_p};
}

}  // namespace bcd
