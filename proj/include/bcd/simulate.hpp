#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "bcd/covariance.hpp"
#include "bcd/design.hpp"
#include "bcd/parallel.hpp"

namespace bcd {

/// Realized assignments T_1..T_n (+1 = arm A, -1 = arm B) with the running
/// imbalance D_1..D_n.
struct TreatmentSequence {
  std::vector<int> assignments;
  std::vector<int> imbalance;
  std::uint64_t seed = 0;

  int n() const noexcept { return static_cast<int>(assignments.size()); }
  /// T_j for 1-based j.
  int at(int j) const { return assignments[static_cast<std::size_t>(j - 1)]; }
  /// D_j for 0 <= j <= n, with D_0 = 0.
  int imbalance_after(int j) const { return j == 0 ? 0 : imbalance[static_cast<std::size_t>(j - 1)]; }

  static TreatmentSequence from_assignments(std::vector<int> assignments, std::uint64_t seed = 0);
};

/// SplitMix64. One stream per (seed, replicate index), so replicates are
/// reproducible without shared generator state.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

SplitMix64 replicate_stream(std::uint64_t seed, std::uint64_t index);

TreatmentSequence generate_sequence(int n, const DesignParams& params, std::uint64_t seed);
TreatmentSequence generate_sequence(int n, const DesignParams& params, SplitMix64& rng);

using PathStatistic = std::function<double(const TreatmentSequence&)>;
using ExactPathStatistic = std::function<Rational(const TreatmentSequence&)>;

inline constexpr int kMaxEnumerationSteps = 16;

/// Expectation of a path functional over all 2^n assignment paths, each
/// weighted by its product of transition probabilities. n <= 16.
double enumerate_exact(int n, const DesignParams& params, const PathStatistic& statistic);
Rational enumerate_exact_rational(int n, const DesignParams& params, const ExactPathStatistic& statistic);

struct McEstimate {
  double point = 0.0;
  double std_error = 0.0;
  long replicates = 0;
};

/// Monte Carlo mean and standard error of a path functional over
/// independent BCD sequences. Replicate i draws from replicate_stream(seed,
/// i) and partial sums are merged in a fixed order, so the estimate does not
/// depend on the thread count. Needs replicates >= 1000.
McEstimate mc_estimate(int n, const DesignParams& params, const PathStatistic& statistic, long replicates,
                       std::uint64_t seed, unsigned threads = default_threads());

namespace statistics {

/// 1{D_step = 0}
PathStatistic balanced(int step);
/// D_step^2
PathStatistic imbalance_squared(int step);
/// T_i T_j
PathStatistic product(int i, int j);
/// Success of the guess-the-least-frequent-arm strategy at step j. At
/// balance the fair guess is replaced by its conditional success
/// probability 1/2.
PathStatistic correct_guess(int j);

}  // namespace statistics

/// Scores a_1..a_n of a linear rank statistic.
class ScoreVector {
 public:
  /// With centered = true the scores must sum to zero within 1e-10.
  explicit ScoreVector(std::vector<double> scores, bool centered = false);

  /// Subtracts the mean.
  static ScoreVector centered_from(std::vector<double> scores);
  /// Mid-ranks of the outcomes (ties averaged), centered.
  static ScoreVector centered_ranks(std::span<const double> outcomes);

  std::span<const double> values() const noexcept { return scores_; }
  std::size_t size() const noexcept { return scores_.size(); }
  bool centered() const noexcept { return centered_; }

 private:
  std::vector<double> scores_;
  bool centered_;
};

/// W_n = a' T.
double rank_statistic(const TreatmentSequence& seq, const ScoreVector& scores);
/// Var(W_n) = a' Sigma a.
double rank_statistic_variance(const ScoreVector& scores, const AssignmentCovariance& cov);

}  // namespace bcd
