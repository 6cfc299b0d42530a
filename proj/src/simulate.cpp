#include "bcd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bcd/first_visit.hpp"

namespace bcd {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 33);
}

void require_steps(int n) {
  if (n < 1) throw std::invalid_argument("sequence length must be >= 1 (got " + std::to_string(n) + ")");
}

// Running mean / sum of squared deviations; merged with Chan's update.
struct Moments {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    const long total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / static_cast<double>(total);
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) /
                         static_cast<double>(total);
    count = total;
  }
};

template <class Scalar, class Statistic>
Scalar enumerate_paths(int n, const DesignParams& params, const Statistic& statistic) {
  require_steps(n);
  if (n > kMaxEnumerationSteps) {
    throw std::invalid_argument("enumeration is limited to n <= " + std::to_string(kMaxEnumerationSteps) +
                                " (got " + std::to_string(n) + ")");
  }
  const TransitionRule rule(params);
  const Scalar one(1);
  Scalar expectation(0);
  Scalar total_weight(0);
  TreatmentSequence seq;
  seq.assignments.resize(static_cast<std::size_t>(n));
  seq.imbalance.resize(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Scalar weight(1);
    int d = 0;
    for (int j = 0; j < n; ++j) {
      const bool arm_a = (mask >> j) & 1u;
      const Scalar t = rule.at<Scalar>(d);
      weight *= arm_a ? t : one - t;
      d += arm_a ? 1 : -1;
      seq.assignments[static_cast<std::size_t>(j)] = arm_a ? 1 : -1;
      seq.imbalance[static_cast<std::size_t>(j)] = d;
    }
    if (weight == Scalar(0)) continue;
    total_weight += weight;
    expectation += weight * statistic(seq);
  }
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (total_weight != 1) throw std::logic_error("path weights do not sum to one");
  } else {
    if (std::abs(total_weight - 1.0) > 1e-12) throw std::logic_error("path weights do not sum to one");
  }
  return expectation;
}

}  // namespace

TreatmentSequence TreatmentSequence::from_assignments(std::vector<int> assignments, std::uint64_t seed) {
  TreatmentSequence seq;
  seq.seed = seed;
  seq.imbalance.reserve(assignments.size());
  int d = 0;
  for (int t : assignments) {
    if (t != 1 && t != -1) throw std::invalid_argument("assignments must be +1 or -1");
    d += t;
    seq.imbalance.push_back(d);
  }
  seq.assignments = std::move(assignments);
  return seq;
}

SplitMix64 replicate_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL)));
}

TreatmentSequence generate_sequence(int n, const DesignParams& params, SplitMix64& rng) {
  require_steps(n);
  const TransitionRule rule(params);
  TreatmentSequence seq;
  seq.assignments.reserve(static_cast<std::size_t>(n));
  seq.imbalance.reserve(static_cast<std::size_t>(n));
  int d = 0;
  for (int j = 0; j < n; ++j) {
    const int t = rng.uniform() < rule(d) ? 1 : -1;
    d += t;
    seq.assignments.push_back(t);
    seq.imbalance.push_back(d);
  }
  return seq;
}

TreatmentSequence generate_sequence(int n, const DesignParams& params, std::uint64_t seed) {
  SplitMix64 rng = replicate_stream(seed, 0);
  TreatmentSequence seq = generate_sequence(n, params, rng);
  seq.seed = seed;
  return seq;
}

double enumerate_exact(int n, const DesignParams& params, const PathStatistic& statistic) {
  return enumerate_paths<double>(n, params, statistic);
}

Rational enumerate_exact_rational(int n, const DesignParams& params, const ExactPathStatistic& statistic) {
  return enumerate_paths<Rational>(n, params, statistic);
}

McEstimate mc_estimate(int n, const DesignParams& params, const PathStatistic& statistic, long replicates,
                       std::uint64_t seed, unsigned threads) {
  require_steps(n);
  if (replicates < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 replicates");
  constexpr long kChunk = 4096;
  const long chunks = (replicates + kChunk - 1) / kChunk;
  std::vector<Moments> partial(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const long begin = static_cast<long>(c) * kChunk;
    const long end = std::min(replicates, begin + kChunk);
    Moments& moments = partial[c];
    for (long i = begin; i < end; ++i) {
      SplitMix64 rng = replicate_stream(seed, static_cast<std::uint64_t>(i));
      moments.add(statistic(generate_sequence(n, params, rng)));
    }
  });
  Moments total;
  for (const Moments& m : partial) total.merge(m);
  const double variance = total.m2 / static_cast<double>(total.count - 1);
  return {total.mean, std::sqrt(variance / static_cast<double>(total.count)), total.count};
}

namespace statistics {

namespace {

void require_within(const TreatmentSequence& seq, int step) {
  if (step < 1 || step > seq.n()) throw std::out_of_range("statistic refers to step " + std::to_string(step));
}

}  // namespace

PathStatistic balanced(int step) {
  return [step](const TreatmentSequence& seq) {
    require_within(seq, step);
    return seq.imbalance_after(step) == 0 ? 1.0 : 0.0;
  };
}

PathStatistic imbalance_squared(int step) {
  return [step](const TreatmentSequence& seq) {
    require_within(seq, step);
    const double d = seq.imbalance_after(step);
    return d * d;
  };
}

PathStatistic product(int i, int j) {
  return [i, j](const TreatmentSequence& seq) {
    require_within(seq, i);
    require_within(seq, j);
    return static_cast<double>(seq.at(i) * seq.at(j));
  };
}

PathStatistic correct_guess(int j) {
  return [j](const TreatmentSequence& seq) {
    require_within(seq, j);
    const int before = seq.imbalance_after(j - 1);
    if (before == 0) return 0.5;
    const int guess = before > 0 ? -1 : 1;
    return seq.at(j) == guess ? 1.0 : 0.0;
  };
}

}  // namespace statistics

ScoreVector::ScoreVector(std::vector<double> scores, bool centered) : scores_(std::move(scores)), centered_(centered) {
  if (centered_) {
    const double sum = std::accumulate(scores_.begin(), scores_.end(), 0.0);
    if (std::abs(sum) > 1e-10) throw std::invalid_argument("centered scores must sum to zero");
  }
}

ScoreVector ScoreVector::centered_from(std::vector<double> scores) {
  if (scores.empty()) return ScoreVector(std::move(scores), true);
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  for (double& s : scores) s -= mean;
  return ScoreVector(std::move(scores), true);
}

ScoreVector ScoreVector::centered_ranks(std::span<const double> outcomes) {
  const std::size_t n = outcomes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return outcomes[a] < outcomes[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && outcomes[order[j + 1]] == outcomes[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mid_rank;
    i = j + 1;
  }
  return centered_from(std::move(ranks));
}

double rank_statistic(const TreatmentSequence& seq, const ScoreVector& scores) {
  if (scores.size() != seq.assignments.size()) throw std::invalid_argument("score and sequence lengths differ");
  double w = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) w += scores.values()[i] * seq.assignments[i];
  return w;
}

double rank_statistic_variance(const ScoreVector& scores, const AssignmentCovariance& cov) {
  if (scores.size() != static_cast<std::size_t>(cov.n())) {
    throw std::invalid_argument("score length does not match the covariance dimension");
  }
  return cov.matrix().quadratic_form(scores.values());
}

}  // namespace bcd
