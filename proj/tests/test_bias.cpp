#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bcd/bias.hpp"
#include "bcd/covariance.hpp"
#include "bcd/spectrum.hpp"
#include "reference_tables.hpp"

using namespace bcd;

namespace {

const std::array<std::string, 7> kGrid = {"1/2", "3/5", "2/3", "7/10", "4/5", "9/10", "1"};

std::vector<double> random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  std::vector<double> z(static_cast<std::size_t>(n));
  double norm = 0.0;
  for (double& v : z) {
    v = normal(rng);
    norm += v * v;
  }
  for (double& v : z) v /= std::sqrt(norm);
  return z;
}

}  // namespace

TEST_CASE("per-step guessing probability") {
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    CHECK(selection_bias_step_exact(1, params) == Rational(1, 2));
    for (int j = 2; j <= 40; j += 2) CHECK(selection_bias_step_exact(j, params) == params.exact_p());
  }
  CHECK(selection_bias_step_exact(3, DesignParams::parse("2/3")) == Rational(5, 9));
  CHECK(selection_bias_step(25, DesignParams(0.6)) == Catch::Approx(0.563891721634555).epsilon(1e-13));
  CHECK(selection_bias_step(25, DesignParams(0.8)) == Catch::Approx(0.5749916975381204).epsilon(1e-13));
  CHECK_THROWS_AS(selection_bias_step(0, DesignParams(0.7)), std::invalid_argument);
}

TEST_CASE("per-step values lie between 1/2 and p") {
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    const SelectionBiasReport report = selection_bias_report(150, params);
    CHECK(report.per_step.front() == 0.5);
    for (double v : report.per_step) {
      CHECK(v >= 0.5 - 1e-15);
      CHECK(v <= params.p() + 1e-15);
    }
  }
}

TEST_CASE("closed-form step matches the definition") {
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    for (int j = 1; j <= 200; ++j) {
      CAPTURE(text, j);
      CHECK(std::abs(selection_bias_step_closed_form(j, params) - selection_bias_step(j, params)) <= 1e-12);
    }
  }
}

TEST_CASE("total selection bias, two routes") {
  const DesignParams params = DesignParams::parse("2/3");
  CHECK(selection_bias_total_closed_form_exact(7, params) == Rational(6119, 1458));
  Rational per_step = 0;
  for (int j = 1; j <= 7; ++j) per_step += selection_bias_step_exact(j, params);
  CHECK(per_step == Rational(6119, 1458));

  for (const auto& text : kGrid) {
    const DesignParams p = DesignParams::parse(text);
    for (int n = 1; n <= 300; n += 7) {
      const SelectionBiasReport report = selection_bias_report(n, p);
      CAPTURE(text, n);
      CHECK(std::abs(report.total - report.closed_form_total) <= 1e-10);
      CHECK(report.excess >= -1e-12);
      CHECK(report.excess == Catch::Approx(report.total - n / 2.0));
      CHECK(report.average_excess == Catch::Approx(report.excess / n));
    }
    for (int n = 1; n <= 30; ++n) {
      Rational sum = 0;
      for (int j = 1; j <= n; ++j) sum += selection_bias_step_exact(j, p);
      CHECK(sum == selection_bias_total_closed_form_exact(n, p));
    }
  }
}

TEST_CASE("complete randomization has no excess") {
  for (int n : {1, 10, 101}) CHECK(selection_bias_report(n, DesignParams(0.5)).excess == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("average excess examples") {
  CHECK(std::abs(selection_bias_report(100, DesignParams(0.7)).average_excess - 0.141) <= 0.0005);
  CHECK(std::abs(selection_bias_report(5, DesignParams(0.6)).average_excess - 0.058) <= 0.0005);
}

TEST_CASE("asymptotic excess") {
  CHECK(asymptotic_excess(DesignParams(0.8)) == Catch::Approx(0.1875));
  CHECK(asymptotic_excess(DesignParams(0.5)) == 0.0);
  CHECK(asymptotic_excess(DesignParams(0.6)) == Catch::Approx(1.0 / 12.0));
  CHECK(asymptotic_excess(DesignParams(1.0)) == 0.25);
  CHECK(asymptotic_excess(DesignParams(0.9999999)) == Catch::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("average excess stays near its limit") {
  for (double p : reference::kTableP) {
    const DesignParams params(p);
    const double limit = asymptotic_excess(params);
    const SelectionBiasReport report = selection_bias_report(400, params);
    double total = 0.0;
    for (int n = 1; n <= 400; ++n) {
      total += report.per_step[static_cast<std::size_t>(n - 1)];
      const double average = (total - n / 2.0) / n;
      CAPTURE(p, n);
      if (n >= 5) CHECK(average <= limit + 0.02);
      if (n >= 50) CHECK(std::abs(average - limit) <= 0.005);
      if (n >= 114) CHECK(std::abs(average - limit) <= 0.002);
    }
  }
}

TEST_CASE("average excess is not monotone in n") {
  const DesignParams params(0.8);
  CHECK(selection_bias_report(10, params).average_excess > selection_bias_report(15, params).average_excess);
}

TEST_CASE("accidental bias") {
  const AssignmentCovariance cov = sigma(8, DesignParams(0.7));
  std::vector<double> e1(8, 0.0);
  e1[0] = 1.0;
  CHECK(accidental_bias(e1, cov) == 1.0);
  std::vector<double> v(8, 0.0);
  v[0] = std::sqrt(2.0) / 2.0;
  v[1] = -std::sqrt(2.0) / 2.0;
  CHECK(accidental_bias(v, cov) == Catch::Approx(1.4).epsilon(1e-12));

  std::vector<double> wrong(7, 0.0);
  wrong[0] = 1.0;
  CHECK_THROWS_AS(accidental_bias(wrong, cov), std::invalid_argument);
  std::vector<double> unnormalized(8, 0.0);
  unnormalized[0] = 1.0 + 1e-9;
  CHECK_THROWS_AS(accidental_bias(unnormalized, cov), std::invalid_argument);
}

TEST_CASE("accidental bias lies within the spectrum") {
  std::mt19937_64 rng(11);
  for (const auto& text : kGrid) {
    for (int n : {3, 8, 20}) {
      const AssignmentCovariance cov = sigma(n, DesignParams::parse(text));
      const auto eig = eigen_spectrum(cov);
      for (int trial = 0; trial < 100; ++trial) {
        const double value = accidental_bias(random_unit(rng, n), cov);
        CHECK(value <= eig.front() + 1e-8);
        CHECK(value >= eig.back() - 1e-8);
      }
    }
  }
}
