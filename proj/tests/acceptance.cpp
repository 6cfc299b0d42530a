// Acceptance checks, one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run only criterion N (exit status 1 on FAIL)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bcd/bias.hpp"
#include "bcd/covariance.hpp"
#include "bcd/first_visit.hpp"
#include "bcd/imbalance.hpp"
#include "bcd/simulate.hpp"
#include "bcd/spectrum.hpp"
#include "bcd/stationary.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace bcd;

namespace {

const std::vector<std::string> kGrid = {"0.5", "0.6", "2/3", "0.7", "0.8", "0.9", "1"};
const char* kTableText[] = {"0.6", "0.7", "0.8", "0.9"};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& what) {
    if (pass) detail << what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// |exact - printed| <= tol with the printed decimal read back exactly.
bool within_exactly(const Rational& exact, double printed, const char* tol) {
  char text[32];
  std::snprintf(text, sizeof text, "%.6f", printed);
  const Rational diff = exact - parse_rational(text);
  return abs(diff) <= parse_rational(tol);
}

void check_time(Outcome& o, Clock::time_point start, double limit) {
  const double used = seconds_since(start);
  if (used >= limit) o.fail("took " + std::to_string(used) + " s, limit " + std::to_string(limit) + " s");
  o.detail << "; time " << used << " s";
}

Outcome variance_table() {
  Outcome o;
  const auto start = Clock::now();
  int cells = 0;
  double worst = 0.0;
  std::string where;
  auto cell = [&](double computed, double printed, const std::string& label) {
    const double diff = std::abs(computed - printed);
    if (diff > worst) {
      worst = diff;
      where = label;
    }
    if (diff > 0.005) o.fail(label + ": computed " + std::to_string(computed) + ", printed " + std::to_string(printed));
    ++cells;
  };
  auto limit = [&](const Rational& exact, double printed, const std::string& label) {
    const double computed = to_double(exact);
    if (std::abs(computed - printed) > worst) {
      worst = std::abs(computed - printed);
      where = label;
    }
    if (!within_exactly(exact, printed, "0.005")) {
      o.fail(label + ": computed " + std::to_string(computed) + ", printed " + std::to_string(printed));
    }
    ++cells;
  };
  for (int c = 0; c < 4; ++c) {
    const DesignParams params = DesignParams::parse(kTableText[c]);
    for (std::size_t r = 0; r < reference::kVarianceEvenN.size(); ++r) {
      const int n = reference::kVarianceEvenN[r];
      cell(var_dn(n, params), reference::kVarianceEven[r][c], "n=" + std::to_string(n) + " p=" + kTableText[c]);
    }
    for (std::size_t r = 0; r < reference::kVarianceOddN.size(); ++r) {
      const int n = reference::kVarianceOddN[r];
      cell(var_dn(n, params), reference::kVarianceOdd[r][c], "n=" + std::to_string(n) + " p=" + kTableText[c]);
    }
    limit(asymptotic_var_exact(params, Parity::even), reference::kVarianceLimitEven[c], std::string("inf-even p=") + kTableText[c]);
    limit(asymptotic_var_exact(params, Parity::odd), reference::kVarianceLimitOdd[c], std::string("inf-odd p=") + kTableText[c]);
  }
  o.detail << (o.pass ? "" : "; ") << cells << " cells, max |diff| " << worst << " at " << where;
  check_time(o, start, 10.0);
  return o;
}

Outcome bias_table() {
  Outcome o;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int c = 0; c < 4; ++c) {
    const DesignParams params = DesignParams::parse(kTableText[c]);
    for (std::size_t r = 0; r < reference::kBiasN.size(); ++r) {
      const int n = reference::kBiasN[r];
      const double diff = std::abs(selection_bias_report(n, params).average_excess - reference::kBias[r][c]);
      worst = std::max(worst, diff);
      if (diff > 0.0005) o.fail("n=" + std::to_string(n) + " p=" + kTableText[c]);
    }
    const Rational exact = asymptotic_excess_exact(params);
    worst = std::max(worst, std::abs(to_double(exact) - reference::kBiasLimit[c]));
    if (!within_exactly(exact, reference::kBiasLimit[c], "0.0005")) o.fail(std::string("inf p=") + kTableText[c]);
  }
  o.detail << (o.pass ? "" : "; ") << "40 cells, max |diff| " << worst;
  check_time(o, start, 10.0);
  return o;
}

Outcome threshold_table() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<double> tols(reference::kThresholdTol.begin(), reference::kThresholdTol.end());
  int matched = 0;
  for (std::size_t row = 0; row < reference::kThresholdK.size(); ++row) {
    for (int c = 0; c < 4; ++c) {
      const auto found = steady_state_thresholds(reference::kThresholdK[row], DesignParams::parse(kTableText[c]), tols,
                                                 reference::kThresholdLimit);
      for (int t = 0; t < 4; ++t) {
        if (found[static_cast<std::size_t>(t)] == reference::threshold_cell(static_cast<int>(row), c, t)) {
          ++matched;
        } else {
          o.fail("k=" + std::to_string(reference::kThresholdK[row]) + " p=" + kTableText[c] +
                 " tol=" + std::to_string(tols[static_cast<std::size_t>(t)]));
        }
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << matched << "/80 cells";
  check_time(o, start, 60.0);
  return o;
}

Outcome two_p_eigenpair() {
  Outcome o;
  double worst_residual = 0.0;
  double worst_gap = 0.0;
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    for (int n = 2; n <= 50; ++n) {
      const AssignmentCovariance cov = sigma(n, params);
      const double residual = verify_2p_eigenpair(cov);
      worst_residual = std::max(worst_residual, residual);
      if (residual > 1e-10) o.fail("residual at n=" + std::to_string(n) + " p=" + text);
      double gap = 1e300;
      for (double lambda : eigen_spectrum(cov)) gap = std::min(gap, std::abs(lambda - 2.0 * params.p()));
      worst_gap = std::max(worst_gap, gap);
      if (gap > 1e-8) o.fail("2p missing from spectrum at n=" + std::to_string(n) + " p=" + text);
    }
  }
  o.detail << (o.pass ? "" : "; ") << "max residual " << worst_residual << ", max spectrum gap " << worst_gap;
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  double worst = 0.0;
  auto track = [&](double a, double b, const std::string& label) {
    const double diff = std::abs(a - b);
    worst = std::max(worst, diff);
    if (diff > 1e-12) o.fail(label);
  };
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    for (int n = 1; n <= 12; ++n) {
      const std::string at = " n=" + std::to_string(n) + " p=" + text;
      const ImbalancePMF closed = pmf_dn(n, params);
      const ImbalancePMF dp = dp_pmf_dn(n, params);
      const ImbalancePMF closed_exact = pmf_dn(n, params, NumericMode::rational());
      const ImbalancePMF dp_exact = dp_pmf_dn_exact(n, params);
      for (int k = -n; k <= n; k += 2) {
        const double walked = enumerate_exact(n, params, [n, k](const TreatmentSequence& s) {
          return s.imbalance_after(n) == k ? 1.0 : 0.0;
        });
        const Rational walked_exact = enumerate_exact_rational(n, params, [n, k](const TreatmentSequence& s) {
          return Rational(s.imbalance_after(n) == k ? 1 : 0);
        });
        track(closed.mass(k), dp.mass(k), "closed form vs recurrence" + at);
        track(closed.mass(k), walked, "closed form vs enumeration" + at);
        if (closed_exact.exact_mass(k) != dp_exact.exact_mass(k) || closed_exact.exact_mass(k) != walked_exact) {
          o.fail("rational disagreement" + at);
        }
      }
      const AssignmentCovariance cov = sigma(n, params);
      const std::vector<double> walked = oracle::enumerate_covariance(n, params.p());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          track(cov(i, j), walked[static_cast<std::size_t>(i * n + j)], "covariance vs enumeration" + at);
        }
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << "max |diff| " << worst;
  return o;
}

Outcome identity_suite() {
  Outcome o;
  const oracle::PascalTriangle c(260);
  long checked = 0;
  for (int n = 2; n <= 200; n += 2) {
    for (int l = 1; l < n / 2; ++l, ++checked) {
      if (!oracle::binomial_identity_k1(c, n, l)) o.fail("k=1 identity n=" + std::to_string(n) + " l=" + std::to_string(l));
    }
  }
  for (int n = 1; n <= 200; ++n) {
    for (int k = 2; k <= n; ++k) {
      if ((n + k) % 2 == 0) continue;
      for (int l = 1; l <= (n - k + 1) / 2; ++l, ++checked) {
        if (!oracle::binomial_identity_k2(c, n, k, l)) {
          o.fail("k>=2 identity n=" + std::to_string(n) + " k=" + std::to_string(k) + " l=" + std::to_string(l));
        }
      }
    }
  }
  double worst = 0.0;
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    const FirstVisitTable table(params, 2, 200);
    for (int n = 2; n <= 200; ++n) {
      const double diff = std::abs(table.f_hat(1, n - 1) - (params.p() + params.q() * table.f_hat(2, n - 2)));
      worst = std::max(worst, diff);
      if (diff > 1e-12) o.fail("first-visit identity n=" + std::to_string(n) + " p=" + text);
    }
  }
  o.detail << (o.pass ? "" : "; ") << checked << " integer identities, first-visit max |diff| " << worst;
  return o;
}

Outcome sigma_structure() {
  Outcome o;
  double min_eigen = 1e300;
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    for (int n = 1; n <= 64; ++n) {
      const std::string at = " n=" + std::to_string(n) + " p=" + text;
      const AssignmentCovariance cov = sigma(n, params, NumericMode::float64(), 4);
      if (!cov.symmetric()) o.fail("not symmetric" + at);
      if (!cov.unit_diagonal()) o.fail("diagonal" + at);
      for (double lambda : eigen_spectrum(cov)) min_eigen = std::min(min_eigen, lambda);
      if (min_eigen < -1e-8) o.fail("negative eigenvalue" + at);
      const AssignmentCovariance exact = sigma(n, params, NumericMode::rational(), 4);
      if (!exact.block_constant()) o.fail("blocks not constant" + at);
    }
  }
  o.detail << (o.pass ? "" : "; ") << "min eigenvalue " << min_eigen << ", blocks compared in rational arithmetic";
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  const auto start = Clock::now();
  constexpr long kReps = 1000000;
  double worst_z = 0.0;
  for (const char* text : {"0.6", "0.8"}) {
    const DesignParams params = DesignParams::parse(text);
    struct Case {
      const char* name;
      int n;
      PathStatistic statistic;
      double exact;
    };
    const std::vector<Case> cases = {
        {"P(D_20=0)", 20, statistics::balanced(20), pmf_dn(20, params).mass(0)},
        {"Var(D_10)", 10, statistics::imbalance_squared(10), var_dn(10, params)},
        {"sigma_37", 7, statistics::product(3, 7), sigma(7, params)(2, 6)},
        {"guess_25", 25, statistics::correct_guess(25), selection_bias_step(25, params)},
    };
    std::uint64_t seed = 20240;
    for (const Case& c : cases) {
      const McEstimate est = mc_estimate(c.n, params, c.statistic, kReps, ++seed);
      const double z = std::abs(est.point - c.exact) / est.std_error;
      worst_z = std::max(worst_z, z);
      if (!(z <= 4.0)) o.fail(std::string(c.name) + " p=" + text + " z=" + std::to_string(z));
    }
  }
  o.detail << (o.pass ? "" : "; ") << "max |z| " << worst_z;
  check_time(o, start, 120.0);
  return o;
}

Outcome selection_bias_routes() {
  Outcome o;
  double worst = 0.0;
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    double running = 0.0;
    for (int n = 1; n <= 300; ++n) {
      running += selection_bias_step(n, params);
      const double diff = std::abs(running - selection_bias_total_closed_form(n, params));
      worst = std::max(worst, diff);
      if (diff > 1e-10) o.fail("n=" + std::to_string(n) + " p=" + text);
    }
  }
  o.detail << (o.pass ? "" : "; ") << "max |diff| " << worst;
  return o;
}

Outcome substitute_rank_check() {
  Outcome o;
  o.detail << "published W_n=-31, sd=100.52 example NOT REPRODUCIBLE (score data not available); ";
  double worst = 0.0;
  const double a = std::sqrt(2.0) / 2.0;
  for (const auto& text : kGrid) {
    const DesignParams params = DesignParams::parse(text);
    for (int n = 2; n <= 50; ++n) {
      std::vector<double> z(static_cast<std::size_t>(n), 0.0);
      z[0] = a;
      z[1] = -a;
      const double form = accidental_bias(z, sigma(n, params));
      const double diff = std::abs(form - 2.0 * params.p());
      worst = std::max(worst, diff);
      if (diff > 1e-10) o.fail("a'Sigma a at n=" + std::to_string(n) + " p=" + text);
    }
  }
  o.detail << (o.pass ? "" : "; ") << "a'Sigma a = 2p max |diff| " << worst << "; Monte Carlo side covered by criterion 8";
  return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {"variance table", variance_table},
    {"selection-bias table", bias_table},
    {"steady-state threshold table", threshold_table},
    {"2p eigenpair", two_p_eigenpair},
    {"oracle equivalence", oracle_equivalence},
    {"binomial and first-visit identities", identity_suite},
    {"covariance structure", sigma_structure},
    {"Monte Carlo concordance", monte_carlo},
    {"selection-bias dual computation", selection_bias_routes},
    {"rank-test example substitute", substitute_rank_check},
};

bool report(std::size_t index) {
  Outcome o;
  try {
    o = kCriteria[index].second();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", index + 1, kCriteria[index].first,
              o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    const int n = std::atoi(argv[2]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "error: criterion must be 1..%zu\n", kCriteria.size());
      return 2;
    }
    return report(static_cast<std::size_t>(n - 1)) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) all = report(i) && all;
  return all ? 0 : 1;
}
