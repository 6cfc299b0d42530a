#include "bcd/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcd/bias.hpp"
#include "bcd/covariance.hpp"
#include "bcd/imbalance.hpp"
#include "bcd/parallel.hpp"
#include "bcd/simulate.hpp"
#include "bcd/spectrum.hpp"
#include "bcd/stationary.hpp"

namespace bcd::cli {

namespace {

const std::vector<std::string> kTableP = {"0.6", "0.7", "0.8", "0.9"};
const std::vector<int> kThresholdK = {0, 1, 2, 25, 50};
const std::vector<std::string> kThresholdTol = {"0.1", "0.05", "0.01", "0.001"};
const std::vector<int> kVarianceN = {10, 20, 50, 100, 200, 5, 15, 25, 75};
const std::vector<int> kBiasN = {5, 10, 15, 20, 25, 50, 75, 100, 200};

DesignParams design(const std::string& p) {
  try {
    return DesignParams::parse(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
}

void require_n(int n, int minimum = 1) {
  if (n < minimum) throw UsageError("--n must be >= " + std::to_string(minimum) + " (got " + std::to_string(n) + ")");
}

OutputRecord record(std::string command, const NumericMode& mode) {
  OutputRecord r;
  r.command = std::move(command);
  r.mode = to_string(mode.backend);
  return r;
}

std::optional<std::string> exact_text(const NumericMode& mode, const Rational& value) {
  if (!mode.exact()) return std::nullopt;
  return to_string(value);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string join(const std::vector<int>& items) {
  std::string out;
  for (int v : items) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return v;
}

Rational exact_average_excess(int n, const DesignParams& params) {
  Rational total = 0;
  for (int j = 1; j <= n; ++j) total += selection_bias_step_exact(j, params);
  return (total - Rational(n, 2)) / n;
}

}  // namespace

NumericMode parse_mode(const std::string& name) {
  if (name == "float") return NumericMode::float64();
  if (name == "rational") return NumericMode::rational();
  throw UsageError("--mode must be 'float' or 'rational' (got '" + name + "')");
}

std::vector<double> parse_scores(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> scores;
  if (first != std::string::npos && text[first] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("scores: malformed JSON: ") + e.what());
    }
    for (const auto& v : j) {
      if (!v.is_number()) throw UsageError("scores: JSON array must hold numbers only");
      scores.push_back(v.get<double>());
    }
    return scores;
  }
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r,");
    scores.push_back(parse_real(line.substr(b, e - b + 1), "scores line " + std::to_string(line_no)));
  }
  return scores;
}

std::vector<double> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read scores file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scores(buffer.str());
}

OutputRecord cmd_pmf(int n, const std::string& p, std::optional<int> k, const NumericMode& mode) {
  require_n(n);
  const DesignParams params = design(p);
  if (mode.exact()) mode.require_exact(params, n);
  OutputRecord r = record("pmf", mode);
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  if (k) r.inputs.emplace_back("k", std::to_string(*k));
  r.key_names = {"k"};
  r.value_name = "probability";
  if (mode.exact()) r.text_names = {"exact"};
  if (k) {
    if (mode.exact()) {
      const Rational v = pmf_value_exact(n, *k, params);
      r.add({std::to_string(*k)}, to_double(v), {to_string(v)});
    } else {
      r.add({std::to_string(*k)}, pmf_value(n, *k, params, mode));
    }
    return r;
  }
  const ImbalancePMF pmf = pmf_dn(n, params, mode);
  for (int kk : pmf.support()) {
    if (mode.exact()) {
      r.add({std::to_string(kk)}, pmf.mass(kk), {to_string(pmf.exact_mass(kk))});
    } else {
      r.add({std::to_string(kk)}, pmf.mass(kk));
    }
  }
  return r;
}

OutputRecord cmd_var(int n, const std::string& p, const NumericMode& mode) {
  require_n(n);
  const DesignParams params = design(p);
  OutputRecord r = record("var", mode);
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  r.key_names = {"n"};
  r.value_name = "variance";
  if (mode.exact()) {
    mode.require_exact(params, n);
    r.text_names = {"exact"};
    const Rational v = var_dn_exact(n, params);
    r.add({std::to_string(n)}, to_double(v), {to_string(v)});
  } else {
    r.add({std::to_string(n)}, var_dn(n, params, mode));
  }
  return r;
}

OutputRecord cmd_stationary(const std::string& p, int k_max) {
  if (k_max < 0) throw UsageError("--k must be >= 0");
  const DesignParams params = design(p);
  const StationaryDist dist = stationary_pmf(params);
  OutputRecord r = record("stationary", NumericMode::float64());
  r.inputs = {{"p", p}, {"k", std::to_string(k_max)}};
  r.key_names = {"quantity"};
  for (int j = 0; j <= k_max; ++j) r.add({"pi_" + std::to_string(j)}, dist.pi(j));
  r.add({"balance_limit_even"}, dist.balance_limit_even());
  r.add({"balance_limit_odd"}, dist.balance_limit_odd());
  r.add({"asymptotic_var_even"}, asymptotic_var(params, Parity::even));
  r.add({"asymptotic_var_odd"}, asymptotic_var(params, Parity::odd));
  return r;
}

OutputRecord cmd_table1(const std::vector<std::string>& ps, const std::vector<int>& ks,
                        const std::vector<std::string>& tols, int n_max, const NumericMode& mode,
                        unsigned threads) {
  std::vector<DesignParams> params;
  for (const auto& p : ps) {
    params.push_back(design(p));
    if (params.back().complete_randomization()) throw UsageError("--p: p = 1/2 has no stationary distribution");
  }
  std::vector<double> tol_values;
  for (const auto& t : tols) {
    tol_values.push_back(parse_real(t, "--tol"));
    if (tol_values.back() <= 0.0) throw UsageError("--tol values must be positive");
  }
  for (int k : ks) {
    if (k < 0) throw UsageError("--k values must be >= 0");
    if (n_max < k) throw UsageError("--n-max must be >= every k");
  }
  if (mode.exact()) {
    for (const auto& pp : params) mode.require_exact(pp, n_max);
  }

  const std::size_t cells = ks.size() * ps.size();
  std::vector<std::vector<std::optional<int>>> results(cells);
  parallel_for(cells, threads, [&](std::size_t c) {
    const int k = ks[c / ps.size()];
    results[c] = steady_state_thresholds(k, params[c % ps.size()], tol_values, n_max, mode);
  });

  OutputRecord r = record("table1", mode);
  r.inputs = {{"p", join(ps)}, {"k", join(ks)}, {"tol", join(tols)}, {"n_max", std::to_string(n_max)}};
  r.key_names = {"k", "p", "tol"};
  r.value_name = "threshold";
  r.text_names = {"printed"};
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t t = 0; t < tols.size(); ++t) {
      const auto& v = results[c][t];
      const std::vector<std::string> keys = {std::to_string(ks[c / ps.size()]), ps[c % ps.size()], tols[t]};
      if (v) {
        r.add(keys, static_cast<double>(*v), {std::to_string(*v)});
      } else {
        r.add(keys, std::nullopt, {">" + std::to_string(n_max)});
      }
    }
  }
  return r;
}

OutputRecord cmd_table2(const std::vector<int>& ns, const std::vector<std::string>& ps, const NumericMode& mode,
                        unsigned threads) {
  std::vector<DesignParams> params;
  for (const auto& p : ps) params.push_back(design(p));
  for (int n : ns) {
    require_n(n);
    if (mode.exact()) {
      for (const auto& pp : params) mode.require_exact(pp, n);
    }
  }

  struct Cell {
    double value = 0.0;
    std::optional<std::string> exact;
  };
  const std::size_t cells = ns.size() * ps.size();
  std::vector<Cell> results(cells);
  parallel_for(cells, threads, [&](std::size_t c) {
    const int n = ns[c / ps.size()];
    const DesignParams& pp = params[c % ps.size()];
    if (mode.exact()) {
      const Rational v = var_dn_exact(n, pp);
      results[c] = {to_double(v), to_string(v)};
    } else {
      results[c] = {var_dn(n, pp, mode), std::nullopt};
    }
  });

  OutputRecord r = record("table2", mode);
  r.inputs = {{"n", join(ns)}, {"p", join(ps)}};
  r.key_names = {"n", "p"};
  r.value_name = "variance";
  r.text_names = {"rounded"};
  if (mode.exact()) r.text_names.push_back("exact");

  const auto emit_limit = [&](Parity parity) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string label = parity == Parity::even ? "inf-even" : "inf-odd";
      if (params[i].complete_randomization()) {
        r.add({label, ps[i]}, std::nullopt, {"inf"});
        continue;
      }
      const double v = asymptotic_var(params[i], parity);
      r.add({label, ps[i]}, v, {format_fixed(v, 2)});
    }
  };
  for (Parity parity : {Parity::even, Parity::odd}) {
    bool any = false;
    for (std::size_t row = 0; row < ns.size(); ++row) {
      if (parity_of(ns[row]) != parity) continue;
      any = true;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Cell& cell = results[row * ps.size() + i];
        r.add({std::to_string(ns[row]), ps[i]}, cell.value, {format_fixed(cell.value, 2), cell.exact});
      }
    }
    if (any) emit_limit(parity);
  }
  return r;
}

OutputRecord cmd_table3(const std::vector<int>& ns, const std::vector<std::string>& ps, const NumericMode& mode,
                        unsigned threads) {
  std::vector<DesignParams> params;
  for (const auto& p : ps) params.push_back(design(p));
  for (int n : ns) {
    require_n(n);
    if (mode.exact()) {
      for (const auto& pp : params) mode.require_exact(pp, n);
    }
  }

  struct Cell {
    double value = 0.0;
    std::optional<std::string> exact;
  };
  const std::size_t cells = ns.size() * ps.size();
  std::vector<Cell> results(cells);
  parallel_for(cells, threads, [&](std::size_t c) {
    const int n = ns[c / ps.size()];
    const DesignParams& pp = params[c % ps.size()];
    if (mode.exact()) {
      const Rational v = exact_average_excess(n, pp);
      results[c] = {to_double(v), to_string(v)};
    } else {
      results[c] = {selection_bias_report(n, pp, mode).average_excess, std::nullopt};
    }
  });

  OutputRecord r = record("table3", mode);
  r.inputs = {{"n", join(ns)}, {"p", join(ps)}};
  r.key_names = {"n", "p"};
  r.value_name = "average_excess";
  r.text_names = {"rounded"};
  if (mode.exact()) r.text_names.push_back("exact");
  for (std::size_t row = 0; row < ns.size(); ++row) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const Cell& cell = results[row * ps.size() + i];
      r.add({std::to_string(ns[row]), ps[i]}, cell.value, {format_fixed(cell.value, 3), cell.exact});
    }
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double v = asymptotic_excess(params[i]);
    r.add({"inf", ps[i]}, v, {format_fixed(v, 3)});
  }
  return r;
}

OutputRecord cmd_sigma(int n, const std::string& p, bool eigen, bool check_conjecture, const NumericMode& mode,
                       unsigned threads) {
  require_n(n);
  const DesignParams params = design(p);
  if (mode.exact()) mode.require_exact(params, n);
  const AssignmentCovariance cov = sigma(n, params, mode, threads);
  OutputRecord r = record("sigma", mode);
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  if (eigen) r.inputs.emplace_back("eigen", "true");
  if (check_conjecture) r.inputs.emplace_back("check_conjecture", "true");
  r.key_names = {"row", "col"};
  r.value_name = "value";
  if (mode.exact()) r.text_names = {"exact"};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::vector<std::string> keys = {std::to_string(i + 1), std::to_string(j + 1)};
      if (mode.exact()) {
        r.add(keys, cov(i, j), {to_string(cov.exact(i, j))});
      } else {
        r.add(keys, cov(i, j));
      }
    }
  }
  if (eigen) {
    const auto values = eigen_spectrum(cov);
    for (std::size_t i = 0; i < values.size(); ++i) r.add({"eigenvalue", std::to_string(i + 1)}, values[i]);
    if (n >= 2) r.add({"eigenpair", "residual"}, verify_2p_eigenpair(cov));
  }
  if (check_conjecture) {
    const ConjectureReport report = check_max_eigenvalue_conjecture(cov);
    r.add({"conjecture", "two_p"}, report.two_p);
    r.add({"conjecture", "max_eigenvalue"}, report.max_eigenvalue);
    r.add({"conjecture", "difference"}, report.difference);
    r.add({"conjecture", "holds"}, report.holds() ? 1.0 : 0.0);
  }
  return r;
}

OutputRecord cmd_eigen(int n, const std::string& p, bool check_conjecture, unsigned threads) {
  require_n(n);
  const DesignParams params = design(p);
  const AssignmentCovariance cov = sigma(n, params, {}, threads);
  OutputRecord r = record("eigen", NumericMode::float64());
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  r.key_names = {"item"};
  r.value_name = "value";
  const auto values = eigen_spectrum(cov);
  for (std::size_t i = 0; i < values.size(); ++i) r.add({"eigenvalue_" + std::to_string(i + 1)}, values[i]);
  if (n >= 2) r.add({"eigenpair_residual"}, verify_2p_eigenpair(cov));
  if (check_conjecture) {
    const ConjectureReport report = check_max_eigenvalue_conjecture(cov);
    r.add({"two_p"}, report.two_p);
    r.add({"max_eigenvalue"}, report.max_eigenvalue);
    r.add({"max_minus_two_p"}, report.difference);
    r.add({"conjecture_holds"}, report.holds() ? 1.0 : 0.0);
  }
  return r;
}

OutputRecord cmd_selection_bias(int n, const std::string& p, const NumericMode& mode) {
  require_n(n);
  const DesignParams params = design(p);
  if (mode.exact()) mode.require_exact(params, n);
  const SelectionBiasReport report = selection_bias_report(n, params, mode);
  OutputRecord r = record("selection-bias", mode);
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  r.key_names = {"item"};
  r.value_name = "value";
  if (mode.exact()) r.text_names = {"exact"};
  Rational total = 0;
  for (int j = 1; j <= n; ++j) {
    const double v = report.per_step[static_cast<std::size_t>(j - 1)];
    if (mode.exact()) {
      const Rational e = selection_bias_step_exact(j, params);
      total += e;
      r.add({"step_" + std::to_string(j)}, v, {to_string(e)});
    } else {
      r.add({"step_" + std::to_string(j)}, v);
    }
  }
  r.add({"total"}, report.total, {exact_text(mode, total)});
  r.add({"closed_form_total"}, report.closed_form_total,
        {mode.exact() ? std::optional<std::string>(to_string(selection_bias_total_closed_form_exact(n, params)))
                      : std::nullopt});
  r.add({"excess"}, report.excess, {exact_text(mode, total - Rational(n, 2))});
  r.add({"average_excess"}, report.average_excess, {exact_text(mode, (total - Rational(n, 2)) / n)});
  r.add({"asymptotic_excess"}, asymptotic_excess(params));
  return r;
}

OutputRecord cmd_accidental_bias(int n, const std::string& p, const std::vector<double>& z, unsigned threads) {
  require_n(n);
  if (z.size() != static_cast<std::size_t>(n)) {
    throw UsageError("covariate has " + std::to_string(z.size()) + " entries but --n is " + std::to_string(n));
  }
  const DesignParams params = design(p);
  const AssignmentCovariance cov = sigma(n, params, {}, threads);
  OutputRecord r = record("accidental-bias", NumericMode::float64());
  r.inputs = {{"n", std::to_string(n)}, {"p", p}};
  r.key_names = {"item"};
  r.value_name = "value";
  r.add({"accidental_bias"}, accidental_bias(z, cov));
  const auto values = eigen_spectrum(cov);
  r.add({"min_eigenvalue"}, values.back());
  r.add({"max_eigenvalue"}, values.front());
  return r;
}

OutputRecord cmd_ranktest(const RankTestRequest& request) {
  if (request.scores.empty()) throw UsageError("ranktest needs scores (--scores FILE or --values LIST)");
  const int n = static_cast<int>(request.scores.size());
  if (request.n && *request.n != n) {
    throw UsageError("score length " + std::to_string(n) + " does not match --n " + std::to_string(*request.n));
  }
  if (!request.assignments.empty() && request.assignments.size() != request.scores.size()) {
    throw UsageError("assignment length does not match the score length");
  }
  if (!request.assignments.empty() && request.observed_w) throw UsageError("give either --w or --assignments");
  const DesignParams params = design(request.p);
  const ScoreVector scores(request.scores);
  const AssignmentCovariance cov = sigma(n, params, {}, request.threads);
  const double variance = rank_statistic_variance(scores, cov);

  OutputRecord r = record("ranktest", NumericMode::float64());
  r.inputs = {{"n", std::to_string(n)}, {"p", request.p}};
  r.key_names = {"item"};
  r.value_name = "value";
  r.add({"variance"}, variance);
  r.add({"sd"}, std::sqrt(std::max(variance, 0.0)));

  std::optional<double> observed = request.observed_w;
  if (!request.assignments.empty()) {
    try {
      observed = rank_statistic(TreatmentSequence::from_assignments(request.assignments), scores);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--assignments: ") + e.what());
    }
  }
  if (observed) r.add({"observed_w"}, *observed);

  if (request.simulate) {
    r.inputs.emplace_back("reps", std::to_string(request.reps));
    r.inputs.emplace_back("seed", std::to_string(request.seed));
    const McEstimate second = mc_estimate(
        n, params,
        [&scores](const TreatmentSequence& s) {
          const double w = rank_statistic(s, scores);
          return w * w;
        },
        request.reps, request.seed, request.threads);
    r.add({"mc_variance"}, second.point);
    r.add({"mc_variance_se"}, second.std_error);
    r.add({"mc_sd"}, std::sqrt(second.point));
    if (observed) {
      // Two-sided: simulated |W| at least as extreme as the observed one.
      const double cut = std::abs(*observed) - 1e-12;
      const McEstimate tail = mc_estimate(
          n, params,
          [&scores, cut](const TreatmentSequence& s) { return std::abs(rank_statistic(s, scores)) >= cut ? 1.0 : 0.0; },
          request.reps, request.seed, request.threads);
      r.add({"mc_p_value"}, tail.point);
      r.add({"mc_p_value_se"}, tail.std_error);
    }
  }
  return r;
}

OutputRecord cmd_simulate(int n, const std::string& p, long reps, std::uint64_t seed, const std::string& statistic,
                          const NumericMode& mode, unsigned threads) {
  require_n(n);
  const DesignParams params = design(p);
  if (mode.exact()) mode.require_exact(params, n);
  if (reps < 1000) throw UsageError("--reps must be >= 1000");

  PathStatistic stat;
  double exact = 0.0;
  std::optional<std::string> exact_fraction;
  static const std::regex cov_pattern(R"(cov\((\d+),(\d+)\))");
  std::smatch match;
  if (statistic == "balance") {
    stat = statistics::balanced(n);
    if (mode.exact()) {
      const Rational v = pmf_value_exact(n, 0, params);
      exact = to_double(v);
      exact_fraction = to_string(v);
    } else {
      exact = pmf_value(n, 0, params, mode);
    }
  } else if (statistic == "variance") {
    stat = statistics::imbalance_squared(n);
    if (mode.exact()) {
      const Rational v = var_dn_exact(n, params);
      exact = to_double(v);
      exact_fraction = to_string(v);
    } else {
      exact = var_dn(n, params, mode);
    }
  } else if (statistic == "selection-bias") {
    stat = statistics::correct_guess(n);
    if (mode.exact()) {
      const Rational v = selection_bias_step_exact(n, params);
      exact = to_double(v);
      exact_fraction = to_string(v);
    } else {
      exact = selection_bias_step(n, params, mode);
    }
  } else if (std::regex_match(statistic, match, cov_pattern)) {
    int i = std::stoi(match[1].str());
    int j = std::stoi(match[2].str());
    if (i < 1 || j < 1 || i > n || j > n) throw UsageError("cov(i,j) needs 1 <= i, j <= n");
    stat = statistics::product(i, j);
    if (i > j) std::swap(i, j);
    if (i == j) {
      exact = 1.0;
      exact_fraction = mode.exact() ? std::optional<std::string>("1") : std::nullopt;
    } else if (mode.exact()) {
      const Rational v = 4 * joint_assignment_exact(i, j, params) - 1;
      exact = to_double(v);
      exact_fraction = to_string(v);
    } else {
      exact = 4.0 * joint_assignment(i, j, params) - 1.0;
    }
  } else {
    throw UsageError("unknown statistic '" + statistic + "' (balance, variance, selection-bias, cov(i,j))");
  }

  const McEstimate est = mc_estimate(n, params, stat, reps, seed, threads);
  OutputRecord r = record("simulate", mode);
  r.inputs = {{"n", std::to_string(n)},         {"p", p},
              {"statistic", statistic},         {"reps", std::to_string(reps)},
              {"seed", std::to_string(seed)}};
  r.key_names = {"item"};
  r.value_name = "value";
  r.text_names = {"exact"};
  r.add({"estimate"}, est.point);
  r.add({"std_error"}, est.std_error);
  r.add({"replicates"}, static_cast<double>(est.replicates));
  r.add({"exact"}, exact, {exact_fraction});
  r.add({"z_score"}, est.std_error > 0.0 ? (est.point - exact) / est.std_error : 0.0);
  return r;
}

namespace {

struct Common {
  std::string format = "csv";
  std::string mode = "float";
  unsigned threads = default_threads();
  std::string out;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--mode", common.mode, "Arithmetic backend")->check(CLI::IsMember({"float", "rational"}));
  sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", common.out, "Write output to FILE");
}

void emit(const OutputRecord& r, const Common& common, std::ostream& out) {
  std::ofstream file;
  std::ostream* target = &out;
  if (!common.out.empty()) {
    file.open(common.out);
    if (!file) throw UsageError("cannot write '" + common.out + "'");
    target = &file;
  }
  if (common.format == "json") {
    *target << to_json(r) << '\n';
  } else {
    write_csv(*target, r);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact properties of Efron's biased coin design BCD(p)", "bcd"};
  app.require_subcommand(1);

  Common common;
  int n = 0;
  std::string p;
  std::optional<int> k;
  std::optional<int> expected_n;
  long reps = 100000;
  std::uint64_t seed = 1;
  std::vector<std::string> ps;
  std::vector<int> ns;
  std::vector<int> ks;
  std::vector<std::string> tols;
  int n_max = 500;
  bool eigen = false;
  bool conjecture = false;
  std::string scores_file;
  std::vector<double> values;
  std::optional<double> observed_w;
  std::vector<int> assignments;
  bool simulate = false;
  std::string statistic;
  int k_max = 10;

  std::function<OutputRecord()> action;

  const auto add_n = [&](CLI::App* sub) { return sub->add_option("--n", n, "Number of assignments")->required(); };
  const auto add_p = [&](CLI::App* sub) { return sub->add_option("--p", p, "Coin bias, decimal or fraction")->required(); };

  auto* pmf = app.add_subcommand("pmf", "Distribution of the imbalance D_n");
  add_n(pmf);
  add_p(pmf);
  pmf->add_option("--k", k, "Single imbalance value");
  pmf->callback([&] { action = [&] { return cmd_pmf(n, p, k, parse_mode(common.mode)); }; });

  auto* var = app.add_subcommand("var", "Variance of D_n");
  add_n(var);
  add_p(var);
  var->callback([&] { action = [&] { return cmd_var(n, p, parse_mode(common.mode)); }; });

  auto* stationary = app.add_subcommand("stationary", "Stationary law of |D_n| and limiting variances");
  add_p(stationary);
  stationary->add_option("--k", k_max, "Largest state listed");
  stationary->callback([&] { action = [&] { return cmd_stationary(p, k_max); }; });

  auto* threshold = app.add_subcommand("threshold", "Steady-state threshold grid");
  threshold->alias("table1");
  threshold->add_option("--p", ps, "p values")->delimiter(',');
  threshold->add_option("--k", ks, "Imbalance values")->delimiter(',');
  threshold->add_option("--tol", tols, "Relative tolerances")->delimiter(',');
  threshold->add_option("--n-max", n_max, "Largest n searched");
  threshold->callback([&] {
    action = [&] {
      return cmd_table1(ps.empty() ? kTableP : ps, ks.empty() ? kThresholdK : ks, tols.empty() ? kThresholdTol : tols,
                        n_max, parse_mode(common.mode), common.threads);
    };
  });

  auto* table2 = app.add_subcommand("table2", "Variance of the imbalance grid");
  table2->add_option("--n", ns, "n values")->delimiter(',');
  table2->add_option("--p", ps, "p values")->delimiter(',');
  table2->callback([&] {
    action = [&] {
      return cmd_table2(ns.empty() ? kVarianceN : ns, ps.empty() ? kTableP : ps, parse_mode(common.mode),
                        common.threads);
    };
  });

  auto* table3 = app.add_subcommand("table3", "Average excess selection bias grid");
  table3->add_option("--n", ns, "n values")->delimiter(',');
  table3->add_option("--p", ps, "p values")->delimiter(',');
  table3->callback([&] {
    action = [&] {
      return cmd_table3(ns.empty() ? kBiasN : ns, ps.empty() ? kTableP : ps, parse_mode(common.mode), common.threads);
    };
  });

  auto* sigma_cmd = app.add_subcommand("sigma", "Covariance matrix of the assignments");
  add_n(sigma_cmd);
  add_p(sigma_cmd);
  sigma_cmd->add_flag("--eigen", eigen, "Append the spectrum");
  sigma_cmd->add_flag("--check-conjecture", conjecture, "Compare the largest eigenvalue with 2p");
  sigma_cmd->callback([&] {
    action = [&] { return cmd_sigma(n, p, eigen, conjecture, parse_mode(common.mode), common.threads); };
  });

  auto* eigen_cmd = app.add_subcommand("eigen", "Spectrum of the covariance matrix");
  add_n(eigen_cmd);
  add_p(eigen_cmd);
  eigen_cmd->add_flag("--check-conjecture", conjecture, "Compare the largest eigenvalue with 2p");
  eigen_cmd->callback([&] {
    action = [&] {
      if (parse_mode(common.mode).exact()) throw UsageError("eigen supports --mode float only");
      return cmd_eigen(n, p, conjecture, common.threads);
    };
  });

  auto* bias = app.add_subcommand("selection-bias", "Expected correct guesses of the least-frequent-arm strategy");
  add_n(bias);
  add_p(bias);
  bias->callback([&] { action = [&] { return cmd_selection_bias(n, p, parse_mode(common.mode)); }; });

  const auto load_scores = [&]() -> std::vector<double> {
    if (!scores_file.empty() && !values.empty()) throw UsageError("give either --scores or --values");
    return scores_file.empty() ? values : read_scores(scores_file);
  };

  auto* accidental = app.add_subcommand("accidental-bias", "z' Sigma z for a unit covariate vector");
  add_n(accidental);
  add_p(accidental);
  accidental->add_option("--scores", scores_file, "Covariate file (CSV lines or JSON array)");
  accidental->add_option("--values", values, "Covariate values")->delimiter(',');
  accidental->callback([&] {
    action = [&] {
      if (parse_mode(common.mode).exact()) throw UsageError("accidental-bias supports --mode float only");
      return cmd_accidental_bias(n, p, load_scores(), common.threads);
    };
  });

  auto* ranktest = app.add_subcommand("ranktest", "Variance and Monte Carlo test of a linear rank statistic");
  ranktest->add_option("--n", expected_n, "Expected number of scores");
  add_p(ranktest);
  ranktest->add_option("--scores", scores_file, "Score file (CSV lines or JSON array)");
  ranktest->add_option("--values", values, "Score values")->delimiter(',');
  ranktest->add_option("--w", observed_w, "Observed statistic");
  ranktest->add_option("--assignments", assignments, "Observed assignments (+1/-1)")->delimiter(',');
  ranktest->add_flag("--simulate", simulate, "Monte Carlo reference distribution");
  ranktest->add_option("--reps", reps, "Monte Carlo replicates");
  ranktest->add_option("--seed", seed, "Random seed");
  ranktest->callback([&] {
    action = [&] {
      if (parse_mode(common.mode).exact()) throw UsageError("ranktest supports --mode float only");
      RankTestRequest request;
      request.n = expected_n;
      request.p = p;
      request.scores = load_scores();
      request.observed_w = observed_w;
      request.assignments = assignments;
      request.simulate = simulate;
      request.reps = reps;
      request.seed = seed;
      request.threads = common.threads;
      return cmd_ranktest(request);
    };
  });

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate next to the exact value");
  add_n(simulate_cmd);
  add_p(simulate_cmd);
  simulate_cmd->add_option("--statistic", statistic, "balance, variance, selection-bias or cov(i,j)")->required();
  simulate_cmd->add_option("--reps", reps, "Monte Carlo replicates");
  simulate_cmd->add_option("--seed", seed, "Random seed");
  simulate_cmd->callback([&] {
    action = [&] { return cmd_simulate(n, p, reps, seed, statistic, parse_mode(common.mode), common.threads); };
  });

  for (CLI::App* sub : app.get_subcommands({})) add_common(sub, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    emit(action(), common, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace bcd::cli
