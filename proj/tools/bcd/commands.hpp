#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcd/design.hpp"
#include "bcd/output_record.hpp"

namespace bcd::cli {

/// Bad flags or inputs; reported as exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

NumericMode parse_mode(const std::string& name);

/// Scores from a file holding either a JSON array of numbers or one number
/// per line.
std::vector<double> read_scores(const std::string& path);
std::vector<double> parse_scores(const std::string& text);

OutputRecord cmd_pmf(int n, const std::string& p, std::optional<int> k, const NumericMode& mode);
OutputRecord cmd_var(int n, const std::string& p, const NumericMode& mode);
OutputRecord cmd_stationary(const std::string& p, int k_max);

OutputRecord cmd_table1(const std::vector<std::string>& ps, const std::vector<int>& ks,
                        const std::vector<std::string>& tols, int n_max, const NumericMode& mode,
                        unsigned threads);
OutputRecord cmd_table2(const std::vector<int>& ns, const std::vector<std::string>& ps, const NumericMode& mode,
                        unsigned threads);
OutputRecord cmd_table3(const std::vector<int>& ns, const std::vector<std::string>& ps, const NumericMode& mode,
                        unsigned threads);

OutputRecord cmd_sigma(int n, const std::string& p, bool eigen, bool check_conjecture, const NumericMode& mode,
                       unsigned threads);
OutputRecord cmd_eigen(int n, const std::string& p, bool check_conjecture, unsigned threads);
OutputRecord cmd_selection_bias(int n, const std::string& p, const NumericMode& mode);
OutputRecord cmd_accidental_bias(int n, const std::string& p, const std::vector<double>& z, unsigned threads);

struct RankTestRequest {
  std::optional<int> n;
  std::string p;
  std::vector<double> scores;
  std::optional<double> observed_w;
  std::vector<int> assignments;
  bool simulate = false;
  long reps = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};
OutputRecord cmd_ranktest(const RankTestRequest& request);

OutputRecord cmd_simulate(int n, const std::string& p, long reps, std::uint64_t seed, const std::string& statistic,
                          const NumericMode& mode, unsigned threads);

/// Full command-line driver; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcd::cli
