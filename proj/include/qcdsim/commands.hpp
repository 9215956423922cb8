#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "qcdsim/run_config.hpp"

namespace qcdsim {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int numerical = 1;  ///< solver failure or oracle tolerance exceeded
inline constexpr int usage = 2;      ///< bad arguments, config or platform name
inline constexpr int truncation = 3; ///< Fock oracle ran out of cutoff
}  // namespace exit_code

/// Evaluation points for oracle comparisons: a golden-angle spiral filling
/// the disc |beta| <= radius.
std::vector<Complex> oracle_sample_points(int count, double radius = 3.0);

struct OracleComparison {
  double t = 0.0;
  int cutoff = 0;
  std::size_t points = 0;
  double max_dev[4] = {0.0, 0.0, 0.0, 0.0};  ///< ee, gg, eg, ge

  double worst() const;
};

/// Phase-space solution of `config` at time t against the Fock oracle at the
/// given points. Throws TruncationError when the oracle cutoff is too small.
OracleComparison compare_with_oracle(const RunConfig& config, double t,
                                     const std::vector<Complex>& points);

/// Each command writes its product to `out` (or to output.path when set) and
/// diagnostics to `err`, and returns an exit code.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err, unsigned threads);
int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err, unsigned threads);
int cmd_platform(std::string_view name, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_wigner(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qcdsim
