#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcdsim/grid.hpp"
#include "qcdsim/model.hpp"
#include "qcdsim/observables.hpp"
#include "qcdsim/phase_space.hpp"

namespace qcdsim {

/// Malformed or inconsistent run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { plus_thermal, excited_thermal, ground_thermal, custom_cmatrix_file };
enum class OracleMode { off, check, full };
enum class WignerTarget { reduced, plus, minus };

std::string_view to_string(InitialKind k);
std::string_view to_string(OracleMode m);
OracleMode oracle_mode_from_string(std::string_view name);

/// A parsed run description. Text form: one "key = value" per line, '#'
/// starts a comment. Keys:
///   platform
///   profile.kind (constant|piecewise|sampled), profile.g0, profile.nu,
///   profile.segments ("start:end:amplitude, ..."), profile.samples ("t:g, ...")
///   rates.kappa, rates.gamma1, rates.gamma2, rates.Na, rates.Nq, rates.mode
///   initial.state (plus-thermal|excited-thermal|ground-thermal|custom-cmatrix-file),
///   initial.file, initial.Na
///   times.list ("t1, t2, ...") or times.start, times.stop, times.count
///   grid.pattern, grid.extent, grid.counts
///   solver.method (auto|ode|perturbative)
///   oracle.mode (off|check|full), oracle.points, oracle.cutoff, oracle.tolerance
///   output.path, output.format (table|csv)
///   scan.Na, scan.g0t (list or "start:stop:count"), scan.g0, scan.kappa,
///   scan.gamma, scan.oracle_max_Na
///   wigner.file, wigner.alpha ("re, im"), wigner.state (reduced|plus|minus)
struct RunConfig {
  std::optional<std::string> platform;
  /// Every key = value pair as written.
  std::map<std::string, std::string> overrides;
  std::map<std::string, int> lines;  ///< source line per key, for diagnostics
  std::string source = "config";     ///< file name or label used in diagnostics

  InitialKind initial = InitialKind::plus_thermal;
  std::string initial_file;
  std::optional<double> initial_Na;  ///< defaults to rates.Na

  std::vector<double> times{0.0};
  std::optional<GridSpec> grid;  ///< default_grid when absent
  SolverMethod method = SolverMethod::automatic;

  OracleMode oracle = OracleMode::off;
  int oracle_points = 5;
  std::optional<int> oracle_cutoff;
  double oracle_tolerance = 1e-6;

  std::string output_path;
  std::string output_format = "table";

  ScanSpec scan;

  std::string wigner_file;
  Complex wigner_alpha{0.0, 0.0};
  WignerTarget wigner_target = WignerTarget::reduced;

  /// Physical system: the platform preset (if any) with profile.* and rates.*
  /// keys applied on top. Throws ConfigError naming the key on invalid values.
  SystemConfig system() const;

  /// Occupation of the initial thermal oscillator state.
  double initial_occupation() const;
};

/// Throws ConfigError "<source>:<line>: ..." naming the offending key.
RunConfig parse_run_config(std::string_view text, std::string_view source = "config");
RunConfig load_run_config(const std::string& path);

/// "a, b, c" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_number_list(std::string_view text);

}  // namespace qcdsim
