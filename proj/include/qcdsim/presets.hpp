#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qcdsim/model.hpp"

namespace qcdsim {

/// A hardware parameter as quoted for a platform, in its native unit.
struct RawParameter {
  std::string name;
  double value = 0.0;
  std::string unit;
  std::string note;
  std::string literal;  ///< the value as written in the data file
};

/// A dimensionless (or rate-valued) figure quoted for the platform, against
/// which the normalized configuration is checked.
struct PresetQuote {
  std::string quantity;
  double value = 0.0;
  std::string unit;       ///< reference label (omega, g) or an SI rate unit
  std::string note;
  bool discrepant = false;  ///< known not to follow from the other quoted values
  std::string literal;      ///< the value as written in the data file
};

struct PlatformPreset {
  std::string name;
  std::string description;
  std::string reference_label;  ///< "omega" or "g"
  double reference_rate = 1.0;  ///< reference rate in rad/s
  std::vector<RawParameter> raw;
  std::vector<PresetQuote> quotes;
  SystemConfig normalized;

  /// Raw parameter converted to SI; throws std::out_of_range if absent.
  double raw_si(std::string_view name) const;
  bool has_raw(std::string_view name) const;
};

inline constexpr double kPresetTolerance = 0.2;

std::vector<std::string> platform_names();

/// Throws std::invalid_argument for an unknown name.
PlatformPreset platform_preset(std::string_view name);

/// Parses the structured-text preset format (exposed for tests).
PlatformPreset parse_preset(std::string_view text);

/// Converts `value` in `unit` to SI: frequencies "2pi GHz|MHz|kHz|Hz" to
/// rad/s, rates "1/s|1/ms|1/us" to 1/s, "K|mK", "nm", "1/m", "mT",
/// "2pi MHz/mT" to rad/(s mT); "" is dimensionless.
double to_si(double value, std::string_view unit);

/// hbar omega / (k_B T) for omega in rad/s and T in kelvin.
double hbar_omega_over_kT(double omega, double temperature);

/// Named quantity of a normalized configuration: g_max, nu, kappa, Na, Nq,
/// kappa_Na, Gamma1, Gamma2, gamma, Gamma_c, Gamma_h, gamma1, gamma2.
double preset_quantity(const SystemConfig& config, std::string_view quantity);

struct QuoteCheck {
  PresetQuote quote;
  double computed = 0.0;       ///< in the quote's unit
  double rel_deviation = 0.0;  ///< |computed - quoted| / |quoted| (abs if quoted = 0)
  bool within_tolerance = false;
};

std::vector<QuoteCheck> check_quotes(const PlatformPreset& preset);

}  // namespace qcdsim
