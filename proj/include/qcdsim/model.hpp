#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcdsim/numerics.hpp"

namespace qcdsim {

/// Time-dependent qubit-oscillator coupling g(t) together with the modulation
/// frequency nu of the interaction Hamiltonian
///   H(t) = g(t) sigma_3 (a e^{-i nu t} + a^dag e^{i nu t}).
/// Rates are expressed in units of a caller-chosen reference rate.
class CouplingProfile {
 public:
  enum class Kind { constant, piecewise, sampled };

  struct Segment {
    double t_start;
    double t_end;
    double amplitude;
  };

  struct Sample {
    double t;
    double amplitude;
  };

  /// g(t) = g0 for t >= 0.
  static CouplingProfile constant(double g0, double nu);
  /// Disjoint, sorted segments; g = 0 between and outside them.
  static CouplingProfile piecewise(std::vector<Segment> segments, double nu);
  /// Linear interpolation between strictly increasing stamps; g = 0 outside.
  static CouplingProfile sampled(std::vector<Sample> samples, double nu);

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }
  /// Constant amplitude; for other kinds the largest |g|.
  double g0() const;
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Sample>& samples() const { return samples_; }

  double amplitude(double t) const;

  /// Points in (0, t) where g(t) or its derivative may jump.
  std::vector<double> breakpoints(double t) const;

  /// int_0^t g(s) e^{c s} ds. Closed form for constant and piecewise
  /// profiles, adaptive quadrature for sampled profiles.
  Complex moment(double t, Complex c) const;

  /// int_0^t g(s) e^{i nu s} w(s) ds for a smooth weight w, integrated piece
  /// by piece between breakpoints.
  Complex weighted_moment(double t, const std::function<Complex(double)>& weight,
                          double abs_tol = 1e-13) const;

 private:
  CouplingProfile() = default;

  Kind kind_ = Kind::constant;
  double g0_ = 0.0;
  double nu_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<Sample> samples_;
};

enum class RateMode { standard, exchanged_qed };

std::string_view to_string(RateMode mode);
RateMode rate_mode_from_string(std::string_view name);

/// Bath couplings and thermal occupations entering the dissipators.
struct RateInputs {
  double kappa = 0.0;   ///< oscillator damping
  double gamma1 = 0.0;  ///< qubit relaxation Gamma_1
  double gamma2 = 0.0;  ///< extra qubit dephasing Gamma_2
  double Na = 0.0;      ///< oscillator bath occupation
  double Nq = 0.0;      ///< qubit bath occupation
  RateMode mode = RateMode::standard;
};

struct DerivedRates {
  double gamma = 0.0;    ///< total qubit dephasing rate
  double Gamma_c = 0.0;  ///< qubit cooling rate
  double Gamma_h = 0.0;  ///< qubit heating rate
  double Delta = 0.5;    ///< N_a + 1/2
  std::optional<double> gamma1_eff;  ///< exchanged-qed mode only
  std::optional<double> gamma2_eff;  ///< exchanged-qed mode only
};

/// Standard mode: gamma = G1 (Nq + 1/2) + G2, Gamma_c = G1 (Nq + 1),
/// Gamma_h = G1 Nq. Exchanged-qed mode (strongly driven cavity/circuit QED):
/// gamma1 = G1 (Nq + 1/2), gamma2 = (G1/2)(Nq + 1/2) + G2, gamma = gamma1 + gamma2,
/// Gamma_c = Gamma_h = gamma2. Throws std::invalid_argument on negative input.
DerivedRates derive_rates(const RateInputs& rates);

/// 1 / (e^x - 1) for x = omega / T > 0.
double bose_einstein(double omega_over_T);

/// Physical configuration: profile plus rates, with derived rates always
/// recomputed from the inputs.
class SystemConfig {
 public:
  SystemConfig(CouplingProfile profile, RateInputs rates);

  const CouplingProfile& profile() const { return profile_; }
  const RateInputs& rates() const { return rates_; }
  const DerivedRates& derived() const { return derived_; }

 private:
  CouplingProfile profile_;
  RateInputs rates_;
  DerivedRates derived_;
};

/// Equilibrium displacement of a driven, damped cavity mode,
///   alpha_0 = -Omega e^{i phi} / (delta - i kappa / 2).
/// Throws std::domain_error when delta = kappa = 0 and Omega > 0.
Complex cavity_equilibrium_displacement(double Omega, double phi, double delta,
                                        double kappa);

/// Drive phase phi that makes alpha_0 real and positive.
double cavity_phase_for_real_alpha0(double delta, double kappa);

}  // namespace qcdsim
