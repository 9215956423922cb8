#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "qcdsim/cmatrix.hpp"
#include "qcdsim/fock_oracle.hpp"
#include "qcdsim/model.hpp"

namespace qcdsim {

/// Constant coupling g0, nu = 0, pure dephasing gamma, bath occupation Na
/// equal to the initial thermal occupation, qubit prepared in |+>. The state
/// at time t is fixed by
///   alpha0 = -i (2 g0 / kappa)(1 - e^{-kappa t/2}),
///   w      = gamma t + 16 Delta (g0/kappa)^2 (kappa t - 3 + 4 e^{-kappa t/2} - e^{-kappa t}).
struct ScenarioPoint {
  double g0 = 1.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double Na = 0.0;
  double t = 0.0;
  Complex alpha0;
  double w = 0.0;

  double Delta() const { return Na + 0.5; }
};

/// Series in kappa t below 1 keeps w free of cancellation (and exact at kappa = 0).
ScenarioPoint scenario(double g0, double kappa, double gamma, double Na, double t);

/// Model configuration reproducing a scenario point (Gamma1 = 0, Gamma2 = gamma).
SystemConfig scenario_config(const ScenarioPoint& p);

/// C-Matrix of the scenario state:
///   chi_ee = 1/2 e^{-Delta|b|^2 + alpha0^* b - alpha0 b^*}, chi_gg its mirror,
///   chi_eg = 1/2 e^{-Delta|b + 2 alpha0|^2 - w}, chi_ge = 1/2 e^{-Delta|b - 2 alpha0|^2 - w}.
CMatrixField scenario_cmatrix(const ScenarioPoint& p);

/// <m| D(zeta) rho_th D(zeta)^dag |m> from the Fock matrices.
double displaced_thermal_population_matrix(int m, Complex zeta, double Na);

/// Same quantity from
///   P_m = N^m/(N+1)^{m+1} e^{-|zeta|^2/(N+1)} L_m(-|zeta|^2/(N(N+1))),
/// evaluated by a rescaled Laguerre recurrence that also covers N = 0.
double displaced_thermal_population(int m, Complex zeta, double Na);

/// All P_0..P_{m_max} in one sweep of the recurrence.
std::vector<double> displaced_thermal_populations(int m_max, Complex zeta, double Na);

/// q_m = 1/2 [P_m(2 alpha0) - p_m e^{-w}].
double q_m(int m, const ScenarioPoint& p);

/// ceil(8 |alpha0|^2 + 8 Na + 20).
int default_m_max(const ScenarioPoint& p);

/// B_N = 2 sum_{q_m < 0} |q_m| for m = 0..m_max (default_m_max when absent).
double witness_BN(const ScenarioPoint& p, std::optional<int> m_max = std::nullopt);

enum class Projection { plus, minus };

/// P_- = (1 - e^{-4 Delta |alpha0|^2 - w}) / 2 and P_+ = 1 - P_-.
double projection_probability(const ScenarioPoint& p, Projection sign);

/// Square trapezoid grid for the Wigner transform.
struct WignerQuadrature {
  double extent = 8.0;  ///< half-width of the beta square
  int points = 161;     ///< nodes per axis
};

/// Extent and spacing resolving a sum of Gaussians with widths between
/// delta_min and delta_max, centred within `shift` of the origin and
/// modulated by plane waves of wavenumber at most `shift`.
WignerQuadrature wigner_quadrature(double delta_min, double delta_max, double shift);

/// W(alpha) = pi^{-2} int d^2 beta chi(beta) e^{alpha beta^* - alpha^* beta}.
/// Throws std::invalid_argument if |chi| on the boundary exceeds 1e-10 (the
/// function does not decay inside the box) and std::runtime_error if the
/// imaginary residual exceeds 1e-8.
double wigner(const CharFn& chi, Complex alpha, const WignerQuadrature& quad);

/// Characteristic function of rho_+- = <+-|rho|+->/P_+- from a C-Matrix:
/// [chi_ee + chi_gg +- (chi_eg + chi_ge)] / (2 P_+-), with P_+- read off at beta = 0.
/// Throws std::domain_error when P_+- vanishes.
CharFn projected_charfn(const CMatrixField& field, Projection sign);

/// W(0) of rho_- by quadrature of the projected characteristic function.
double projected_wigner_origin(const ScenarioPoint& p);

/// W(0) of rho_- in closed form: (e^{-|alpha0|^2/Delta} - e^{-w}) / (2 pi Delta P_-).
double projected_wigner_origin_closed(const ScenarioPoint& p);

/// W = pi P_- max{0, -W(0)}, from the closed form. Throws std::logic_error if
/// the result exceeds 1.
double nonclassicality_W(const ScenarioPoint& p);

/// Same metric with W(0) from the quadrature route.
double nonclassicality_W_quadrature(const ScenarioPoint& p);

/// Laguerre polynomial L_m(x) by the three-term recurrence.
double laguerre(int m, double x);

// ---------------------------------------------------------------------------
// Oracle routes

/// Test state (|e> D(-alpha0)|m> - |g> D(alpha0)|m>)/sqrt(2) materialized on
/// the state's cutoff, and <psi_m| rho^{T_q} |psi_m>.
double q_m_oracle(int m, const JointFockState& state, Complex alpha0);

/// 2 sum of |negative q_m| over m = 0..m_max with explicit test states.
double witness_BN_oracle(const JointFockState& state, Complex alpha0, int m_max);

/// <-| rho |-> traced over the oscillator.
double projection_probability_oracle(const JointFockState& state, Projection sign);

/// pi P_- max{0, -W(0)} with W(0) = (2/pi) Tr[rho_- parity] / P_-.
double nonclassicality_W_oracle(const JointFockState& state);

// ---------------------------------------------------------------------------
// Parameter scans

struct ScanSpec {
  std::vector<double> Na;
  std::vector<double> g0t;
  double g0 = 1.0;
  double kappa = 0.01;  ///< absolute rate, same units as g0
  double gamma = 0.01;
  /// Fill the oracle negativity column for rows with Na <= this value.
  std::optional<double> oracle_max_Na;
};

struct ScanRow {
  double Na = 0.0;
  double g0t = 0.0;
  double alpha0_im = 0.0;
  double w = 0.0;
  double BN = 0.0;
  double W_metric = 0.0;
  double P_minus = 0.0;
  std::optional<double> negativity_oracle;
};

struct ScanTable {
  std::vector<ScanRow> rows;  ///< Na-major, g0t-minor, in input order
};

/// Every (Na, g0t) cell of the requested grid. Results are independent of `threads`.
ScanTable scan(const ScanSpec& spec, unsigned threads = 1);

/// Columns Na,g0t,alpha0_im,w,BN,W_metric,P_minus,negativity_oracle with 12
/// significant digits; the oracle column is blank where not computed.
void write_csv(std::ostream& out, const ScanTable& table);

}  // namespace qcdsim
