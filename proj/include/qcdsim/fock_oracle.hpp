#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "qcdsim/cmatrix.hpp"
#include "qcdsim/model.hpp"

namespace qcdsim {

/// Truncated qubit (x) oscillator density matrix. Index q (cutoff + 1) + n,
/// with q = 0 for e and q = 1 for g and n the Fock level 0..cutoff.
struct JointFockState {
  int cutoff = 0;
  Eigen::MatrixXcd rho;

  int levels() const { return cutoff + 1; }
  /// <j| rho |k> as an oscillator matrix (j, k in {0 = e, 1 = g}).
  Eigen::MatrixXcd block(int j, int k) const;
  /// Population of the two highest Fock levels, summed over the qubit.
  double tail_estimate() const;
  bool truncation_breach() const { return tail_estimate() > kTruncationLimit; }

  static constexpr double kTruncationLimit = 1e-8;
};

/// Raised when a state no longer fits its Fock cutoff.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <m| D(beta) |n> for 0 <= m, n <= cutoff, from the associated-Laguerre
/// closed form of the untruncated operator.
Eigen::MatrixXcd displacement_matrix(Complex beta, int cutoff);

/// max_n |1 - sum_m |D_mn|^2|: how far a truncated operator is from unitary.
double column_norm_defect(const Eigen::MatrixXcd& op);

struct OscillatorState {
  Eigen::MatrixXcd rho;
  double tail_weight = 0.0;  ///< population discarded by the truncation
};

/// Thermal populations N^n / (N + 1)^{n+1}, renormalized on 0..cutoff.
OscillatorState thermal_state(double Na, int cutoff);

JointFockState product_state(const QubitState& qubit, const Eigen::MatrixXcd& oscillator);

/// Validity: Hermitian, unit trace within 1e-10, eigenvalues >= -1e-10.
/// Throws std::invalid_argument otherwise.
void validate_state(const JointFockState& state);

/// Integrates -i[H, rho] + L rho + Q rho from t0 to t1 with
///   H = g(t) sigma_3 (a e^{-i nu t} + a^dag e^{i nu t}),
///   L = kappa/2 (Na + 1) D[a] + kappa/2 Na D[a^dag],
///   Q = Gamma1/2 (Nq + 1) D[sigma-] + Gamma1/2 Nq D[sigma+] + Gamma2/4 D[sigma3]
///   (exchanged-qed: gamma2/2 (D[sigma+] + D[sigma-]) + gamma1/4 D[sigma3]),
/// where D[A] rho = 2 A rho A^dag - A^dag A rho - rho A^dag A.
/// Dormand-Prince stepping, relative tolerance 1e-10.
JointFockState integrate(const JointFockState& initial, const SystemConfig& config, double t0,
                         double t1);
inline JointFockState integrate(const JointFockState& initial, const SystemConfig& config,
                                double t) {
  return integrate(initial, config, 0.0, t);
}

/// Tr_osc[<j| rho |k> D(beta)] for the four qubit pairs.
CMatrix cmatrix_extract(const JointFockState& state, Complex beta);

/// Same, reusing a precomputed displacement matrix.
CMatrix cmatrix_extract(const JointFockState& state, const Eigen::MatrixXcd& displacement);

/// ||rho^{T_q}||_1 - 1 = 2 sum |negative eigenvalues| of the partial transpose.
double negativity(const JointFockState& state);

/// D(sigma_3 alpha) rho D(sigma_3 alpha)^dag.
JointFockState apply_controlled_displacement(const JointFockState& state, Complex alpha);

/// ceil(4 (Na + 1) + 4 |2 alpha_max|^2 + 20).
int initial_cutoff(double Na, double alpha_max);

struct OracleRun {
  JointFockState state;
  int attempts = 0;
};

/// Integrates qubit (x) thermal(Na) to time t, doubling the cutoff from
/// initial_cutoff(Na, alpha_max) until the top two levels hold less than
/// 1e-10. Throws TruncationError if max_cutoff is reached first.
OracleRun evolve_converged(const QubitState& qubit, double Na, const SystemConfig& config,
                           double t, double alpha_max, int max_cutoff = 1024);

/// Columnar text: "# cutoff = N", "# basis = ..." header, "row col re im" lines.
void write_state(std::ostream& out, const JointFockState& state);
JointFockState read_state(std::istream& in);

}  // namespace qcdsim
