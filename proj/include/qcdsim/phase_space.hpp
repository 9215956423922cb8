#pragma once

#include <string_view>
#include <vector>

#include "qcdsim/cmatrix.hpp"
#include "qcdsim/grid.hpp"
#include "qcdsim/model.hpp"

namespace qcdsim {

// ---------------------------------------------------------------------------
// Kernels

/// Time integrals driving every analytic solution of the C-Matrix equations.
///   xi(t)     = 2i int_0^t g(s) e^{i nu s - kappa s/2} ds
///   mu(t)     = 2i / sinh(kappa t/2) int_0^t g(s) e^{i nu s} sinh(kappa s/2) ds
///   tau(t)    = gamma t + kappa Delta int_0^t |mu(s)|^2 ds
///   lambda(t) = i int_0^t g(s) e^{i nu s - kappa (t - s)/2} ds
struct KernelSet {
  double t = 0.0;
  Complex xi;
  Complex mu;
  double tau = 0.0;
  Complex lambda;
};

KernelSet kernels(const CouplingProfile& profile, const RateInputs& rates,
                  const DerivedRates& derived, double t);
KernelSet kernels(const SystemConfig& config, double t);

/// mu(t) alone; below kappa t = 1e-6 the sinh ratio is replaced by its
/// second-order series.
Complex mu_kernel(const CouplingProfile& profile, double kappa, double t);

/// e^{kappa t/2} lambda(t) = i int_0^t g(s) e^{(i nu + kappa/2) s} ds.
Complex scaled_lambda(const CouplingProfile& profile, double kappa, double t);

// ---------------------------------------------------------------------------
// Closed-form pieces

struct DiagPair {
  Complex ee;
  Complex gg;
};

struct OffDiagPair {
  Complex eg;
  Complex ge;
};

/// chi_eg(beta, t) = chi_eg(beta e^{-kappa t/2} - xi, 0)
///                   e^{-Delta (1 - e^{-kappa t}) |beta - mu|^2 - tau},
/// and the mirrored expression (xi, mu -> -xi, -mu) for chi_ge.
OffDiagPair offdiag_solution(const CharFn& chi_eg0, const CharFn& chi_ge0, const KernelSet& k,
                             double kappa, double Delta, Complex beta);

/// Solutions of the diagonal equations with the heating/cooling feed terms
/// removed (chi_gg keeps its Gamma_h loss, chi_ee its Gamma_c loss).
DiagPair diag_uncoupled(const CharFn& chi_ee0, const CharFn& chi_gg0, Complex lambda,
                        double kappa, double Delta, double Gamma_c, double Gamma_h,
                        Complex beta, double t);

// ---------------------------------------------------------------------------
// Diagonal solvers with heating and cooling

/// Coupled diagonal solution at one beta. The ansatz factors are integrated
/// as the unnormalized pair (Phi_gg chi_gg0, Phi_ee chi_ee0) evaluated at
/// beta e^{-kappa t/2}, so vanishing initial diagonals need no division.
/// Throws IntegrationError naming beta when the step size collapses.
DiagPair diag_ode_point(const CharFn& chi_ee0, const CharFn& chi_gg0, const SystemConfig& config,
                        double t, Complex beta);

struct SampledDiag {
  std::vector<Complex> beta;
  std::vector<DiagPair> values;
};

/// diag_ode_point over every grid point; results do not depend on `threads`.
SampledDiag diag_ode_solve(const CharFn& chi_ee0, const CharFn& chi_gg0,
                           const SystemConfig& config, double t, const GridSpec& grid,
                           unsigned threads = 1);

struct PerturbativeDiag {
  DiagPair value;
  bool validity_exceeded = false;  ///< Gamma_c t or Gamma_h t above kPerturbativeLimit
};

inline constexpr double kPerturbativeLimit = 0.2;

/// First-order (in Gamma_c t, Gamma_h t) solution of the coupled diagonals.
PerturbativeDiag diag_perturbative(const CharFn& chi_ee0, const CharFn& chi_gg0,
                                   const SystemConfig& config, double t, Complex beta);

/// Exact diagonals for Gamma_h = 0: Phi_ee = 1 and Phi_gg from a single
/// quadrature. Throws std::invalid_argument when Gamma_h != 0.
DiagPair diag_zero_heating(const CharFn& chi_ee0, const CharFn& chi_gg0,
                           const SystemConfig& config, double t, Complex beta);

// ---------------------------------------------------------------------------
// Front end

enum class SolverMethod { automatic, ode, perturbative };

std::string_view to_string(SolverMethod m);
SolverMethod solver_method_from_string(std::string_view name);

/// Checks trace and Hermiticity of an initial C-Matrix; throws
/// std::invalid_argument on failure.
void validate_initial(const CMatrixField& initial);

/// C-Matrix at time t as a lazily evaluated field. Off-diagonals are always
/// analytic. Diagonals: closed form when Gamma_h = 0 (automatic), per-beta ODE
/// otherwise, or the first-order expansion when requested.
CMatrixField solve_cmatrix(const SystemConfig& config, const CMatrixField& initial, double t,
                           SolverMethod method = SolverMethod::automatic);

/// Same, sampled on a grid.
SampledField solve_cmatrix(const SystemConfig& config, const CMatrixField& initial, double t,
                           const GridSpec& grid, SolverMethod method = SolverMethod::automatic,
                           unsigned threads = 1);

}  // namespace qcdsim
