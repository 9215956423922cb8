#pragma once

#include "qcdsim/cmatrix.hpp"
#include "qcdsim/model.hpp"

namespace qcdsim {

/// alpha(t) = -i int_0^t g(s) e^{i nu s} ds, the amplitude of the
/// qubit-controlled displacement U(t) = D(sigma_3 alpha(t)). The global phase
/// from time ordering is not tracked; it cancels in every density-matrix
/// quantity.
Complex displacement_amplitude(const CouplingProfile& profile, double t);

/// Unitary evolution of rho_q (x) rho_a under U(t) = D(sigma_3 alpha):
///   chi_ee = rho_ee chi_a(beta) e^{alpha^* beta - alpha beta^*}
///   chi_gg = rho_gg chi_a(beta) e^{alpha beta^* - alpha^* beta}
///   chi_eg = rho_eg chi_a(beta + 2 alpha)
///   chi_ge = rho_ge chi_a(beta - 2 alpha)
/// Throws std::invalid_argument for an invalid qubit state, chi_a(0) != 1 or
/// t < 0.
CMatrixField evolve_closed(const CouplingProfile& profile, const QubitState& qubit,
                           CharFn oscillator, double t);

}  // namespace qcdsim
