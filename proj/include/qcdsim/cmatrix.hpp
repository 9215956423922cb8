#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "qcdsim/numerics.hpp"

namespace qcdsim {

/// Oscillator characteristic function beta -> Tr[rho D(beta)].
using CharFn = std::function<Complex(Complex)>;

/// 2x2 qubit density matrix in the ordered basis {e, g}.
using QubitState = Eigen::Matrix2cd;

/// The four qubit-basis components of Tr_osc[rho D(beta)] at one beta.
struct CMatrix {
  Complex ee;
  Complex gg;
  Complex eg;
  Complex ge;
};

enum class Provenance { initial, analytic, ode, perturbative, oracle };

std::string_view to_string(Provenance p);

/// Qubit-operator valued characteristic function: one complex function of
/// beta per qubit matrix element.
struct CMatrixField {
  CharFn ee;
  CharFn gg;
  CharFn eg;
  CharFn ge;
  Provenance provenance = Provenance::initial;

  CMatrix at(Complex beta) const { return {ee(beta), gg(beta), eg(beta), ge(beta)}; }
};

/// Throws std::invalid_argument unless rho is Hermitian, unit-trace and
/// positive semidefinite (tolerance 1e-10).
void validate_qubit_state(const QubitState& rho);

inline QubitState qubit_plus() {
  QubitState rho;
  rho << 0.5, 0.5, 0.5, 0.5;
  return rho;
}
inline QubitState qubit_excited() {
  QubitState rho = QubitState::Zero();
  rho(0, 0) = 1.0;
  return rho;
}
inline QubitState qubit_ground() {
  QubitState rho = QubitState::Zero();
  rho(1, 1) = 1.0;
  return rho;
}

/// exp(-(Na + 1/2)|beta|^2): thermal oscillator state.
CharFn thermal_charfn(double Na);

/// Coherent state |alpha>: exp(-|beta|^2/2 + beta alpha^* - beta^* alpha).
CharFn coherent_charfn(Complex alpha);

/// rho_q (x) rho_a.
CMatrixField product_field(const QubitState& qubit, CharFn oscillator);

/// chi_ee + chi_gg: characteristic function of the reduced oscillator state.
CharFn reduced_oscillator(const CMatrixField& field);

}  // namespace qcdsim
