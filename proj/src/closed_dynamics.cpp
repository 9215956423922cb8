#include "qcdsim/closed_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qcdsim {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::initial:
      return "initial";
    case Provenance::analytic:
      return "analytic";
    case Provenance::ode:
      return "ode";
    case Provenance::perturbative:
      return "perturbative";
    case Provenance::oracle:
      return "oracle";
  }
  return "unknown";
}

void validate_qubit_state(const QubitState& rho) {
  constexpr double tol = 1e-10;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("qubit state is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw std::invalid_argument("qubit state does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<QubitState> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("qubit state is not positive semidefinite");
  }
}

CharFn thermal_charfn(double Na) {
  if (!(Na >= 0.0)) throw std::invalid_argument("thermal occupation must be >= 0");
  const double delta = Na + 0.5;
  return [delta](Complex beta) { return Complex{std::exp(-delta * std::norm(beta)), 0.0}; };
}

CharFn coherent_charfn(Complex alpha) {
  return [alpha](Complex beta) {
    return std::exp(-0.5 * std::norm(beta) + beta * std::conj(alpha) - std::conj(beta) * alpha);
  };
}

CMatrixField product_field(const QubitState& q, CharFn osc) {
  CMatrixField f;
  const Complex ee = q(0, 0), gg = q(1, 1), eg = q(0, 1), ge = q(1, 0);
  f.ee = [ee, osc](Complex b) { return ee * osc(b); };
  f.gg = [gg, osc](Complex b) { return gg * osc(b); };
  f.eg = [eg, osc](Complex b) { return eg * osc(b); };
  f.ge = [ge, osc](Complex b) { return ge * osc(b); };
  f.provenance = Provenance::initial;
  return f;
}

CharFn reduced_oscillator(const CMatrixField& field) {
  return [field](Complex b) { return field.ee(b) + field.gg(b); };
}

Complex displacement_amplitude(const CouplingProfile& profile, double t) {
  if (t < 0.0) throw std::invalid_argument("displacement_amplitude: t must be >= 0");
  return -kI * profile.moment(t, kI * profile.nu());
}

CMatrixField evolve_closed(const CouplingProfile& profile, const QubitState& qubit,
                           CharFn osc, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve_closed: t must be >= 0");
  validate_qubit_state(qubit);
  if (std::abs(osc(Complex{0.0, 0.0}) - 1.0) > 1e-10) {
    throw std::invalid_argument("evolve_closed: oscillator characteristic function must be 1 at 0");
  }
  const Complex alpha = displacement_amplitude(profile, t);
  const Complex ee = qubit(0, 0), gg = qubit(1, 1), eg = qubit(0, 1), ge = qubit(1, 0);

  CMatrixField f;
  f.ee = [=](Complex b) {
    return ee * osc(b) * std::exp(std::conj(alpha) * b - alpha * std::conj(b));
  };
  f.gg = [=](Complex b) {
    return gg * osc(b) * std::exp(alpha * std::conj(b) - std::conj(alpha) * b);
  };
  f.eg = [=](Complex b) { return eg * osc(b + 2.0 * alpha); };
  f.ge = [=](Complex b) { return ge * osc(b - 2.0 * alpha); };
  f.provenance = Provenance::analytic;
  return f;
}

}  // namespace qcdsim
