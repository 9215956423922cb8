#include <cmath>

#include "doctest.h"

#include "qcdsim/closed_dynamics.hpp"
#include "qcdsim/fock_oracle.hpp"

using namespace qcdsim;

namespace {

const double pi = 3.141592653589793;

const Complex probes[] = {{0.0, 0.0}, {0.3, -0.4}, {-1.2, 0.8}, {0.9, 1.1}, {2.0, -0.1}};

}  // namespace

TEST_CASE("displacement amplitude") {
  CHECK(std::abs(displacement_amplitude(CouplingProfile::constant(0.0, 0.0), 3.0)) == 0.0);
  CHECK(std::abs(displacement_amplitude(CouplingProfile::constant(1.0, 0.0), 1.0) - Complex{0.0, -1.0}) <
        1e-15);
  CHECK(std::abs(displacement_amplitude(CouplingProfile::constant(1.0, 2 * pi), 1.0)) < 1e-10);

  // -(g/nu)(e^{i nu t} - 1) for a constant coupling.
  const double g = 0.7, nu = 1.3, t = 2.2;
  const Complex expected = -(g / nu) * (std::exp(Complex{0.0, nu * t}) - 1.0);
  CHECK(std::abs(displacement_amplitude(CouplingProfile::constant(g, nu), t) - expected) < 1e-14);

  // A triangle pulse of height 1 on [0, 2], unmodulated, has area 1.
  const auto tri = CouplingProfile::sampled({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, 0.0);
  CHECK(std::abs(displacement_amplitude(tri, 3.0) - Complex{0.0, -1.0}) < 1e-12);
}

TEST_CASE("evolve_closed at t = 0 is the identity") {
  QubitState q;
  q << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  const CMatrixField f = evolve_closed(CouplingProfile::constant(1.0, 0.0), q, thermal_charfn(0.6), 0.0);
  for (Complex b : probes) {
    const double th = std::exp(-1.1 * std::norm(b));
    const CMatrix c = f.at(b);
    CHECK(std::abs(c.ee - 0.7 * th) < 1e-15);
    CHECK(std::abs(c.gg - 0.3 * th) < 1e-15);
    CHECK(std::abs(c.eg - q(0, 1) * th) < 1e-15);
    CHECK(std::abs(c.ge - q(1, 0) * th) < 1e-15);
  }
}

TEST_CASE("evolve_closed for |+> and vacuum") {
  const auto prof = CouplingProfile::constant(0.8, 0.0);
  const double t = 1.5;
  const Complex a{0.0, -0.8 * t};
  const CMatrixField f = evolve_closed(prof, qubit_plus(), thermal_charfn(0.0), t);
  CHECK(std::abs(f.at(0.0).ee - 0.5) < 1e-15);
  for (Complex b : probes) {
    const Complex ee = 0.5 * std::exp(-std::norm(b) / 2 + std::conj(a) * b - a * std::conj(b));
    const Complex eg = 0.5 * std::exp(-std::norm(b + 2.0 * a) / 2);
    CHECK(std::abs(f.at(b).ee - ee) < 1e-14);
    CHECK(std::abs(f.at(b).eg - eg) < 1e-14);
    CHECK(std::abs(f.at(b).gg - std::conj(ee)) < 1e-14);
  }
}

TEST_CASE("evolve_closed normalization and hermiticity") {
  QubitState q;
  q << 0.4, Complex(0.2, -0.3), Complex(0.2, 0.3), 0.6;
  const auto prof = CouplingProfile::piecewise({{0.0, 0.7, 1.0}, {1.0, 2.0, -0.4}}, 0.9);
  for (double t : {0.2, 1.3, 2.5}) {
    const CMatrixField f = evolve_closed(prof, q, thermal_charfn(1.5), t);
    CHECK(std::abs(f.at(0.0).ee + f.at(0.0).gg - 1.0) < 1e-14);
    for (Complex b : probes) CHECK(std::abs(f.at(b).ge - std::conj(f.at(-b).eg)) < 1e-14);
  }
}

TEST_CASE("period return restores the off-diagonal envelope") {
  const double nu = 2.0;
  const auto prof = CouplingProfile::constant(1.0, nu);
  const CMatrixField f = evolve_closed(prof, qubit_plus(), thermal_charfn(0.5), 2 * pi / nu);
  for (Complex b : probes) {
    CHECK(std::abs(f.at(b).eg - 0.5 * std::exp(-std::norm(b))) < 1e-10);
  }
}

TEST_CASE("evolve_closed matches the Fock-space controlled displacement") {
  const double Na = 1.0;
  const auto prof = CouplingProfile::constant(1.0, 0.3);
  const double t = 1.1;
  const Complex alpha = displacement_amplitude(prof, t);
  const int cutoff = 90;
  const JointFockState s0 = product_state(qubit_plus(), thermal_state(Na, cutoff).rho);
  const JointFockState s1 = apply_controlled_displacement(s0, alpha);
  const CMatrixField f = evolve_closed(prof, qubit_plus(), thermal_charfn(Na), t);
  for (Complex b : probes) {
    const CMatrix o = cmatrix_extract(s1, b);
    const CMatrix c = f.at(b);
    CHECK(std::abs(o.ee - c.ee) < 1e-8);
    CHECK(std::abs(o.gg - c.gg) < 1e-8);
    CHECK(std::abs(o.eg - c.eg) < 1e-8);
    CHECK(std::abs(o.ge - c.ge) < 1e-8);
  }
}

TEST_CASE("evolve_closed input validation") {
  const auto prof = CouplingProfile::constant(1.0, 0.0);
  QubitState bad;
  bad << 0.8, 0.0, 0.0, 0.8;
  CHECK_THROWS_AS(evolve_closed(prof, bad, thermal_charfn(0.0), 1.0), std::invalid_argument);
  QubitState nonpos;
  nonpos << 0.5, 0.9, 0.9, 0.5;
  CHECK_THROWS_AS(evolve_closed(prof, nonpos, thermal_charfn(0.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve_closed(prof, qubit_plus(), thermal_charfn(0.0), -1.0), std::invalid_argument);
  CharFn unnormalized = [](Complex b) { return 2.0 * std::exp(-std::norm(b)); };
  CHECK_THROWS_AS(evolve_closed(prof, qubit_plus(), unnormalized, 1.0), std::invalid_argument);
}
