#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"

#include "qcdsim/observables.hpp"
#include "qcdsim/phase_space.hpp"

using namespace qcdsim;

namespace {

const double pi = 3.141592653589793;

ScenarioPoint manual_point(double Na, Complex alpha0, double w) {
  ScenarioPoint p;
  p.Na = Na;
  p.t = 1.0;
  p.alpha0 = alpha0;
  p.w = w;
  return p;
}

double poisson(int m, double x) { return std::exp(-x + m * std::log(x) - std::lgamma(m + 1.0)); }

}  // namespace

TEST_CASE("scenario closed forms") {
  const ScenarioPoint z = scenario(1.0, 0.01, 0.01, 0.0, 0.0);
  CHECK(std::abs(z.alpha0) == 0.0);
  CHECK(z.w == 0.0);

  const ScenarioPoint p = scenario(1.0, 0.01, 0.01, 0.0, 1.0);
  CHECK(std::abs(p.alpha0 - Complex{0.0, -0.997504}) < 1e-6);
  // Reference w in extended precision: the bracket cancels to ~1e-7 relative.
  const long double x = 0.01L;
  const long double w = 0.01L + 16.0L * 0.5L / (x * x) * (x - 3.0L + 4.0L * std::exp(-x / 2) - std::exp(-x));
  CHECK(p.w == doctest::Approx(static_cast<double>(w)).epsilon(1e-9));
  CHECK(std::abs(p.w - 0.016667) < 1e-4);

  const ScenarioPoint lossless = scenario(1.0, 0.0, 0.0, 2.0, 1.5);
  CHECK(lossless.w == 0.0);
  CHECK(std::abs(lossless.alpha0 - Complex{0.0, -1.5}) < 1e-15);

  const double kappa = 1e-6, t = 2.0;
  const ScenarioPoint small = scenario(1.0, kappa, 0.0, 1.0, t);
  CHECK(small.w == doctest::Approx(4.0 / 3.0 * 1.5 * kappa * t * t * t).epsilon(1e-5));
}

TEST_CASE("displaced thermal populations") {
  for (int m = 0; m < 6; ++m) {
    CHECK(displaced_thermal_population(m, 0.0, 2.0) == doctest::Approx(std::pow(2.0, m) / std::pow(3.0, m + 1)));
    CHECK(displaced_thermal_population(m, Complex{0.6, -0.8}, 0.0) == doctest::Approx(poisson(m, 1.0)));
  }
  double sum = 0.0;
  for (double v : displaced_thermal_populations(200, Complex{1.0, 1.0}, 2.0)) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  for (double Na : {0.0, 0.5, 3.0}) {
    for (Complex zeta : {Complex{0.0, -2.0}, Complex{1.2, 0.4}}) {
      for (int m : {0, 1, 4, 11}) {
        CAPTURE(Na);
        CAPTURE(m);
        CHECK(std::abs(displaced_thermal_population(m, zeta, Na) -
                       displaced_thermal_population_matrix(m, zeta, Na)) < 1e-9);
      }
    }
  }
}

TEST_CASE("laguerre polynomials") {
  CHECK(laguerre(0, 3.7) == 1.0);
  CHECK(laguerre(1, 2.0) == doctest::Approx(-1.0));
  CHECK(laguerre(3, 1.0) == doctest::Approx(-2.0 / 3.0));
  const double x = 0.45;
  CHECK(laguerre(3, x) == doctest::Approx((-x * x * x + 9 * x * x - 18 * x + 6) / 6));
}

TEST_CASE("q_m and the witness") {
  const ScenarioPoint z = scenario(1.0, 0.01, 0.01, 1.0, 0.0);
  for (int m = 0; m < 5; ++m) CHECK(std::abs(q_m(m, z)) < 1e-15);
  CHECK(witness_BN(z) < 1e-15);

  const ScenarioPoint ideal = manual_point(0.0, Complex{0.0, -1.0}, 0.0);
  CHECK(q_m(0, ideal) == doctest::Approx(0.5 * (std::exp(-4.0) - 1.0)));
  CHECK(q_m(0, ideal) == doctest::Approx(-0.490842).epsilon(1e-6));
  CHECK(std::abs(witness_BN(ideal) - (1.0 - std::exp(-4.0))) < 1e-9);

  const ScenarioPoint fig = scenario(1.0, 0.01, 0.01, 0.0, 1.0);
  CHECK(q_m(0, fig) == doctest::Approx(-0.4824).epsilon(1e-4));
  CHECK(witness_BN(fig) == doctest::Approx(0.965).epsilon(1e-3));
  CHECK(default_m_max(fig) == static_cast<int>(std::ceil(8 * std::norm(fig.alpha0) + 20)));
}

TEST_CASE("q_m sum rule") {
  for (const ScenarioPoint& p : {scenario(1.0, 0.01, 0.01, 0.0, 1.0), scenario(1.0, 0.01, 0.01, 3.0, 2.0),
                                 scenario(1.0, 0.05, 0.02, 1.0, 0.7)}) {
    double s = 0.0;
    for (int m = 0; m <= 400; ++m) s += 2 * q_m(m, p);
    CHECK(std::abs(s - (1.0 - std::exp(-p.w))) < 1e-8);
  }
}

TEST_CASE("projection probabilities") {
  CHECK(projection_probability(scenario(1.0, 0.01, 0.01, 0.0, 0.0), Projection::minus) == 0.0);
  CHECK(projection_probability(manual_point(0.0, Complex{0.0, 9.0}, 0.0), Projection::minus) ==
        doctest::Approx(0.5));
  const ScenarioPoint fig = scenario(1.0, 0.01, 0.01, 0.0, 1.0);
  const double pm = projection_probability(fig, Projection::minus);
  CHECK(pm == doctest::Approx(0.43277).epsilon(1e-5));
  CHECK(projection_probability(fig, Projection::plus) == doctest::Approx(1.0 - pm));
}

TEST_CASE("wigner transform") {
  const WignerQuadrature q{8.0, 161};
  CHECK(wigner([](Complex b) { return std::exp(-0.5 * std::norm(b)); }, 0.0, q) ==
        doctest::Approx(2.0 / pi).epsilon(1e-8));
  CHECK(wigner(thermal_charfn(1.5), 0.0, q) == doctest::Approx(1.0 / (pi * 2.0)).epsilon(1e-8));

  const Complex d{0.7, -0.4};
  const CharFn coh = coherent_charfn(d);
  CHECK(wigner(coh, d, q) == doctest::Approx(2.0 / pi).epsilon(1e-8));
  CHECK(wigner(coh, 0.0, q) == doctest::Approx(2.0 / pi * std::exp(-2 * std::norm(d))).epsilon(1e-8));

  CHECK_THROWS_AS(wigner([](Complex) { return Complex{1.0, 0.0}; }, 0.0, q), std::invalid_argument);

  // Normalization: trapezoid sum of W over a box.
  const WignerQuadrature coarse{7.0, 81};
  const CharFn th = thermal_charfn(0.5);
  double total = 0.0;
  const int n = 41;
  const double h = 8.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      total += wx * wy * wigner(th, Complex{-4.0 + i * h, -4.0 + j * h}, coarse);
    }
  }
  CHECK(total * h * h == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("projected state and the nonclassicality metric") {
  const ScenarioPoint zero = scenario(1.0, 0.01, 0.01, 0.0, 0.0);
  CHECK_THROWS_AS(projected_charfn(scenario_cmatrix(zero), Projection::minus), std::domain_error);
  CHECK(nonclassicality_W(zero) == 0.0);

  const ScenarioPoint fig = scenario(1.0, 0.01, 0.01, 0.0, 1.0);
  CHECK(std::abs(projected_wigner_origin(fig) - projected_wigner_origin_closed(fig)) < 1e-6);
  CHECK(nonclassicality_W(fig) == doctest::Approx(0.847).epsilon(1e-3));
  CHECK(std::abs(nonclassicality_W(fig) - nonclassicality_W_quadrature(fig)) < 1e-6);

  const ScenarioPoint ideal = manual_point(0.0, Complex{0.0, 2.0}, 0.0);
  CHECK(std::abs(nonclassicality_W(ideal) - (1.0 - std::exp(-8.0))) < 1e-6);
  CHECK(std::abs(nonclassicality_W_quadrature(ideal) - (1.0 - std::exp(-8.0))) < 1e-6);

  for (const ScenarioPoint& p : {scenario(1.0, 0.01, 0.01, 1.0, 2.5), scenario(1.0, 0.02, 0.0, 0.3, 1.2)}) {
    CHECK(std::abs(projected_wigner_origin(p) - projected_wigner_origin_closed(p)) < 1e-6);
  }
}

TEST_CASE("dephasing never helps") {
  for (double Na : {0.0, 0.5, 2.0}) {
    double bn = 2.0, wm = 2.0;
    for (double w = 0.0; w < 1.0; w += 0.05) {
      const ScenarioPoint p = manual_point(Na, Complex{0.0, -1.3}, w);
      const double b = witness_BN(p), m = nonclassicality_W(p);
      CHECK(b <= bn + 1e-15);
      CHECK(m <= wm + 1e-15);
      bn = b;
      wm = m;
    }
  }
}

TEST_CASE("oracle routes agree with the closed forms at the reference point") {
  const ScenarioPoint fig = scenario(1.0, 0.01, 0.01, 0.0, 1.0);
  const SystemConfig c = scenario_config(fig);
  const OracleRun run = evolve_converged(qubit_plus(), 0.0, c, fig.t, std::abs(fig.alpha0));
  const JointFockState& s = run.state;
  for (int m = 0; m < 6; ++m) CHECK(std::abs(q_m_oracle(m, s, fig.alpha0) - q_m(m, fig)) < 1e-6);
  const double bn = witness_BN_oracle(s, fig.alpha0, default_m_max(fig));
  CHECK(std::abs(bn - witness_BN(fig)) < 1e-6);
  CHECK(std::abs(projection_probability_oracle(s, Projection::minus) -
                 projection_probability(fig, Projection::minus)) < 1e-6);
  CHECK(std::abs(nonclassicality_W_oracle(s) - nonclassicality_W(fig)) < 1e-6);
  CHECK(negativity(s) >= witness_BN(fig));
}

TEST_CASE("scan table") {
  ScanSpec trivial;
  trivial.Na = {0.0};
  trivial.g0t = {0.0};
  const ScanTable t0 = scan(trivial);
  REQUIRE(t0.rows.size() == 1);
  CHECK(t0.rows[0].BN == 0.0);
  CHECK(t0.rows[0].W_metric == 0.0);
  CHECK(t0.rows[0].P_minus == 0.0);
  CHECK_FALSE(t0.rows[0].negativity_oracle.has_value());

  ScanSpec spec;
  spec.Na = {0.0, 5.0};
  for (int i = 1; i <= 30; ++i) spec.g0t.push_back(0.1 * i);
  const ScanTable a = scan(spec, 1);
  const ScanTable b = scan(spec, 4);
  REQUIRE(a.rows.size() == 60);
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].BN == b.rows[i].BN);
    CHECK(a.rows[i].W_metric == b.rows[i].W_metric);
    if (i < 30) best = std::max(best, a.rows[i].BN);
  }
  CHECK(best > 0.9);
  CHECK(a.rows[0].Na == 0.0);
  CHECK(a.rows[30].Na == 5.0);
  CHECK(a.rows[31].g0t == doctest::Approx(0.2));

  std::ostringstream csv;
  write_csv(csv, a);
  const std::string text = csv.str();
  CHECK(text.rfind("Na,g0t,alpha0_im,w,BN,W_metric,P_minus,negativity_oracle\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 61);
  CHECK(text.find(",\n") != std::string::npos);

  ScanSpec small;
  small.Na = {0.0};
  small.g0t = {0.5, 1.0};
  small.oracle_max_Na = 0.0;
  const ScanTable o = scan(small);
  for (const ScanRow& r : o.rows) {
    REQUIRE(r.negativity_oracle.has_value());
    CHECK(*r.negativity_oracle >= r.BN);
  }
}
