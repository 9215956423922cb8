#include "qcdsim/phase_space.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <stdexcept>

#include "qcdsim/ode.hpp"

namespace qcdsim {
namespace {

// Partition of [0, t] at the profile's breakpoints.
std::vector<double> knots(const CouplingProfile& profile, double t) {
  std::vector<double> k{0.0};
  for (double b : profile.breakpoints(t)) k.push_back(b);
  k.push_back(t);
  return k;
}

template <typename F>
Complex integrate_piecewise(const CouplingProfile& profile, double t, F&& f, double abs_tol) {
  const std::vector<double> k = knots(profile, t);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 1; i < k.size(); ++i) sum += integrate(f, k[i - 1], k[i], abs_tol);
  return sum;
}

// 1 - e^{-kappa t}
double bath_fraction(double kappa, double t) { return -std::expm1(-kappa * t); }

// Exponent 2 e^{kappa s/2} [lambda(s) b^* - lambda(s)^* b] of the diagonal
// feed terms, written through the scaled kernel; purely imaginary.
Complex feed_exponent(Complex scaled_lambda_s, Complex b) {
  return 2.0 * (scaled_lambda_s * std::conj(b) - std::conj(scaled_lambda_s) * b);
}

struct Envelope {
  Complex gg;  // multiplies the gg ansatz factor
  Complex ee;
};

Envelope diag_envelope(const SystemConfig& c, double t, Complex beta) {
  const double kappa = c.rates().kappa;
  const double delta = c.derived().Delta;
  const Complex lambda = std::exp(-0.5 * kappa * t) * scaled_lambda(c.profile(), kappa, t);
  const Complex damp = -delta * bath_fraction(kappa, t) * std::norm(beta);
  const Complex drive = lambda * std::conj(beta) - std::conj(lambda) * beta;
  return {std::exp(damp - drive), std::exp(damp + drive)};
}

}  // namespace

Complex scaled_lambda(const CouplingProfile& profile, double kappa, double t) {
  return kI * profile.moment(t, Complex{0.5 * kappa, profile.nu()});
}

Complex mu_kernel(const CouplingProfile& profile, double kappa, double t) {
  if (t <= 0.0) return Complex{0.0, 0.0};
  const double x = 0.5 * kappa;
  if (kappa * t < 1e-6) {
    return 2.0 * kI *
           profile.weighted_moment(
               t, [=](double s) { return Complex{(s / t) * (1.0 + x * x * (s * s - t * t) / 6.0)}; });
  }
  const double denom = std::expm1(-2.0 * x * t);
  return 2.0 * kI * profile.weighted_moment(t, [=](double s) {
           return Complex{std::exp(x * (s - t)) * std::expm1(-2.0 * x * s) / denom};
         });
}

KernelSet kernels(const CouplingProfile& profile, const RateInputs& rates,
                  const DerivedRates& derived, double t) {
  if (t < 0.0) throw std::invalid_argument("kernels: t must be >= 0");
  KernelSet k;
  k.t = t;
  if (t == 0.0) return k;
  const double kappa = rates.kappa;
  const double nu = profile.nu();
  k.xi = 2.0 * kI * profile.moment(t, Complex{-0.5 * kappa, nu});
  k.lambda = std::exp(-0.5 * kappa * t) * scaled_lambda(profile, kappa, t);
  k.mu = mu_kernel(profile, kappa, t);
  k.tau = derived.gamma * t;
  if (kappa > 0.0) {
    const Complex area = integrate_piecewise(
        profile, t, [&](double s) { return Complex{std::norm(mu_kernel(profile, kappa, s))}; },
        1e-13);
    k.tau += kappa * derived.Delta * area.real();
  }
  return k;
}

KernelSet kernels(const SystemConfig& c, double t) {
  return kernels(c.profile(), c.rates(), c.derived(), t);
}

OffDiagPair offdiag_solution(const CharFn& chi_eg0, const CharFn& chi_ge0, const KernelSet& k,
                             double kappa, double Delta, Complex beta) {
  const double decay = std::exp(-0.5 * kappa * k.t);
  const double spread = Delta * bath_fraction(kappa, k.t);
  const Complex eg = chi_eg0(beta * decay - k.xi) * std::exp(-spread * std::norm(beta - k.mu) - k.tau);
  const Complex ge = chi_ge0(beta * decay + k.xi) * std::exp(-spread * std::norm(beta + k.mu) - k.tau);
  return {eg, ge};
}

DiagPair diag_uncoupled(const CharFn& chi_ee0, const CharFn& chi_gg0, Complex lambda,
                        double kappa, double Delta, double Gamma_c, double Gamma_h,
                        Complex beta, double t) {
  const Complex b = beta * std::exp(-0.5 * kappa * t);
  const Complex damp = -Delta * bath_fraction(kappa, t) * std::norm(beta);
  const Complex drive = lambda * std::conj(beta) - std::conj(lambda) * beta;
  return {std::exp(-Gamma_c * t + damp + drive) * chi_ee0(b),
          std::exp(-Gamma_h * t + damp - drive) * chi_gg0(b)};
}

DiagPair diag_ode_point(const CharFn& chi_ee0, const CharFn& chi_gg0, const SystemConfig& c,
                        double t, Complex beta) {
  if (t < 0.0) throw std::invalid_argument("diag_ode: t must be >= 0");
  const CouplingProfile& profile = c.profile();
  const double kappa = c.rates().kappa;
  const double gc = c.derived().Gamma_c;
  const double gh = c.derived().Gamma_h;
  const Complex b = beta * std::exp(-0.5 * kappa * t);
  const Complex rate{0.5 * kappa, profile.nu()};

  // State: p = e^{-Gamma_h s} Phi_gg chi_gg0, q = e^{-Gamma_c s} Phi_ee chi_ee0
  // and the scaled kernel e^{kappa s/2} lambda(s). The rescaling keeps every
  // growth factor bounded, so no log-space integration is needed.
  using State = std::array<Complex, 3>;
  State x{chi_gg0(b), chi_ee0(b), Complex{0.0, 0.0}};

  if (t > 0.0 && (gc > 0.0 || gh > 0.0)) {
    auto rhs = [&](const State& y, State& dy, double s) {
      const double g = profile.amplitude(s);
      const Complex phase = std::exp(feed_exponent(y[2], b));
      dy[0] = -gh * y[0] + gc * phase * y[1];
      dy[1] = -gc * y[1] + gh * y[0] / phase;
      dy[2] = kI * g * std::exp(rate * s);
    };
    namespace odeint = boost::numeric::odeint;
    OdeTolerance tol;
    auto stepper = odeint::make_controlled(
        tol.abs, tol.rel,
        odeint::runge_kutta_dopri5<State, double, State, double, odeint::array_algebra>());
    const std::vector<double> k = knots(profile, t);
    double dt = 0.0;
    const std::string where = "beta=(" + format_g17(beta.real()) + "," + format_g17(beta.imag()) + ")";
    for (std::size_t i = 1; i < k.size(); ++i) {
      dt = std::min(k[i] - k[i - 1], dt > 0.0 ? dt : (k[i] - k[i - 1]) / 16.0);
      integrate_to(stepper, rhs, x, k[i - 1], k[i], dt, tol, where);
    }
  }
  const Envelope env = diag_envelope(c, t, beta);
  return {env.ee * x[1], env.gg * x[0]};
}

SampledDiag diag_ode_solve(const CharFn& chi_ee0, const CharFn& chi_gg0, const SystemConfig& c,
                           double t, const GridSpec& grid, unsigned threads) {
  grid.validate();
  SampledDiag out;
  out.beta = grid.points();
  out.values.resize(out.beta.size());
  parallel_for(out.beta.size(), threads, [&](std::size_t i) {
    out.values[i] = diag_ode_point(chi_ee0, chi_gg0, c, t, out.beta[i]);
  });
  return out;
}

PerturbativeDiag diag_perturbative(const CharFn& chi_ee0, const CharFn& chi_gg0,
                                   const SystemConfig& c, double t, Complex beta) {
  const CouplingProfile& profile = c.profile();
  const double kappa = c.rates().kappa;
  const double gc = c.derived().Gamma_c;
  const double gh = c.derived().Gamma_h;
  const Complex b = beta * std::exp(-0.5 * kappa * t);

  Complex u = chi_gg0(b);
  Complex v = chi_ee0(b);
  if (t > 0.0 && gc > 0.0) {
    u += gc * chi_ee0(b) *
         integrate_piecewise(
             profile, t,
             [&](double s) { return std::exp(feed_exponent(scaled_lambda(profile, kappa, s), b)); },
             1e-13);
  }
  if (t > 0.0 && gh > 0.0) {
    v += gh * chi_gg0(b) *
         integrate_piecewise(
             profile, t,
             [&](double s) { return std::exp(-feed_exponent(scaled_lambda(profile, kappa, s), b)); },
             1e-13);
  }
  const Envelope env = diag_envelope(c, t, beta);
  PerturbativeDiag out;
  out.value = {std::exp(-gc * t) * env.ee * v, std::exp(-gh * t) * env.gg * u};
  out.validity_exceeded = gc * t > kPerturbativeLimit || gh * t > kPerturbativeLimit;
  return out;
}

DiagPair diag_zero_heating(const CharFn& chi_ee0, const CharFn& chi_gg0, const SystemConfig& c,
                           double t, Complex beta) {
  if (c.derived().Gamma_h != 0.0) {
    throw std::invalid_argument("diag_zero_heating requires Gamma_h = 0");
  }
  const CouplingProfile& profile = c.profile();
  const double kappa = c.rates().kappa;
  const double gc = c.derived().Gamma_c;
  const Complex b = beta * std::exp(-0.5 * kappa * t);

  Complex u = chi_gg0(b);
  const Complex v = chi_ee0(b);
  if (t > 0.0 && gc > 0.0 && v != Complex{0.0, 0.0}) {
    u += gc * v *
         integrate_piecewise(
             profile, t,
             [&](double s) {
               return std::exp(-gc * s + feed_exponent(scaled_lambda(profile, kappa, s), b));
             },
             1e-13);
  }
  const Envelope env = diag_envelope(c, t, beta);
  return {std::exp(-gc * t) * env.ee * v, env.gg * u};
}

std::string_view to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::automatic:
      return "auto";
    case SolverMethod::ode:
      return "ode";
    case SolverMethod::perturbative:
      return "perturbative";
  }
  return "auto";
}

SolverMethod solver_method_from_string(std::string_view name) {
  if (name == "auto") return SolverMethod::automatic;
  if (name == "ode") return SolverMethod::ode;
  if (name == "perturbative") return SolverMethod::perturbative;
  throw std::invalid_argument("unknown solver method '" + std::string(name) + "'");
}

void validate_initial(const CMatrixField& f) {
  constexpr double tol = 1e-10;
  const Complex zero{0.0, 0.0};
  if (std::abs(f.ee(zero) + f.gg(zero) - 1.0) > tol) {
    throw std::invalid_argument("initial C-Matrix: chi_ee(0) + chi_gg(0) != 1");
  }
  const Complex probes[] = {zero, {0.37, -0.21}, {-1.1, 0.6}, {0.05, 1.7}};
  for (Complex b : probes) {
    if (std::abs(f.ge(b) - std::conj(f.eg(-b))) > tol) {
      throw std::invalid_argument("initial C-Matrix: chi_ge(beta) != conj(chi_eg(-beta))");
    }
    if (std::abs(f.ee(b) - std::conj(f.ee(-b))) > tol ||
        std::abs(f.gg(b) - std::conj(f.gg(-b))) > tol) {
      throw std::invalid_argument("initial C-Matrix: diagonal elements are not Hermitian");
    }
  }
}

namespace {

enum class DiagRoute { uncoupled, zero_heating, ode, perturbative };

DiagRoute choose_route(const SystemConfig& c, SolverMethod method) {
  const double gc = c.derived().Gamma_c;
  const double gh = c.derived().Gamma_h;
  switch (method) {
    case SolverMethod::ode:
      return DiagRoute::ode;
    case SolverMethod::perturbative:
      return DiagRoute::perturbative;
    case SolverMethod::automatic:
      break;
  }
  if (gc == 0.0 && gh == 0.0) return DiagRoute::uncoupled;
  if (gh == 0.0) return DiagRoute::zero_heating;
  return DiagRoute::ode;
}

Provenance provenance_of(DiagRoute r) {
  switch (r) {
    case DiagRoute::uncoupled:
    case DiagRoute::zero_heating:
      return Provenance::analytic;
    case DiagRoute::ode:
      return Provenance::ode;
    case DiagRoute::perturbative:
      return Provenance::perturbative;
  }
  return Provenance::analytic;
}

struct Solver {
  SystemConfig config;
  CMatrixField initial;
  double t;
  DiagRoute route;
  KernelSet k;

  DiagPair diag(Complex beta) const {
    const DerivedRates& d = config.derived();
    switch (route) {
      case DiagRoute::uncoupled:
        return diag_uncoupled(initial.ee, initial.gg, k.lambda, config.rates().kappa, d.Delta,
                              d.Gamma_c, d.Gamma_h, beta, t);
      case DiagRoute::zero_heating:
        return diag_zero_heating(initial.ee, initial.gg, config, t, beta);
      case DiagRoute::ode:
        return diag_ode_point(initial.ee, initial.gg, config, t, beta);
      case DiagRoute::perturbative:
        return diag_perturbative(initial.ee, initial.gg, config, t, beta).value;
    }
    return {};
  }

  OffDiagPair offdiag(Complex beta) const {
    return offdiag_solution(initial.eg, initial.ge, k, config.rates().kappa,
                            config.derived().Delta, beta);
  }
};

}  // namespace

CMatrixField solve_cmatrix(const SystemConfig& config, const CMatrixField& initial, double t,
                           SolverMethod method) {
  if (t < 0.0) throw std::invalid_argument("solve_cmatrix: t must be >= 0");
  validate_initial(initial);
  const DiagRoute route = choose_route(config, method);
  auto solver = std::make_shared<const Solver>(Solver{config, initial, t, route, kernels(config, t)});
  CMatrixField out;
  out.ee = [solver](Complex b) { return solver->diag(b).ee; };
  out.gg = [solver](Complex b) { return solver->diag(b).gg; };
  out.eg = [solver](Complex b) { return solver->offdiag(b).eg; };
  out.ge = [solver](Complex b) { return solver->offdiag(b).ge; };
  out.provenance = provenance_of(route);
  return out;
}

SampledField solve_cmatrix(const SystemConfig& config, const CMatrixField& initial, double t,
                           const GridSpec& grid, SolverMethod method, unsigned threads) {
  if (t < 0.0) throw std::invalid_argument("solve_cmatrix: t must be >= 0");
  grid.validate();
  validate_initial(initial);
  const DiagRoute route = choose_route(config, method);
  const Solver solver{config, initial, t, route, kernels(config, t)};
  SampledField out;
  out.grid = grid;
  out.t = t;
  out.provenance = provenance_of(route);
  out.beta = grid.points();
  out.values.resize(out.beta.size());
  parallel_for(out.beta.size(), threads, [&](std::size_t i) {
    const Complex b = out.beta[i];
    const DiagPair d = solver.diag(b);
    const OffDiagPair o = solver.offdiag(b);
    out.values[i] = {d.ee, d.gg, o.eg, o.ge};
  });
  return out;
}

}  // namespace qcdsim
