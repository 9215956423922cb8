#include "qcdsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace qcdsim {
namespace {

// (x - 3 + 4 e^{-x/2} - e^{-x}) / x^2. The bracket vanishes like x^3/12, so
// below x = 1 its Taylor series is summed instead of the exponentials.
double dephasing_shape(double x) {
  if (x >= 1.0) return (x - 3.0 + 4.0 * std::exp(-0.5 * x) - std::exp(-x)) / (x * x);
  double sum = 0.0;
  double xpow = x;        // x^{k-2}
  double factorial = 6.0; // k!
  double half = 0.125;    // 2^{-k}
  for (int k = 3; k < 40; ++k) {
    const double term = (k % 2 ? -1.0 : 1.0) * (4.0 * half - 1.0) * xpow / factorial;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    xpow *= x;
    factorial *= k + 1;
    half *= 0.5;
  }
  return sum;
}

void require_point(const ScenarioPoint& p) {
  if (!(p.kappa >= 0.0 && p.gamma >= 0.0 && p.Na >= 0.0 && p.t >= 0.0 && p.w >= 0.0)) {
    throw std::invalid_argument("scenario point has negative parameters");
  }
}

}  // namespace

ScenarioPoint scenario(double g0, double kappa, double gamma, double Na, double t) {
  if (!(kappa >= 0.0) || !(gamma >= 0.0) || !(Na >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("scenario: kappa, gamma, Na and t must be >= 0");
  }
  ScenarioPoint p;
  p.g0 = g0;
  p.kappa = kappa;
  p.gamma = gamma;
  p.Na = Na;
  p.t = t;
  const double x = kappa * t;
  p.alpha0 = -kI * g0 * t * phi1(Complex{-0.5 * x, 0.0}).real();
  p.w = gamma * t + 16.0 * p.Delta() * g0 * g0 * t * t * dephasing_shape(x);
  return p;
}

SystemConfig scenario_config(const ScenarioPoint& p) {
  RateInputs r;
  r.kappa = p.kappa;
  r.gamma1 = 0.0;
  r.gamma2 = p.gamma;
  r.Na = p.Na;
  r.Nq = 0.0;
  return SystemConfig(CouplingProfile::constant(p.g0, 0.0), r);
}

CMatrixField scenario_cmatrix(const ScenarioPoint& p) {
  const double d = p.Delta();
  const Complex a = p.alpha0;
  const double w = p.w;
  CMatrixField f;
  f.ee = [=](Complex b) { return 0.5 * std::exp(-d * std::norm(b) + std::conj(a) * b - a * std::conj(b)); };
  f.gg = [=](Complex b) { return 0.5 * std::exp(-d * std::norm(b) - std::conj(a) * b + a * std::conj(b)); };
  f.eg = [=](Complex b) { return Complex{0.5 * std::exp(-d * std::norm(b + 2.0 * a) - w), 0.0}; };
  f.ge = [=](Complex b) { return Complex{0.5 * std::exp(-d * std::norm(b - 2.0 * a) - w), 0.0}; };
  f.provenance = Provenance::analytic;
  return f;
}

double displaced_thermal_population_matrix(int m, Complex zeta, double Na) {
  if (m < 0) throw std::invalid_argument("population index must be >= 0");
  if (!(Na >= 0.0)) throw std::invalid_argument("Na must be >= 0");
  // Thermal levels above n_th carry less than 1e-18 of the weight.
  const int n_th = Na > 0.0 ? static_cast<int>(std::ceil(std::log(1e-18) / std::log(Na / (Na + 1.0)))) : 0;
  const double z = std::abs(zeta);
  const int cutoff = m + n_th + static_cast<int>(std::ceil(4.0 * z * z + 20.0 * (1.0 + z)));
  const Eigen::MatrixXcd D = displacement_matrix(zeta, cutoff);
  const OscillatorState th = thermal_state(Na, cutoff);
  double sum = 0.0;
  for (int n = 0; n <= cutoff; ++n) sum += th.rho(n, n).real() * std::norm(D(m, n));
  return sum;
}

std::vector<double> displaced_thermal_populations(int m_max, Complex zeta, double Na) {
  if (m_max < 0) throw std::invalid_argument("population index must be >= 0");
  if (!(Na >= 0.0)) throw std::invalid_argument("Na must be >= 0");
  // y_k = c^k L_k(-|zeta|^2 / (N (N+1))) with c = N/(N+1), so that
  // (k+1) y_{k+1} = (c (2k+1) + s) y_k - c^2 k y_{k-1}, s = |zeta|^2/(N+1)^2.
  const double c = Na / (Na + 1.0);
  const double s = std::norm(zeta) / ((Na + 1.0) * (Na + 1.0));
  const double base = -std::norm(zeta) / (Na + 1.0) - std::log(Na + 1.0);
  std::vector<double> out(m_max + 1);
  double prev = 0.0, cur = 1.0, log_scale = 0.0;
  out[0] = std::exp(base);
  for (int k = 0; k < m_max; ++k) {
    const double next = ((c * (2.0 * k + 1.0) + s) * cur - c * c * k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      prev *= 1e-200;
      cur *= 1e-200;
      log_scale += 200.0 * std::log(10.0);
    }
    out[k + 1] = cur > 0.0 ? std::exp(std::log(cur) + log_scale + base) : 0.0;
  }
  return out;
}

double displaced_thermal_population(int m, Complex zeta, double Na) {
  return displaced_thermal_populations(m, zeta, Na).back();
}

namespace {

// p_n = N^n / (N+1)^{n+1} for n = 0..m_max.
std::vector<double> thermal_populations(int m_max, double Na) {
  std::vector<double> p(m_max + 1);
  const double ratio = Na / (Na + 1.0);
  p[0] = 1.0 / (Na + 1.0);
  for (int n = 1; n <= m_max; ++n) p[n] = p[n - 1] * ratio;
  return p;
}

}  // namespace

double q_m(int m, const ScenarioPoint& p) {
  require_point(p);
  const double pm = thermal_populations(m, p.Na).back();
  return 0.5 * (displaced_thermal_population(m, 2.0 * p.alpha0, p.Na) - pm * std::exp(-p.w));
}

int default_m_max(const ScenarioPoint& p) {
  return static_cast<int>(std::ceil(8.0 * std::norm(p.alpha0) + 8.0 * p.Na + 20.0));
}

double witness_BN(const ScenarioPoint& p, std::optional<int> m_max) {
  require_point(p);
  const int M = m_max.value_or(default_m_max(p));
  const std::vector<double> P = displaced_thermal_populations(M, 2.0 * p.alpha0, p.Na);
  const std::vector<double> th = thermal_populations(M, p.Na);
  const double coherence = std::exp(-p.w);
  double bound = 0.0;
  for (int m = 0; m <= M; ++m) {
    const double q = 0.5 * (P[m] - th[m] * coherence);
    if (q < 0.0) bound -= 2.0 * q;
  }
  return bound;
}

double projection_probability(const ScenarioPoint& p, Projection sign) {
  require_point(p);
  const double minus = -0.5 * std::expm1(-4.0 * p.Delta() * std::norm(p.alpha0) - p.w);
  return sign == Projection::minus ? minus : 1.0 - minus;
}

WignerQuadrature wigner_quadrature(double delta_min, double delta_max, double shift) {
  if (!(delta_min > 0.0) || delta_max < delta_min || shift < 0.0) {
    throw std::invalid_argument("wigner_quadrature: need 0 < delta_min <= delta_max, shift >= 0");
  }
  WignerQuadrature q;
  q.extent = shift + std::sqrt(30.0 / delta_min);
  // Aliasing error of the trapezoid rule for e^{-delta x^2} e^{i k x} is about
  // exp(-(2 pi / h - k)^2 / (4 delta)); h below keeps it under e^{-30} for
  // wavenumbers k up to `shift`.
  const double h = 2.0 * kPi / (shift + std::sqrt(120.0 * delta_max));
  q.points = 2 * static_cast<int>(std::ceil(q.extent / h)) + 1;
  return q;
}

double wigner(const CharFn& chi, Complex alpha, const WignerQuadrature& quad) {
  if (!(quad.extent > 0.0) || quad.points < 3) {
    throw std::invalid_argument("wigner: quadrature needs extent > 0 and >= 3 points");
  }
  const double L = quad.extent;
  const int n = quad.points;
  for (int i = 0; i < 16; ++i) {
    const double phi = 2.0 * kPi * i / 16.0;
    const Complex edge = std::polar(L, phi);
    const Complex corner{L * (i % 2 ? 1.0 : -1.0), L * (i % 4 < 2 ? 1.0 : -1.0)};
    if (std::abs(chi(edge)) > 1e-10 || std::abs(chi(corner)) > 1e-10) {
      throw std::invalid_argument("wigner: characteristic function does not decay inside the box");
    }
  }
  const double h = 2.0 * L / (n - 1);
  Complex sum{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const double im = -L + h * j;
    for (int i = 0; i < n; ++i) {
      const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const Complex b{-L + h * i, im};
      sum += wx * wy * chi(b) * std::exp(alpha * std::conj(b) - std::conj(alpha) * b);
    }
  }
  const Complex W = sum * h * h / (kPi * kPi);
  if (std::abs(W.imag()) > 1e-8) {
    throw std::runtime_error("wigner: imaginary residual " + format_g12(W.imag()) + " exceeds 1e-8");
  }
  return W.real();
}

CharFn projected_charfn(const CMatrixField& f, Projection sign) {
  const double s = sign == Projection::minus ? -1.0 : 1.0;
  const Complex zero{0.0, 0.0};
  const double P = 0.5 * (f.ee(zero) + f.gg(zero) + s * (f.eg(zero) + f.ge(zero))).real();
  if (!(P > 1e-300)) throw std::domain_error("projected_charfn: projection probability vanishes");
  return [f, s, P](Complex b) { return (f.ee(b) + f.gg(b) + s * (f.eg(b) + f.ge(b))) / (2.0 * P); };
}

double projected_wigner_origin(const ScenarioPoint& p) {
  require_point(p);
  const CharFn chi = projected_charfn(scenario_cmatrix(p), Projection::minus);
  const double d = p.Delta();
  return wigner(chi, Complex{0.0, 0.0}, wigner_quadrature(d, d, 2.0 * std::abs(p.alpha0)));
}

double projected_wigner_origin_closed(const ScenarioPoint& p) {
  require_point(p);
  const double d = p.Delta();
  const double P = projection_probability(p, Projection::minus);
  if (!(P > 0.0)) throw std::domain_error("W(0): projection probability vanishes");
  return (std::exp(-std::norm(p.alpha0) / d) - std::exp(-p.w)) / (2.0 * kPi * d * P);
}

double nonclassicality_W(const ScenarioPoint& p) {
  require_point(p);
  const double d = p.Delta();
  // pi P_- cancels against the 1/P_- of W(0), which keeps t -> 0 finite.
  const double metric = std::max(0.0, (std::exp(-p.w) - std::exp(-std::norm(p.alpha0) / d)) / (2.0 * d));
  if (metric > 1.0 + 1e-12) throw std::logic_error("nonclassicality metric exceeds 1");
  return metric;
}

double nonclassicality_W_quadrature(const ScenarioPoint& p) {
  const double P = projection_probability(p, Projection::minus);
  if (P < 1e-14) return 0.0;
  const double metric = kPi * P * std::max(0.0, -projected_wigner_origin(p));
  if (metric > 1.0 + 1e-8) throw std::logic_error("nonclassicality metric exceeds 1");
  return metric;
}

double laguerre(int m, double x) {
  if (m < 0) throw std::invalid_argument("laguerre: order must be >= 0");
  if (m == 0) return 1.0;
  double prev = 1.0, cur = 1.0 - x;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double q_m_oracle(int m, const JointFockState& s, Complex alpha0) {
  if (m < 0 || m > s.cutoff) throw std::invalid_argument("q_m_oracle: m outside the Fock cutoff");
  const Eigen::MatrixXcd Dm = displacement_matrix(-alpha0, s.cutoff);
  const Eigen::MatrixXcd Dp = displacement_matrix(alpha0, s.cutoff);
  const Eigen::VectorXcd a = Dm.col(m) / std::sqrt(2.0);
  const Eigen::VectorXcd b = -Dp.col(m) / std::sqrt(2.0);
  // rho^{T_q} has ee and gg blocks unchanged and the eg/ge blocks swapped.
  const Complex v = a.dot(s.block(0, 0) * a) + a.dot(s.block(1, 0) * b) + b.dot(s.block(0, 1) * a) +
                    b.dot(s.block(1, 1) * b);
  return v.real();
}

double witness_BN_oracle(const JointFockState& s, Complex alpha0, int m_max) {
  const Eigen::MatrixXcd Dm = displacement_matrix(-alpha0, s.cutoff);
  const Eigen::MatrixXcd Dp = displacement_matrix(alpha0, s.cutoff);
  const Eigen::MatrixXcd ee = s.block(0, 0), gg = s.block(1, 1), eg = s.block(0, 1), ge = s.block(1, 0);
  double bound = 0.0;
  for (int m = 0; m <= std::min(m_max, s.cutoff); ++m) {
    const Eigen::VectorXcd a = Dm.col(m) / std::sqrt(2.0);
    const Eigen::VectorXcd b = -Dp.col(m) / std::sqrt(2.0);
    const double q = (a.dot(ee * a) + a.dot(ge * b) + b.dot(eg * a) + b.dot(gg * b)).real();
    if (q < 0.0) bound -= 2.0 * q;
  }
  return bound;
}

namespace {

Eigen::MatrixXcd projected_block(const JointFockState& s, Projection sign) {
  const double sg = sign == Projection::minus ? -1.0 : 1.0;
  return 0.5 * (s.block(0, 0) + s.block(1, 1) + sg * (s.block(0, 1) + s.block(1, 0)));
}

}  // namespace

double projection_probability_oracle(const JointFockState& s, Projection sign) {
  return projected_block(s, sign).trace().real();
}

double nonclassicality_W_oracle(const JointFockState& s) {
  const Eigen::MatrixXcd minus = projected_block(s, Projection::minus);
  double parity = 0.0;
  for (Eigen::Index n = 0; n < minus.rows(); ++n) parity += (n % 2 ? -1.0 : 1.0) * minus(n, n).real();
  return std::max(0.0, -2.0 * parity);
}

ScanTable scan(const ScanSpec& spec, unsigned threads) {
  if (spec.Na.empty() || spec.g0t.empty()) throw std::invalid_argument("scan: grids must be non-empty");
  if (!(spec.g0 > 0.0)) throw std::invalid_argument("scan: g0 must be positive");
  const std::size_t nt = spec.g0t.size();
  ScanTable table;
  table.rows.resize(spec.Na.size() * nt);
  parallel_for(table.rows.size(), threads, [&](std::size_t idx) {
    const double Na = spec.Na[idx / nt];
    const double g0t = spec.g0t[idx % nt];
    const ScenarioPoint p = scenario(spec.g0, spec.kappa, spec.gamma, Na, g0t / spec.g0);
    ScanRow& row = table.rows[idx];
    row.Na = Na;
    row.g0t = g0t;
    row.alpha0_im = p.alpha0.imag();
    row.w = p.w;
    row.BN = witness_BN(p);
    row.W_metric = nonclassicality_W(p);
    row.P_minus = projection_probability(p, Projection::minus);
  });

  if (!spec.oracle_max_Na) return table;
  std::vector<std::size_t> oracle_rows;
  for (std::size_t i = 0; i < spec.Na.size(); ++i) {
    if (spec.Na[i] <= *spec.oracle_max_Na) oracle_rows.push_back(i);
  }
  std::vector<std::size_t> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spec.g0t[a] < spec.g0t[b]; });
  const double t_max = spec.g0t[order.back()] / spec.g0;

  parallel_for(oracle_rows.size(), threads, [&](std::size_t k) {
    const std::size_t i = oracle_rows[k];
    const double Na = spec.Na[i];
    const ScenarioPoint last = scenario(spec.g0, spec.kappa, spec.gamma, Na, t_max);
    const SystemConfig config = scenario_config(last);
    std::vector<double> neg(nt);
    for (int cutoff = initial_cutoff(Na, std::abs(last.alpha0));; cutoff *= 2) {
      if (cutoff > 1024) throw TruncationError("scan: Fock cutoff search exceeded 1024 levels");
      JointFockState state = product_state(qubit_plus(), thermal_state(Na, cutoff).rho);
      double t_prev = 0.0;
      for (std::size_t j : order) {
        const double t = spec.g0t[j] / spec.g0;
        state = integrate(state, config, t_prev, t);
        t_prev = t;
        neg[j] = negativity(state);
      }
      if (state.tail_estimate() < 1e-10) break;
    }
    for (std::size_t j = 0; j < nt; ++j) table.rows[i * nt + j].negativity_oracle = neg[j];
  });
  return table;
}

void write_csv(std::ostream& out, const ScanTable& table) {
  out << "Na,g0t,alpha0_im,w,BN,W_metric,P_minus,negativity_oracle\n";
  for (const ScanRow& r : table.rows) {
    out << format_g12(r.Na) << ',' << format_g12(r.g0t) << ',' << format_g12(r.alpha0_im) << ','
        << format_g12(r.w) << ',' << format_g12(r.BN) << ',' << format_g12(r.W_metric) << ','
        << format_g12(r.P_minus) << ',';
    if (r.negativity_oracle) out << format_g12(*r.negativity_oracle);
    out << '\n';
  }
}

}  // namespace qcdsim
