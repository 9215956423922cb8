#include "qcdsim/fock_oracle.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcdsim/ode.hpp"

namespace qcdsim {

Eigen::MatrixXcd JointFockState::block(int j, int k) const {
  const int L = levels();
  return rho.block(j * L, k * L, L, L);
}

double JointFockState::tail_estimate() const {
  const int L = levels();
  double tail = 0.0;
  for (int q = 0; q < 2; ++q) {
    for (int n = std::max(0, cutoff - 1); n <= cutoff; ++n) tail += rho(q * L + n, q * L + n).real();
  }
  return tail;
}

Eigen::MatrixXcd displacement_matrix(Complex beta, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("displacement_matrix: cutoff must be >= 0");
  const int L = cutoff + 1;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(L, L);
  const double r = std::abs(beta);
  if (r == 0.0) return Eigen::MatrixXcd::Identity(L, L);
  const double x = r * r;
  const double theta = std::arg(beta);

  // For each offset k, f_n = sqrt(n!/(n+k)!) r^k e^{-x/2} L_n^{(k)}(x) obeys the
  // Laguerre recurrence with the factorial ratio folded into each step, so
  // every iterate stays bounded by 1 and nothing overflows.
  std::vector<double> f(L);
  for (int k = 0; k < L; ++k) {
    const int count = L - k;
    f[0] = std::exp(k * std::log(r) - 0.5 * x - 0.5 * std::lgamma(k + 1.0));
    if (count > 1) f[1] = f[0] * (1.0 + k - x) / std::sqrt(k + 1.0);
    for (int n = 1; n + 1 < count; ++n) {
      const double r_n = std::sqrt((n + 1.0) / (n + k + 1.0));
      const double r_nm1 = std::sqrt(static_cast<double>(n) / (n + k));
      f[n + 1] = ((2.0 * n + 1.0 + k - x) * f[n] * r_n - (n + k) * f[n - 1] * r_n * r_nm1) / (n + 1.0);
    }
    const Complex below = std::polar(1.0, k * theta);
    const Complex above = (k % 2 ? -1.0 : 1.0) * std::conj(below);
    for (int n = 0; n < count; ++n) {
      D(n + k, n) = f[n] * below;
      if (k > 0) D(n, n + k) = f[n] * above;
    }
  }
  return D;
}

double column_norm_defect(const Eigen::MatrixXcd& op) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < op.cols(); ++c) {
    worst = std::max(worst, std::abs(1.0 - op.col(c).squaredNorm()));
  }
  return worst;
}

OscillatorState thermal_state(double Na, int cutoff) {
  if (!(Na >= 0.0)) throw std::invalid_argument("thermal_state: Na must be >= 0");
  if (cutoff < 0) throw std::invalid_argument("thermal_state: cutoff must be >= 0");
  const int L = cutoff + 1;
  OscillatorState s;
  s.rho = Eigen::MatrixXcd::Zero(L, L);
  const double ratio = Na / (Na + 1.0);
  double p = 1.0 / (Na + 1.0);
  double total = 0.0;
  for (int n = 0; n < L; ++n) {
    s.rho(n, n) = p;
    total += p;
    p *= ratio;
  }
  s.tail_weight = std::max(0.0, 1.0 - total);
  s.rho /= total;
  return s;
}

JointFockState product_state(const QubitState& qubit, const Eigen::MatrixXcd& osc) {
  validate_qubit_state(qubit);
  if (osc.rows() != osc.cols() || osc.rows() < 1) {
    throw std::invalid_argument("product_state: oscillator matrix must be square");
  }
  JointFockState s;
  s.cutoff = static_cast<int>(osc.rows()) - 1;
  const int L = s.levels();
  s.rho.resize(2 * L, 2 * L);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) s.rho.block(j * L, k * L, L, L) = qubit(j, k) * osc;
  }
  return s;
}

void validate_state(const JointFockState& s) {
  constexpr double tol = 1e-10;
  const int dim = 2 * s.levels();
  if (s.rho.rows() != dim || s.rho.cols() != dim) {
    throw std::invalid_argument("joint state: matrix size does not match the cutoff");
  }
  if ((s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("joint state is not Hermitian");
  }
  if (std::abs(s.rho.trace() - 1.0) > tol) throw std::invalid_argument("joint state trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("joint state has a negative eigenvalue");
  }
}

namespace {

struct QubitChannel {
  double down = 0.0;  // coefficient of D[sigma-]
  double up = 0.0;    // coefficient of D[sigma+]
  double z = 0.0;     // coefficient of D[sigma3]
};

QubitChannel qubit_channel(const SystemConfig& c) {
  const RateInputs& r = c.rates();
  if (r.mode == RateMode::exchanged_qed) {
    const double g1 = c.derived().gamma1_eff.value_or(0.0);
    const double g2 = c.derived().gamma2_eff.value_or(0.0);
    return {0.5 * g2, 0.5 * g2, 0.25 * g1};
  }
  return {0.5 * r.gamma1 * (r.Nq + 1.0), 0.5 * r.gamma1 * r.Nq, 0.25 * r.gamma2};
}

class Liouvillian {
 public:
  explicit Liouvillian(const SystemConfig& c, int cutoff)
      : profile_(c.profile()), L_(cutoff + 1), channel_(qubit_channel(c)) {
    const RateInputs& r = c.rates();
    cool_ = 0.5 * r.kappa * (r.Na + 1.0);
    heat_ = 0.5 * r.kappa * r.Na;
    sq_.resize(L_ + 1);
    for (int n = 0; n <= L_; ++n) sq_[n] = std::sqrt(static_cast<double>(n));
  }

  void operator()(const std::vector<Complex>& x, std::vector<Complex>& dx, double t) const {
    const int dim = 2 * L_;
    Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> out(dx.data(), dim, dim);
    const double g = profile_.amplitude(t);
    const Complex lower = std::polar(1.0, -profile_.nu() * t);  // coefficient of a
    const Complex raise = std::conj(lower);                     // coefficient of a^dag
    const int N = L_ - 1;
    auto level_weight = [N](int m) { return m < N ? m + 1.0 : 0.0; };  // truncated a a^dag

    for (int j = 0; j < 2; ++j) {
      const double sj = j == 0 ? 1.0 : -1.0;
      for (int k = 0; k < 2; ++k) {
        const double sk = k == 0 ? 1.0 : -1.0;
        auto M = [&](int m, int n) { return rho(j * L_ + m, k * L_ + n); };
        for (int n = 0; n < L_; ++n) {
          for (int m = 0; m < L_; ++m) {
            Complex XM{0.0, 0.0}, MX{0.0, 0.0};
            if (m < N) XM += lower * sq_[m + 1] * M(m + 1, n);
            if (m > 0) XM += raise * sq_[m] * M(m - 1, n);
            if (n > 0) MX += lower * sq_[n] * M(m, n - 1);
            if (n < N) MX += raise * sq_[n + 1] * M(m, n + 1);
            Complex v = -kI * g * (sj * XM - sk * MX);
            const Complex here = M(m, n);
            if (cool_ != 0.0) {
              Complex jump = (m < N && n < N) ? 2.0 * sq_[m + 1] * sq_[n + 1] * M(m + 1, n + 1) : 0.0;
              v += cool_ * (jump - (m + n + 0.0) * here);
            }
            if (heat_ != 0.0) {
              Complex jump = (m > 0 && n > 0) ? 2.0 * sq_[m] * sq_[n] * M(m - 1, n - 1) : 0.0;
              v += heat_ * (jump - (level_weight(m) + level_weight(n)) * here);
            }
            out(j * L_ + m, k * L_ + n) = v;
          }
        }
      }
    }

    const QubitChannel& q = channel_;
    if (q.down == 0.0 && q.up == 0.0 && q.z == 0.0) return;
    const auto ee = rho.block(0, 0, L_, L_);
    const auto gg = rho.block(L_, L_, L_, L_);
    const Eigen::MatrixXcd flow = 2.0 * q.down * ee - 2.0 * q.up * gg;
    out.block(0, 0, L_, L_) -= flow;
    out.block(L_, L_, L_, L_) += flow;
    const double coherence = q.down + q.up + 4.0 * q.z;
    out.block(0, L_, L_, L_) -= coherence * rho.block(0, L_, L_, L_);
    out.block(L_, 0, L_, L_) -= coherence * rho.block(L_, 0, L_, L_);
  }

 private:
  const CouplingProfile& profile_;
  int L_;
  QubitChannel channel_;
  double cool_ = 0.0;
  double heat_ = 0.0;
  std::vector<double> sq_;
};

}  // namespace

JointFockState integrate(const JointFockState& initial, const SystemConfig& config, double t0,
                         double t1) {
  if (t1 < t0) throw std::invalid_argument("fock integrate: t1 must be >= t0");
  JointFockState s = initial;
  if (t1 == t0) return s;
  const int dim = 2 * s.levels();
  if (s.rho.rows() != dim || s.rho.cols() != dim) {
    throw std::invalid_argument("fock integrate: matrix size does not match the cutoff");
  }

  using State = std::vector<Complex>;
  State x(s.rho.data(), s.rho.data() + s.rho.size());
  const Liouvillian rhs(config, s.cutoff);
  namespace odeint = boost::numeric::odeint;
  const OdeTolerance tol{1e-13, 1e-10, 1e-14};
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());

  std::vector<double> knots{t0};
  for (double b : config.profile().breakpoints(t1)) {
    if (b > t0) knots.push_back(b);
  }
  knots.push_back(t1);
  double dt = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i] <= knots[i - 1]) continue;
    dt = dt > 0.0 ? std::min(dt, knots[i] - knots[i - 1]) : 1e-3 * (knots[i] - knots[i - 1]);
    integrate_to(stepper, rhs, x, knots[i - 1], knots[i], dt, tol,
                 "Fock cutoff " + std::to_string(s.cutoff));
  }
  s.rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), dim, dim);
  return s;
}

CMatrix cmatrix_extract(const JointFockState& s, const Eigen::MatrixXcd& D) {
  const int L = s.levels();
  if (D.rows() != L || D.cols() != L) {
    throw std::invalid_argument("cmatrix_extract: displacement matrix has the wrong size");
  }
  auto trace_with = [&](int j, int k) {
    return (s.rho.block(j * L, k * L, L, L).cwiseProduct(D.transpose())).sum();
  };
  return {trace_with(0, 0), trace_with(1, 1), trace_with(0, 1), trace_with(1, 0)};
}

CMatrix cmatrix_extract(const JointFockState& s, Complex beta) {
  return cmatrix_extract(s, displacement_matrix(beta, s.cutoff));
}

double negativity(const JointFockState& s) {
  const int L = s.levels();
  Eigen::MatrixXcd pt = s.rho;
  pt.block(0, L, L, L) = s.rho.block(L, 0, L, L);
  pt.block(L, 0, L, L) = s.rho.block(0, L, L, L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < 0.0) neg -= es.eigenvalues()(i);
  }
  return 2.0 * neg;
}

JointFockState apply_controlled_displacement(const JointFockState& s, Complex alpha) {
  const int L = s.levels();
  const Eigen::MatrixXcd De = displacement_matrix(alpha, s.cutoff);
  const Eigen::MatrixXcd Dg = displacement_matrix(-alpha, s.cutoff);
  const Eigen::MatrixXcd* U[2] = {&De, &Dg};
  JointFockState out = s;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      out.rho.block(j * L, k * L, L, L) = *U[j] * s.rho.block(j * L, k * L, L, L) * U[k]->adjoint();
    }
  }
  return out;
}

int initial_cutoff(double Na, double alpha_max) {
  return static_cast<int>(std::ceil(4.0 * (Na + 1.0) + 16.0 * alpha_max * alpha_max + 20.0));
}

OracleRun evolve_converged(const QubitState& qubit, double Na, const SystemConfig& config,
                           double t, double alpha_max, int max_cutoff) {
  OracleRun run;
  for (int cutoff = initial_cutoff(Na, alpha_max);; cutoff *= 2) {
    if (cutoff > max_cutoff) {
      throw TruncationError("Fock cutoff search exceeded " + std::to_string(max_cutoff) + " levels");
    }
    ++run.attempts;
    const JointFockState start = product_state(qubit, thermal_state(Na, cutoff).rho);
    run.state = integrate(start, config, t);
    if (run.state.tail_estimate() < 1e-10) return run;
  }
}

void write_state(std::ostream& out, const JointFockState& s) {
  out << "# cutoff = " << s.cutoff << '\n'
      << "# basis = qubit {e, g} x fock {0.." << s.cutoff << "}, index = q * " << s.levels()
      << " + n\n"
      << "row col re im\n";
  for (Eigen::Index r = 0; r < s.rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.rho.cols(); ++c) {
      out << r << ' ' << c << ' ' << format_g17(s.rho(r, c).real()) << ' '
          << format_g17(s.rho(r, c).imag()) << '\n';
    }
  }
}

JointFockState read_state(std::istream& in) {
  JointFockState s;
  s.cutoff = -1;
  std::string line;
  int lineno = 0;
  bool have_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.find("cutoff") != std::string::npos && line.find("cutoff") < eq) {
        s.cutoff = std::stoi(line.substr(eq + 1));
        const int dim = 2 * s.levels();
        s.rho = Eigen::MatrixXcd::Zero(dim, dim);
      }
      continue;
    }
    if (!have_columns) {
      have_columns = true;
      if (line.rfind("row", 0) == 0) continue;
    }
    if (s.cutoff < 0) throw std::invalid_argument("state file: cutoff header missing");
    std::istringstream row(line);
    long r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> r >> c >> re >> im) || r < 0 || c < 0 || r >= s.rho.rows() || c >= s.rho.cols()) {
      throw std::invalid_argument("state file line " + std::to_string(lineno) + ": bad entry");
    }
    s.rho(r, c) = Complex{re, im};
  }
  if (s.cutoff < 0) throw std::invalid_argument("state file: cutoff header missing");
  return s;
}

}  // namespace qcdsim
