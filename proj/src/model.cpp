#include "qcdsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcdsim {

CouplingProfile CouplingProfile::constant(double g0, double nu) {
  if (!std::isfinite(g0) || !std::isfinite(nu)) {
    throw std::invalid_argument("coupling profile: non-finite g0 or nu");
  }
  CouplingProfile p;
  p.kind_ = Kind::constant;
  p.g0_ = g0;
  p.nu_ = nu;
  return p;
}

CouplingProfile CouplingProfile::piecewise(std::vector<Segment> segments, double nu) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!(s.t_end >= s.t_start) || !std::isfinite(s.amplitude)) {
      throw std::invalid_argument("coupling profile: segment " + std::to_string(i) +
                                  " has negative duration or bad amplitude");
    }
    if (i > 0 && s.t_start < segments[i - 1].t_end) {
      throw std::invalid_argument("coupling profile: segment " + std::to_string(i) +
                                  " overlaps or is out of order");
    }
  }
  CouplingProfile p;
  p.kind_ = Kind::piecewise;
  p.nu_ = nu;
  p.segments_ = std::move(segments);
  return p;
}

CouplingProfile CouplingProfile::sampled(std::vector<Sample> samples, double nu) {
  if (samples.size() < 2) {
    throw std::invalid_argument("coupling profile: need at least two samples");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw std::invalid_argument("coupling profile: sample times must increase strictly");
    }
  }
  CouplingProfile p;
  p.kind_ = Kind::sampled;
  p.nu_ = nu;
  p.samples_ = std::move(samples);
  return p;
}

double CouplingProfile::g0() const {
  switch (kind_) {
    case Kind::constant:
      return g0_;
    case Kind::piecewise: {
      double m = 0.0;
      for (const auto& s : segments_) m = std::max(m, std::abs(s.amplitude));
      return m;
    }
    case Kind::sampled: {
      double m = 0.0;
      for (const auto& s : samples_) m = std::max(m, std::abs(s.amplitude));
      return m;
    }
  }
  return 0.0;
}

double CouplingProfile::amplitude(double t) const {
  switch (kind_) {
    case Kind::constant:
      return t >= 0.0 ? g0_ : 0.0;
    case Kind::piecewise: {
      // first segment ending after t
      auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                 [](double x, const Segment& s) { return x < s.t_end; });
      if (it != segments_.end() && t >= it->t_start) return it->amplitude;
      return 0.0;
    }
    case Kind::sampled: {
      if (t < samples_.front().t || t > samples_.back().t) return 0.0;
      auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                 [](double x, const Sample& s) { return x < s.t; });
      if (it == samples_.end()) return samples_.back().amplitude;
      const Sample& hi = *it;
      const Sample& lo = *(it - 1);
      const double f = (t - lo.t) / (hi.t - lo.t);
      return lo.amplitude + f * (hi.amplitude - lo.amplitude);
    }
  }
  return 0.0;
}

std::vector<double> CouplingProfile::breakpoints(double t) const {
  std::vector<double> out;
  auto add = [&](double x) {
    if (x > 0.0 && x < t) out.push_back(x);
  };
  if (kind_ == Kind::piecewise) {
    for (const auto& s : segments_) {
      add(s.t_start);
      add(s.t_end);
    }
  } else if (kind_ == Kind::sampled) {
    for (const auto& s : samples_) add(s.t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// int_a^b e^{c s} ds
Complex exp_integral(Complex c, double a, double b) {
  const double len = b - a;
  return std::exp(c * a) * len * phi1(c * len);
}

}  // namespace

Complex CouplingProfile::moment(double t, Complex c) const {
  if (t <= 0.0) return Complex{0.0, 0.0};
  switch (kind_) {
    case Kind::constant:
      return g0_ * exp_integral(c, 0.0, t);
    case Kind::piecewise: {
      Complex sum{0.0, 0.0};
      for (const auto& s : segments_) {
        const double a = std::max(s.t_start, 0.0);
        const double b = std::min(s.t_end, t);
        if (b > a) sum += s.amplitude * exp_integral(c, a, b);
      }
      return sum;
    }
    case Kind::sampled:
      break;
  }
  Complex sum{0.0, 0.0};
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const double a = std::max(samples_[i - 1].t, 0.0);
    const double b = std::min(samples_[i].t, t);
    if (b <= a) continue;
    sum += integrate([&](double s) { return amplitude(s) * std::exp(c * s); }, a, b, 1e-13);
  }
  return sum;
}

Complex CouplingProfile::weighted_moment(double t, const std::function<Complex(double)>& weight,
                                         double abs_tol) const {
  if (t <= 0.0) return Complex{0.0, 0.0};
  std::vector<double> knots{0.0};
  for (double b : breakpoints(t)) knots.push_back(b);
  knots.push_back(t);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double a = knots[i - 1];
    const double b = knots[i];
    const double mid = 0.5 * (a + b);
    if (amplitude(mid) == 0.0 && kind_ != Kind::sampled) continue;
    sum += integrate(
        [&](double s) { return amplitude(s) * std::exp(kI * (nu_ * s)) * weight(s); }, a, b,
        abs_tol);
  }
  return sum;
}

std::string_view to_string(RateMode mode) {
  return mode == RateMode::standard ? "standard" : "exchanged-qed";
}

RateMode rate_mode_from_string(std::string_view name) {
  if (name == "standard") return RateMode::standard;
  if (name == "exchanged-qed") return RateMode::exchanged_qed;
  throw std::invalid_argument("unknown rate mode '" + std::string(name) + "'");
}

DerivedRates derive_rates(const RateInputs& r) {
  const auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("rates: ") + name + " must be finite and >= 0");
    }
  };
  check(r.kappa, "kappa");
  check(r.gamma1, "gamma1");
  check(r.gamma2, "gamma2");
  check(r.Na, "Na");
  check(r.Nq, "Nq");

  DerivedRates d;
  d.Delta = r.Na + 0.5;
  if (r.mode == RateMode::standard) {
    d.gamma = r.gamma1 * (r.Nq + 0.5) + r.gamma2;
    d.Gamma_c = r.gamma1 * (r.Nq + 1.0);
    d.Gamma_h = r.gamma1 * r.Nq;
  } else {
    const double g1 = r.gamma1 * (r.Nq + 0.5);
    const double g2 = 0.5 * r.gamma1 * (r.Nq + 0.5) + r.gamma2;
    d.gamma1_eff = g1;
    d.gamma2_eff = g2;
    d.gamma = g1 + g2;
    d.Gamma_c = g2;
    d.Gamma_h = g2;
  }
  return d;
}

double bose_einstein(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("bose_einstein: omega/T must be positive");
  }
  return 1.0 / std::expm1(x);
}

SystemConfig::SystemConfig(CouplingProfile profile, RateInputs rates)
    : profile_(std::move(profile)), rates_(rates), derived_(derive_rates(rates)) {}

Complex cavity_equilibrium_displacement(double Omega, double phi, double delta, double kappa) {
  if (Omega < 0.0 || kappa < 0.0) {
    throw std::invalid_argument("cavity displacement: Omega and kappa must be >= 0");
  }
  if (Omega == 0.0) return Complex{0.0, 0.0};
  const Complex denom{delta, -0.5 * kappa};
  if (denom == Complex{0.0, 0.0}) {
    throw std::domain_error("cavity displacement: delta = kappa = 0 with nonzero drive");
  }
  return -Omega * std::exp(kI * phi) / denom;
}

double cavity_phase_for_real_alpha0(double delta, double kappa) {
  // arg(alpha_0) = pi + phi - arg(delta - i kappa/2); set it to zero.
  const double phase = std::arg(Complex{delta, -0.5 * kappa}) - kPi;
  return std::remainder(phase, 2.0 * kPi);
}

}  // namespace qcdsim
