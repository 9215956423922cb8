#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qcdsim {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an adaptive integrator cannot reach its tolerance.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (e^z - 1) / z, accurate near z = 0.
Complex phi1(Complex z);

/// Adaptive Gauss-Kronrod (7/15) integral of a real-to-complex integrand on
/// [a, b]. Bisection continues until the Kronrod error estimate drops below
/// `abs_tol` or `max_depth` levels are exhausted.
template <typename F>
Complex integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                  unsigned max_depth = 24) {
  if (b <= a) return Complex{0.0, 0.0};
  // boost's tolerance is relative to the integral's L1 norm; scale it so the
  // absolute target is honoured for small integrands as well.
  double error = 0.0;
  double l1 = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  Complex value = GK::integrate(f, a, b, 0, 1e-300, &error, &l1);
  if (error <= abs_tol) return value;
  const double rel = l1 > 0.0 ? abs_tol / l1 : abs_tol;
  value = GK::integrate(f, a, b, max_depth, rel, &error, &l1);
  return value;
}

/// Splits [0, n) into contiguous chunks and runs `body(i)` for every index on
/// up to `threads` workers. `body` must only write to state owned by index i.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Worker count from an explicit request, else QCDSIM_THREADS, else 1.
unsigned resolve_threads(int requested);

/// Shortest round-trip decimal, capped at 12 significant digits.
std::string format_g12(double value);

/// Full-precision (17 significant digits) decimal.
std::string format_g17(double value);

}  // namespace qcdsim
