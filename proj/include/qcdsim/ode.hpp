#pragma once

#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "qcdsim/numerics.hpp"

namespace qcdsim {

struct OdeTolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  double min_step = 1e-14;
};

/// Drives a controlled odeint stepper from t0 to t1, landing exactly on t1.
/// Throws IntegrationError when the step size collapses below
/// `tol.min_step * max(1, |t1|)`; `context` is appended to the message.
template <typename Stepper, typename System, typename State>
void integrate_to(Stepper& stepper, System&& system, State& x, double t0, double t1,
                  double& dt, const OdeTolerance& tol, const std::string& context) {
  namespace odeint = boost::numeric::odeint;
  double t = t0;
  const double floor = tol.min_step * std::max(1.0, std::abs(t1));
  if (dt <= 0.0) dt = (t1 - t0) / 16.0;
  while (t < t1) {
    double step = std::min(dt, t1 - t);
    const bool last = step >= t1 - t;
    const double t_before = t;
    odeint::controlled_step_result result = stepper.try_step(system, x, t, step);
    if (result == odeint::success) {
      if (last) t = t1;  // avoid rounding residue on the final step
      // try_step grows `step` after success; remember it unless the final
      // clipped step would shrink it artificially.
      if (!last || step > dt) dt = step;
      continue;
    }
    dt = step;
    if (dt < floor) {
      throw IntegrationError("step size underflow at t=" + format_g17(t_before) +
                             (context.empty() ? std::string() : " (" + context + ")"));
    }
  }
}

}  // namespace qcdsim
