#include "semiflat/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "semiflat/error.hpp"

namespace semiflat {

namespace odeint = boost::numeric::odeint;

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

OdeTrajectory integrate_adaptive(const OdeRhs& rhs, const std::vector<double>& y0,
                                 std::span<const double> times, const OdeOptions& opt,
                                 const OdeGuard& guard) {
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "no output times");
  if (!all_finite(y0)) throw Error(ErrorCode::InvalidArgument, "non-finite initial state");
  double dir = 0.0;
  if (times.size() > 1) dir = times[1] > times[0] ? 1.0 : -1.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if ((times[k] - times[k - 1]) * dir <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "output times must be strictly monotone");
    }
  }

  using State = std::vector<double>;
  auto system = [&rhs](const State& x, State& dxdt, double t) {
    rhs(t, std::span<const double>(x), std::span<double>(dxdt));
  };
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol,
                                         odeint::runge_kutta_fehlberg78<State>());

  OdeTrajectory out;
  State x = y0;
  double t = times[0];
  out.t.push_back(t);
  out.y.push_back(x);
  out.stop_t = t;
  out.stop_y = x;
  if (guard && !guard(t, x)) {
    out.stopped = true;
    return out;
  }

  double dt = dir * std::abs(opt.initial_step);
  State trial(x.size());
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    while ((target - t) * dir > 0.0) {
      if (++out.steps > opt.max_steps) {
        throw Error(ErrorCode::StepUnderflow, "step budget exhausted at t = " + std::to_string(t));
      }
      bool last = false;
      const double dt_free = dt;
      if ((t + dt - target) * dir >= 0.0) {
        dt = target - t;
        last = true;
      }
      const double floor = opt.min_step * std::max(1.0, std::abs(t));
      if (std::abs(dt) < floor && !last) {
        throw Error(ErrorCode::StepUnderflow, "step size underflow at t = " + std::to_string(t));
      }
      trial = x;
      double tt = t;
      double hh = dt;
      const auto res = stepper.try_step(system, trial, tt, hh);
      if (res == odeint::fail) {
        ++out.rejected;
        dt = hh;
        continue;
      }
      if (!all_finite(trial)) {
        ++out.rejected;
        dt *= 0.25;
        continue;
      }
      if (guard && !guard(tt, trial)) {
        out.stopped = true;
        return out;
      }
      x.swap(trial);
      t = last ? target : tt;
      out.stop_t = t;
      out.stop_y = x;
      // A step clipped to hit an output time says nothing about the free step size.
      dt = last ? dt_free : hh;
    }
    out.t.push_back(t);
    out.y.push_back(x);
  }
  return out;
}

}  // namespace semiflat
