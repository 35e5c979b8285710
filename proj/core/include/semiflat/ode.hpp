#pragma once

#include <functional>
#include <span>
#include <vector>

namespace semiflat {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Returns false to stop integration at the current state.
using OdeGuard = std::function<bool(double t, std::span<const double> y)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  /// Step underflow threshold, relative to max(1, |t|).
  double min_step = 1e-13;
  long max_steps = 5'000'000;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  long steps = 0;
  long rejected = 0;
  bool stopped = false;  ///< guard tripped before the last output time
  double stop_t = 0.0;   ///< last accepted time that passed the guard
  std::vector<double> stop_y;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration from (times[0], y0),
/// landing exactly on each requested time. Times must be strictly monotone
/// in one direction; backward integration is supported. Throws StepUnderflow
/// when the controller cannot make progress.
OdeTrajectory integrate_adaptive(const OdeRhs& rhs, const std::vector<double>& y0,
                                 std::span<const double> times, const OdeOptions& opt,
                                 const OdeGuard& guard = {});

}  // namespace semiflat
