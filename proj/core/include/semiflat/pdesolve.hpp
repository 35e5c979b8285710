#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"

namespace semiflat {

/// psi_{z zbar} + (1/2) e^psi + |U|^2 e^{-2 psi} at interior nodes; zero on
/// the Dirichlet boundary. Throws SingularU if a node sits on a pole of U.
ScalarGrid affine_sphere_residual(const ScalarGrid& psi, const CubicDifferential& U);

struct NewtonOptions {
  double tol = 1e-8;
  int max_iterations = 50;
  int max_halvings = 30;
  double overflow_guard = 50.0;
};

struct NewtonStats {
  int iterations = 0;
  std::vector<double> residual_history;  ///< sup-norm before each step and after the last
  std::vector<int> halvings;             ///< step halvings taken per iteration
  double final_residual = 0.0;
};

struct AffineSphereSolution {
  ScalarGrid psi;
  NewtonStats stats;
};

/// Damped Newton on the 5-point discretisation. Boundary values are taken
/// from `boundary` (interior entries ignored); interior starts from `init`.
/// Throws NonConvergenceError, SingularU or Blowup.
AffineSphereSolution solve_affine_sphere(const CubicDifferential& U, const ScalarGrid& boundary,
                                         const ScalarGrid& init, const NewtonOptions& opt = {});

/// Discrete harmonic function with the boundary values of `boundary`.
ScalarGrid harmonic_extension(const ScalarGrid& boundary);

/// Right-hand side F(x, y, u) of a hyperbolic system u_xy = F, one entry per component.
using GoursatRhs = std::function<void(double x, double y, std::span<const double> u,
                                      std::span<double> out)>;

/// Second-order Goursat marching of u_xy = F(x, y, u) from data on the
/// characteristics y = y0 (bottom[c][i]) and x = x0 (left[c][j]). Each new
/// node uses the cell-centre value of F at the averaged diagonal neighbours.
/// Throws Blowup once any |u| exceeds `guard`.
std::vector<ScalarGrid> goursat_march(const GridShape& shape,
                                      const std::vector<std::vector<double>>& bottom,
                                      const std::vector<std::vector<double>>& left,
                                      const GoursatRhs& rhs, double guard = 50.0);

/// u_xy = e^u - eps e^{-2u} (+ forcing(x, y) when given).
ScalarGrid tzitzeica_march(const GridShape& shape, std::span<const double> bottom,
                           std::span<const double> left, Sign eps,
                           const std::function<double(double, double)>& forcing = {},
                           double guard = 50.0);

/// Pointwise u_xy - e^u + eps e^{-2u} at interior nodes.
ScalarGrid tzitzeica_residual_grid(const ScalarGrid& u, Sign eps);

/// Marches the two-component Toda system whose residual is toda_residual.
std::pair<ScalarGrid, ScalarGrid> toda_march(const GridShape& shape,
                                             std::span<const double> u1_bottom,
                                             std::span<const double> u1_left,
                                             std::span<const double> u2_bottom,
                                             std::span<const double> u2_left, Sign eps1,
                                             Sign eps2, double guard = 50.0);

/// V(f) = e^f - (1/2) e^{-2f}.
double travelling_wave_potential(double f);

struct TravellingWaveProfile {
  std::vector<double> t;
  std::vector<double> f;
  std::vector<double> fp;
  double energy = 0.0;
  double max_energy_drift = 0.0;
};

/// Integrates f'' = -(e^f + e^{-2f}) from f(t_start) = f0 with
/// f'(t_start) = +sqrt(2 (E - V(f0))) and samples at `times` (either side of
/// t_start). Throws ForbiddenRegion when V(f0) > E.
TravellingWaveProfile travelling_wave_profile(double E, double f0, double t_start,
                                              std::span<const double> times, double tol = 1e-12);

/// Lift of a profile to psi(x, y) = f(2^{2/3} x) + (1/3) log 2, which solves
/// the affine sphere equation with U = 1. Needs profile samples at t = 2^{2/3} x_i.
ScalarGrid lift_travelling_wave(const TravellingWaveProfile& p, const GridShape& shape);
/// The sample times lift_travelling_wave expects for `shape`.
std::vector<double> travelling_wave_times(const GridShape& shape);

/// c(s) = -s^2 (psi_s^2/4 + psi_s/s + e^psi - e^{-2 psi}/s^6), with psi_s from
/// fourth-order differences on the (possibly non-uniform) s samples.
std::vector<double> radial_n3_first_integral(std::span<const double> s, std::span<const double> psi);
/// Same with psi_s supplied.
std::vector<double> radial_n3_first_integral(std::span<const double> s, std::span<const double> psi,
                                             std::span<const double> psi_s);

/// psi_ss = -psi_s/s - 4 e^{-2 psi}/s^6 - 2 e^psi: the radial n = 3 equation solved for psi_ss.
double radial_n3_rhs(double s, double psi, double psi_s);

struct RadialN3Solution {
  std::vector<double> s, psi, psi_s;
};
/// Integrates the radial n = 3 equation from (s_out[0], psi0, psi_s0).
RadialN3Solution integrate_radial_n3(double psi0, double psi_s0, std::span<const double> s_out,
                                     double tol = 1e-12);

/// Weights of the derivative of order `m` at x0 from nodes `x` (Fornberg).
std::vector<double> fd_weights(double x0, std::span<const double> x, int m);
/// First or second derivative of samples by 5-point stencils (shifted at ends).
std::vector<double> differentiate_samples(std::span<const double> x, std::span<const double> f,
                                          int order = 1);

nlohmann::ordered_json to_json(const NewtonStats& s);

}  // namespace semiflat
