#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "semiflat/error.hpp"
#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"
#include "semiflat/hessian.hpp"
#include "semiflat/matalg3.hpp"

namespace semiflat::testing {

/// e^psi = 4 / (1 + |z|^2)^2 solves the equation with U = 0.
inline double liouville_psi(double x, double y) {
  return std::log(4.0) - 2.0 * std::log1p(x * x + y * y);
}

inline Complex liouville_psi_z(double x, double y) {
  const Complex z(x, y);
  return -2.0 * std::conj(z) / (1.0 + std::norm(z));
}

inline ScalarGrid liouville_grid(const GridShape& s) {
  ScalarGrid g(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const Complex z = s.z(i, j);
      g(i, j) = liouville_psi(z.real(), z.imag());
    }
  }
  return g;
}

/// Least-squares slope of log(err) against log(h).
inline double fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Max |g| over the interior nodes shared with a grid `stride` times coarser,
/// so refinement studies compare the same physical points.
inline double max_on_coarse_nodes(const ScalarGrid& g, int stride) {
  const auto& s = g.shape();
  double m = 0.0;
  for (int j = 0; j < s.ny; j += stride)
    for (int i = 0; i < s.nx; i += stride)
      if (!s.is_boundary(i, j) && i > 0 && i < s.nx - 1) m = std::max(m, std::abs(g(i, j)));
  return m;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  Complex complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
  CMat3 matrix(double r = 1.0) {
    CMat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = complex(r);
    return m;
  }
  /// Invertible, reasonably conditioned.
  CMat3 invertible() {
    for (;;) {
      CMat3 g = CMat3::Identity() + 0.5 * matrix();
      if (std::abs(g.determinant()) > 0.3) return g;
    }
  }
  CMat3 unimodular() {
    CMat3 g = invertible();
    return g / std::pow(g.determinant(), 1.0 / 3.0);
  }
  /// exp of a random su(2,1) element: preserves the star operation.
  CMat3 su21_group() {
    const CMat3 m = 0.4 * matrix();
    CMat3 x = 0.5 * (m + star(m));
    x -= (x.trace() / 3.0) * CMat3::Identity();
    return x.exp();
  }
  GaugeData gauge_data(RealityMode mode = RealityMode::Holomorphic) {
    GaugeData gd;
    gd.A_z = matrix();
    gd.A_zt = matrix();
    gd.P = matrix();
    gd.Q = matrix();
    gd.derivatives = GaugeDerivatives{matrix(), matrix(), matrix(), matrix(), matrix(), matrix()};
    gd.mode = mode;
    return gd;
  }
  /// Point data of an affine sphere: psi_zzbar is fixed by the equation.
  AffineSphereJet affine_sphere_jet() {
    AffineSphereJet j;
    j.psi = uniform(-1.0, 1.0);
    j.psi_z = complex();
    j.psi_zbar = std::conj(j.psi_z);
    do {
      j.U = complex();
    } while (std::abs(j.U) < 0.1);
    j.Ut = std::conj(j.U);
    j.U_z = complex();
    j.Ut_zbar = std::conj(j.U_z);
    j.psi_zzbar = -0.5 * std::exp(j.psi) - std::norm(j.U) * std::exp(-2.0 * j.psi);
    return j;
  }
  /// Point data of a holomorphic Tzitzeica field: u_{z zt} = e^u - e^{-2u}.
  FieldJet tzitzeica_jet() {
    FieldJet u;
    u.value = complex(0.7);
    u.d_z = complex();
    u.d_zt = complex();
    u.d_zzt = std::exp(u.value) - std::exp(-2.0 * u.value);
    return u;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Upper unit hemisphere as a graph over the unit disk.
inline GraphFunction sphere_graph() {
  using Vec = GraphFunction::Vec;
  using Mat = GraphFunction::Mat;
  return GraphFunction(
      2, [](const Vec& x) { return std::sqrt(1.0 - x.squaredNorm()); },
      [](const Vec& x) -> Vec { return -x / std::sqrt(1.0 - x.squaredNorm()); },
      [](const Vec& x) -> Mat {
        const double v = std::sqrt(1.0 - x.squaredNorm());
        return -Mat::Identity(2, 2) / v - x * x.transpose() / (v * v * v);
      });
}

/// Legendre dual of the hemisphere, w(p) = -sqrt(1 + |p|^2).
inline double sphere_dual(double px, double py) { return -std::sqrt(1.0 + px * px + py * py); }

}  // namespace semiflat::testing
