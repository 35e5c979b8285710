#pragma once

#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "semiflat/forms.hpp"
#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"
#include "semiflat/matalg3.hpp"

namespace semiflat {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using CoframeMatrix = Eigen::Matrix<Complex, 3, 6>;

/// Structure matrices of the frame N = (f, f_z, f_zbar) with dN/dz = Bz N,
/// dN/dzbar = Bzbar N.
struct StructureMatrices {
  CMat3 Bz;
  CMat3 Bzbar;
};
StructureMatrices structure_matrices(double psi, Complex psi_z, Complex psi_zbar, Complex U);

/// d_zbar Bz - d_z Bzbar + [Bz, Bzbar] from analytic point data
/// (U holomorphic). Equals diag(0, R, -R) with R the affine sphere residual.
CMat3 structure_curvature(const AffineSphereJet& jet);

/// Frame on the f = (0, 0, 1) point of a surface with metric e^{psi0} |dz|^2,
/// so that det(f, f_x, f_y) = e^{psi0}.
CMat3 default_base_frame(double psi0);

/// Frame of the unit sphere through inverse stereographic projection; it
/// solves the structure equations for psi = log 4 - 2 log(1 + |z|^2), U = 0.
CMat3 sphere_frame(Complex z);

struct FrameField {
  GridShape shape;
  std::vector<CMat3> N;
  int base_i = 0;
  int base_j = 0;
  const CMat3& at(int i, int j) const { return N[shape.index(i, j)]; }
  double min_abs_det = 0.0;
};

/// Integrates the structure equations from (base_i, base_j): first along the
/// base row in x, then along every column in y. RK4 steps with coefficients
/// interpolated linearly between nodes. Throws SingularFrame when
/// |det N| < det_guard at some node.
FrameField integrate_frame(const ScalarGrid& psi, const CubicDifferential& U, const CMat3& N0,
                           int base_i, int base_j, double det_guard = 1e-12);

/// Transports N0 around the grid rectangle with corners (i0, j0), (i1, j1)
/// (counter-clockwise) and returns max |N_end - N0|.
double loop_defect(const ScalarGrid& psi, const CubicDifferential& U, const CMat3& N0, int i0,
                   int j0, int i1, int j1);

/// r times the real part of the first row of N.
Eigen::Vector3d cone_point(const CMat3& N, double r);

/// The three (1,0)-forms e1, e2, e3 of the semi-flat metric at a point.
/// Real coordinates are ordered (x, y, Re w, Im w, Re xi, Im xi), where
/// (x, y) is the base chart with dz = dz_dx (dx + i dy).
struct CoframeSample {
  Complex z, w, xi;
  double psi = 0.0;
  Complex psi_z, U;
  Complex dz_dx = 1.0;
  /// Coefficients over (dz, dzbar, dw, dwbar, dxi, dxibar).
  CoframeMatrix complex_coeffs;
  /// Coefficients over the six real coordinate differentials.
  CoframeMatrix real_coeffs() const;
};
CoframeSample cy_coframe(Complex z, Complex w, Complex xi, double psi, Complex psi_z, Complex U,
                         Complex dz_dx = 1.0);

struct MetricSample {
  Mat6 g;      ///< symmetric, sum of Re(e_i conj e_i)
  Mat6 omega;  ///< antisymmetric, (i/2) sum e_i ^ conj e_i
};
/// Throws DegenerateFrame if g is not positive definite.
MetricSample assemble_g_omega(const CoframeSample& cs);

/// Almost complex structure making e1, e2, e3 type (1,0): e_i(J v) = i e_i(v).
Mat6 complex_structure(const CoframeSample& cs);

Form6 kahler_form(const CoframeSample& cs);
Form6 holomorphic_volume(const CoframeSample& cs);
/// Top coefficient ratio (Omega ^ conj Omega) / omega^3.
Complex volume_form_ratio(const CoframeSample& cs);

/// Fibre sample points: every combination of center +- half_width in each
/// of Re w, Im w, Re xi, Im xi (points_per_axis = 2) or an evenly spaced
/// lattice when points_per_axis > 2.
struct FibreBox {
  Complex w_center{1.0, 0.0};
  Complex xi_center{0.0, 0.0};
  double half_width = 0.5;
  int points_per_axis = 2;
};

struct Su3Residuals {
  double d_omega = 0.0;
  double d_Omega = 0.0;
  /// Largest d/dwbar of an Omega coefficient; zero because Omega is
  /// holomorphic in w.
  double dwbar_Omega = 0.0;
};
/// Exterior derivatives of omega and Omega by centred differences: second
/// order in the base with step (hx, hy), fourth order in the fibre with step hx.
/// Base nodes keep a two-node margin from the Dirichlet boundary.
Su3Residuals su3_structure_residuals(const ScalarGrid& psi, const CubicDifferential& U,
                                     const FibreBox& box = {});

/// Gauge-transforms (A_z + lambda P, A_zbar + Q / lambda) of the affine sphere
/// fields by g = diag(1, -sqrt2 e^{-psi/2}, -sqrt2 e^{-psi/2}) and returns the
/// max entry defect against (-Bz, -Bzbar).
double remark2_gauge_check(double psi, Complex psi_z, Complex U, double lambda = 1.0);

nlohmann::ordered_json to_json(const Su3Residuals& r);

}  // namespace semiflat
