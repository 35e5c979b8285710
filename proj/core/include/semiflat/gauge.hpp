#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "semiflat/grid.hpp"
#include "semiflat/matalg3.hpp"

namespace semiflat {

enum class RealityMode { Holomorphic, EuclideanSU21, UltrahyperbolicSL3R };
std::string_view to_string(RealityMode m);

/// Sign parameter epsilon of the Tzitzeica and Toda equations.
enum class Sign { Plus = 1, Minus = -1 };
inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// First partial derivatives of the gauge fields at one point.
struct GaugeDerivatives {
  CMat3 dA_z_dzt = CMat3::Zero();
  CMat3 dA_zt_dz = CMat3::Zero();
  CMat3 dP_dzt = CMat3::Zero();
  CMat3 dQ_dz = CMat3::Zero();
  CMat3 dP_dz = CMat3::Zero();
  CMat3 dQ_dzt = CMat3::Zero();
};

/// Connection components (A_z, A_zt) and Higgs pair (P, Q) at one point.
/// In Euclidean mode zt stands for zbar and A_zt = star(A_z).
struct GaugeData {
  CMat3 A_z = CMat3::Zero();
  CMat3 A_zt = CMat3::Zero();
  CMat3 P = CMat3::Zero();
  CMat3 Q = CMat3::Zero();
  std::optional<GaugeDerivatives> derivatives;
  RealityMode mode = RealityMode::Holomorphic;

  /// Throws MissingDerivatives when the slots are empty.
  const GaugeDerivatives& require_derivatives() const;
  /// Conjugates every field by g (A -> g^-1 A g + g^-1 dg with constant g).
  GaugeData conjugated(const CMat3& g) const;
};

/// Value and first/mixed derivatives of a scalar field in the (z, zt) pair.
struct FieldJet {
  Complex value = 0.0;
  Complex d_z = 0.0;
  Complex d_zt = 0.0;
  Complex d_zzt = 0.0;
};

/// Pointwise data of a Euclidean affine sphere: real psi, cubic differential
/// U and its conjugate partner Ut (= conj U in Euclidean mode).
struct AffineSphereJet {
  double psi = 0.0;
  Complex psi_z = 0.0;
  Complex psi_zbar = 0.0;
  Complex psi_zzbar = 0.0;
  Complex U = 0.0;
  Complex Ut = 0.0;
  Complex U_z = 0.0;     ///< only needed by build_first_ansatz
  Complex Ut_zbar = 0.0;
};

/// Holomorphic Tzitzeica gauge: P = E13, Q = e^u E31.
GaugeData build_tzitzeica_ansatz(Complex u, Complex u_z);
GaugeData build_tzitzeica_ansatz(const FieldJet& u);

/// Affine sphere fields with Q = (e^{psi/2}/sqrt2) E13 and P = -star(Q).
/// Throws RealityViolation in Euclidean mode if Ut != conj(U) or
/// psi_zbar != conj(psi_z).
GaugeData build_affine_sphere_ansatz(double psi, Complex psi_z, Complex psi_zbar, Complex U,
                                     Complex Ut, RealityMode mode = RealityMode::EuclideanSU21,
                                     double tol = kDefaultTol);
GaugeData build_affine_sphere_ansatz(const AffineSphereJet& jet,
                                     RealityMode mode = RealityMode::EuclideanSU21,
                                     double tol = kDefaultTol);

/// Gauge with A_zt = 0 and both Higgs fields cyclic.
GaugeData build_wang_ansatz(Complex u, Complex u_z);
GaugeData build_wang_ansatz(const FieldJet& u);

/// Euclidean gauge with diagonal connection; P = -A_wbar, Q = A_w.
GaugeData build_first_ansatz(double psi, Complex psi_z, Complex U);
GaugeData build_first_ansatz(const AffineSphereJet& jet);

struct HitchinResidual {
  CMat3 R1;  ///< D_z Q
  CMat3 R2;  ///< D_zt P
  CMat3 R3;  ///< F_{z zt} + [P, Q]
  double max_abs() const;
};
HitchinResidual hitchin_residual(const GaugeData& gd);

/// Coefficients of [D_z + lambda P, Q + lambda D_zt] = C0 + lambda C1 + lambda^2 C2.
struct LaxCoefficients {
  CMat3 C0, C1, C2;
};
LaxCoefficients lax_commutator_coeffs(const GaugeData& gd);

/// Raw traces behind the three conditions characterising affine spheres.
struct Theorem11Report {
  bool c1 = false, c2 = false, c3 = false;
  bool degenerate = false;  ///< quartic trace vanishes: Liouville stratum (U = 0)
  Complex tr_QQs;           ///< Tr(Q Q*)
  Complex tr_DQs2;          ///< Tr((D_z Q*)^2)
  Complex tr_DQs2_DQ2;      ///< Tr((D_z Q*)^2 (D_zbar Q)^2)
  Complex c3_value;
  double tol = kDefaultTol;
  bool all() const { return c1 && c2 && c3; }
};
Theorem11Report check_theorem11(const GaugeData& gd, double tol = kDefaultTol);

struct Prop42Report {
  bool i = false, ii = false, iii = false;
  Complex tr_PQ;
  Complex tr_DP2;       ///< Tr((D_z P)^2)
  Complex tr_DQ2;       ///< Tr((D_zt Q)^2)
  Complex tr_DP2_DQ2;   ///< Tr((D_z P)^2 (D_zt Q)^2)
  Complex iii_value;
  double tol = kDefaultTol;
  RealityMode mode = RealityMode::Holomorphic;
  bool all() const { return i && ii && iii; }
};
Prop42Report check_prop42(const GaugeData& gd, double tol = kDefaultTol);

enum class RealForm { TzitzeicaMinus, TzitzeicaPlus, Liouville };
std::string_view to_string(RealForm f);

/// Tr((D_x P)^2 (D_y Q)^2) whose sign selects the real form.
Complex real_form_indicator(const GaugeData& gd);
RealForm classify_real_form(const GaugeData& gd, double tol = kDefaultTol);

/// Fields of the Z3 Toda reduction with n = alpha_x, s = b e^{u - 3 alpha},
/// k = (c/b) e^{-2u + 3 alpha}. Throws DegenerateAnsatz when r or b is zero.
GaugeData build_toda_ansatz(double alpha, double alpha_x, double u, double u_x, double r,
                            double b, double c);

/// Real jet of the Toda potentials in ansatz coordinates (x, y).
struct TodaJet {
  double alpha = 0.0, alpha_x = 0.0, alpha_y = 0.0, alpha_xy = 0.0;
  double u = 0.0, u_x = 0.0, u_y = 0.0, u_xy = 0.0;
};
GaugeData build_toda_ansatz(const TodaJet& jet, double r, double b, double c);

/// Pointwise residuals of the two-component Toda system at interior nodes
/// (boundary nodes are set to zero).
std::pair<ScalarGrid, ScalarGrid> toda_residual(const ScalarGrid& u1, const ScalarGrid& u2,
                                                Sign eps1, Sign eps2);

/// Hitchin residual (max entry) of the Toda ansatz built from stencil jets of a
/// grid solution at interior nodes; the y axis of the grid runs opposite to
/// the ansatz coordinate. Boundary nodes are zero.
ScalarGrid toda_hitchin_residual(const ScalarGrid& u1, const ScalarGrid& u2, Sign eps1, Sign eps2);

nlohmann::ordered_json to_json(const Theorem11Report& r);
nlohmann::ordered_json to_json(const Prop42Report& r);
nlohmann::ordered_json to_json(const HitchinResidual& r);
nlohmann::ordered_json complex_to_json(Complex c);

}  // namespace semiflat
