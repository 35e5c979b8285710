#include "semiflat/gauge.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "semiflat/error.hpp"

namespace semiflat {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CMat3 E(int i, int j) { return matrix_unit(i, j); }

bool vanishes(Complex v, double scale, double tol) {
  return std::abs(v) <= tol * std::max(1.0, scale);
}

Complex tr(const CMat3& m) { return m.trace(); }

}  // namespace

std::string_view to_string(RealityMode m) {
  switch (m) {
    case RealityMode::Holomorphic:
      return "Holomorphic";
    case RealityMode::EuclideanSU21:
      return "EuclideanSU21";
    case RealityMode::UltrahyperbolicSL3R:
      return "UltrahyperbolicSL3R";
  }
  return "?";
}

std::string_view to_string(RealForm f) {
  switch (f) {
    case RealForm::TzitzeicaMinus:
      return "TzitzeicaMinus";
    case RealForm::TzitzeicaPlus:
      return "TzitzeicaPlus";
    case RealForm::Liouville:
      return "Liouville";
  }
  return "?";
}

const GaugeDerivatives& GaugeData::require_derivatives() const {
  if (!derivatives) throw Error(ErrorCode::MissingDerivatives, "gauge derivative slots are empty");
  return *derivatives;
}

GaugeData GaugeData::conjugated(const CMat3& g) const {
  const CMat3 gi = g.inverse();
  auto c = [&](const CMat3& m) -> CMat3 { return gi * m * g; };
  GaugeData out = *this;
  out.A_z = c(A_z);
  out.A_zt = c(A_zt);
  out.P = c(P);
  out.Q = c(Q);
  if (derivatives) {
    const auto& d = *derivatives;
    out.derivatives = GaugeDerivatives{c(d.dA_z_dzt), c(d.dA_zt_dz), c(d.dP_dzt),
                                       c(d.dQ_dz),    c(d.dP_dz),    c(d.dQ_dzt)};
  }
  return out;
}

GaugeData build_tzitzeica_ansatz(Complex u, Complex u_z) {
  const Complex eu = std::exp(u);
  GaugeData gd;
  gd.P = E(1, 3);
  gd.Q = eu * E(3, 1);
  gd.A_z = u_z * (E(1, 1) - E(2, 2)) + E(2, 1) + E(3, 2);
  gd.A_zt = std::exp(-2.0 * u) * E(1, 2) + eu * E(2, 3);
  return gd;
}

GaugeData build_tzitzeica_ansatz(const FieldJet& u) {
  GaugeData gd = build_tzitzeica_ansatz(u.value, u.d_z);
  const Complex eu = std::exp(u.value);
  GaugeDerivatives d;
  d.dA_z_dzt = u.d_zzt * (E(1, 1) - E(2, 2));
  d.dA_zt_dz = -2.0 * u.d_z * std::exp(-2.0 * u.value) * E(1, 2) + u.d_z * eu * E(2, 3);
  d.dQ_dz = u.d_z * eu * E(3, 1);
  d.dQ_dzt = u.d_zt * eu * E(3, 1);
  gd.derivatives = d;
  return gd;
}

GaugeData build_affine_sphere_ansatz(double psi, Complex psi_z, Complex psi_zbar, Complex U,
                                     Complex Ut, RealityMode mode, double tol) {
  if (!std::isfinite(psi)) throw Error(ErrorCode::InvalidArgument, "psi must be finite");
  if (mode == RealityMode::EuclideanSU21) {
    if (std::abs(Ut - std::conj(U)) > tol * std::max(1.0, std::abs(U))) {
      throw Error(ErrorCode::RealityViolation, "Ut must equal conj(U) in Euclidean mode");
    }
    if (std::abs(psi_zbar - std::conj(psi_z)) > tol * std::max(1.0, std::abs(psi_z))) {
      throw Error(ErrorCode::RealityViolation, "psi_zbar must equal conj(psi_z) for real psi");
    }
  }
  const double c = kInvSqrt2 * std::exp(psi / 2.0);
  const double emp = std::exp(-psi);
  GaugeData gd;
  gd.mode = mode;
  gd.Q = c * E(1, 3);
  gd.P = -c * E(3, 1);
  gd.A_z = c * E(1, 2) - 0.5 * psi_z * E(2, 2) - U * emp * E(2, 3) + 0.5 * psi_z * E(3, 3);
  gd.A_zt = -c * E(2, 1) + 0.5 * psi_zbar * E(2, 2) - Ut * emp * E(3, 2) - 0.5 * psi_zbar * E(3, 3);
  return gd;
}

GaugeData build_affine_sphere_ansatz(const AffineSphereJet& j, RealityMode mode, double tol) {
  GaugeData gd = build_affine_sphere_ansatz(j.psi, j.psi_z, j.psi_zbar, j.U, j.Ut, mode, tol);
  const double c = kInvSqrt2 * std::exp(j.psi / 2.0);
  const double emp = std::exp(-j.psi);
  GaugeDerivatives d;
  d.dQ_dz = 0.5 * j.psi_z * gd.Q;
  d.dQ_dzt = 0.5 * j.psi_zbar * gd.Q;
  d.dP_dz = 0.5 * j.psi_z * gd.P;
  d.dP_dzt = 0.5 * j.psi_zbar * gd.P;
  d.dA_z_dzt = 0.5 * c * j.psi_zbar * E(1, 2) - 0.5 * j.psi_zzbar * E(2, 2) +
               j.U * j.psi_zbar * emp * E(2, 3) + 0.5 * j.psi_zzbar * E(3, 3);
  d.dA_zt_dz = -0.5 * c * j.psi_z * E(2, 1) + 0.5 * j.psi_zzbar * E(2, 2) +
               j.Ut * j.psi_z * emp * E(3, 2) - 0.5 * j.psi_zzbar * E(3, 3);
  gd.derivatives = d;
  return gd;
}

GaugeData build_wang_ansatz(Complex u, Complex u_z) {
  const Complex eu = std::exp(u);
  GaugeData gd;
  gd.P = E(1, 3) + E(2, 1) + E(3, 2);
  gd.Q = std::exp(-2.0 * u) * E(1, 2) + eu * E(2, 3) + eu * E(3, 1);
  gd.A_z = u_z * (E(1, 1) - E(2, 2));
  gd.A_zt = CMat3::Zero();
  return gd;
}

GaugeData build_wang_ansatz(const FieldJet& u) {
  GaugeData gd = build_wang_ansatz(u.value, u.d_z);
  const Complex eu = std::exp(u.value);
  const Complex em2u = std::exp(-2.0 * u.value);
  auto dq = [&](Complex du) -> CMat3 {
    return -2.0 * du * em2u * E(1, 2) + du * eu * E(2, 3) + du * eu * E(3, 1);
  };
  GaugeDerivatives d;
  d.dA_z_dzt = u.d_zzt * (E(1, 1) - E(2, 2));
  d.dQ_dz = dq(u.d_z);
  d.dQ_dzt = dq(u.d_zt);
  gd.derivatives = d;
  return gd;
}

GaugeData build_first_ansatz(double psi, Complex psi_z, Complex U) {
  if (!std::isfinite(psi)) throw Error(ErrorCode::InvalidArgument, "psi must be finite");
  const double c = kInvSqrt2 * std::exp(psi / 2.0);
  const double emp = std::exp(-psi);
  const Complex psi_zbar = std::conj(psi_z);
  GaugeData gd;
  gd.mode = RealityMode::EuclideanSU21;
  gd.Q = c * E(1, 3) + std::conj(U) * emp * E(2, 1) + c * E(3, 2);
  gd.P = U * emp * E(1, 2) - c * E(2, 3) - c * E(3, 1);
  gd.A_z = 0.5 * psi_z * (E(2, 2) - E(1, 1));
  gd.A_zt = 0.5 * psi_zbar * (E(1, 1) - E(2, 2));
  return gd;
}

GaugeData build_first_ansatz(const AffineSphereJet& j) {
  GaugeData gd = build_first_ansatz(j.psi, j.psi_z, j.U);
  const double c = kInvSqrt2 * std::exp(j.psi / 2.0);
  const double emp = std::exp(-j.psi);
  const Complex Ub = std::conj(j.U);
  GaugeDerivatives d;
  d.dA_z_dzt = 0.5 * j.psi_zzbar * (E(2, 2) - E(1, 1));
  d.dA_zt_dz = 0.5 * j.psi_zzbar * (E(1, 1) - E(2, 2));
  d.dQ_dz = 0.5 * c * j.psi_z * (E(1, 3) + E(3, 2)) - j.psi_z * Ub * emp * E(2, 1);
  d.dQ_dzt = 0.5 * c * j.psi_zbar * (E(1, 3) + E(3, 2)) +
             (j.Ut_zbar - j.psi_zbar * Ub) * emp * E(2, 1);
  d.dP_dz = (j.U_z - j.psi_z * j.U) * emp * E(1, 2) - 0.5 * c * j.psi_z * (E(2, 3) + E(3, 1));
  d.dP_dzt = -j.psi_zbar * j.U * emp * E(1, 2) - 0.5 * c * j.psi_zbar * (E(2, 3) + E(3, 1));
  gd.derivatives = d;
  return gd;
}

double HitchinResidual::max_abs() const {
  return std::max({semiflat::max_abs(R1), semiflat::max_abs(R2), semiflat::max_abs(R3)});
}

HitchinResidual hitchin_residual(const GaugeData& gd) {
  const auto& d = gd.require_derivatives();
  HitchinResidual r;
  r.R1 = d.dQ_dz + commutator(gd.A_z, gd.Q);
  r.R2 = d.dP_dzt + commutator(gd.A_zt, gd.P);
  r.R3 = d.dA_zt_dz - d.dA_z_dzt + commutator(gd.A_z, gd.A_zt) + commutator(gd.P, gd.Q);
  return r;
}

LaxCoefficients lax_commutator_coeffs(const GaugeData& gd) {
  const auto& d = gd.require_derivatives();
  // Operator products, term by term:
  //   [d_z + A_z, Q]            = dQ/dz + A_z Q - Q A_z
  //   [d_z + A_z, d_zt + A_zt]  = dA_zt/dz - dA_z/dzt + A_z A_zt - A_zt A_z
  //   [P, Q]                    = P Q - Q P
  //   [P, d_zt + A_zt]          = -dP/dzt + P A_zt - A_zt P
  LaxCoefficients c;
  c.C0 = d.dQ_dz + gd.A_z * gd.Q - gd.Q * gd.A_z;
  c.C1 = d.dA_zt_dz - d.dA_z_dzt + gd.A_z * gd.A_zt - gd.A_zt * gd.A_z + gd.P * gd.Q - gd.Q * gd.P;
  c.C2 = -d.dP_dzt + gd.P * gd.A_zt - gd.A_zt * gd.P;
  return c;
}

Theorem11Report check_theorem11(const GaugeData& gd, double tol) {
  if (gd.mode != RealityMode::EuclideanSU21) {
    throw Error(ErrorCode::InvalidArgument, "Theorem 1.1 conditions need Euclidean reality");
  }
  const auto& d = gd.require_derivatives();
  const CMat3& Q = gd.Q;
  const CMat3 Qs = star(Q);
  const CMat3 A_zbar = star(gd.A_z);
  // d_z(Q*) = star(d_zbar Q) since star conjugates.
  const CMat3 DQs = star(d.dQ_dzt) + commutator(gd.A_z, Qs);
  const CMat3 DQ = d.dQ_dzt + commutator(A_zbar, Q);

  const double nq = max_abs(Q), nqs = max_abs(Qs), nd1 = max_abs(DQs), nd2 = max_abs(DQ);
  Theorem11Report r;
  r.tol = tol;
  r.tr_QQs = tr(Q * Qs);
  const CMat3 DQs2 = DQs * DQs;
  r.tr_DQs2 = tr(DQs2);
  r.tr_DQs2_DQ2 = tr(DQs2 * DQ * DQ);
  const CMat3 QQs = Q * Qs;
  const CMat3 QsQ = Qs * Q;
  r.c3_value = tr(QQs * QQs * QQs * QQs - QsQ * QsQ * DQs * DQ + QsQ * DQs * QQs * DQ);

  r.c1 = min_poly_is_t2(Q, tol) && !vanishes(r.tr_QQs, nq * nqs, tol);
  r.degenerate = vanishes(r.tr_DQs2_DQ2, nd1 * nd1 * nd2 * nd2, tol);
  r.c2 = vanishes(r.tr_DQs2, nd1 * nd1, tol) && !r.degenerate;
  const double s3 = std::max(std::pow(nq * nqs, 4), nq * nq * nqs * nqs * nd1 * nd2);
  r.c3 = vanishes(r.c3_value, s3, tol);
  return r;
}

Prop42Report check_prop42(const GaugeData& gd, double tol) {
  if (gd.mode == RealityMode::EuclideanSU21) {
    throw Error(ErrorCode::InvalidArgument, "holomorphic conditions need Holomorphic or real mode");
  }
  const auto& d = gd.require_derivatives();
  const CMat3& P = gd.P;
  const CMat3& Q = gd.Q;
  const CMat3 DP = d.dP_dz + commutator(gd.A_z, P);
  const CMat3 DQ = d.dQ_dzt + commutator(gd.A_zt, Q);
  const double np = max_abs(P), nq = max_abs(Q), ndp = max_abs(DP), ndq = max_abs(DQ);

  Prop42Report r;
  r.tol = tol;
  r.mode = gd.mode;
  const CMat3 PQ = P * Q;
  r.tr_PQ = tr(PQ);
  const CMat3 DP2 = DP * DP;
  const CMat3 DQ2 = DQ * DQ;
  r.tr_DP2 = tr(DP2);
  r.tr_DQ2 = tr(DQ2);
  r.tr_DP2_DQ2 = tr(DP2 * DQ2);
  const CMat3 PQ2 = PQ * PQ;
  r.iii_value = tr(PQ2 * PQ2 + PQ2 * DP * DQ - PQ * DP * Q * P * DQ);

  r.i = min_poly_is_t2(P, tol) && min_poly_is_t2(Q, tol) && !vanishes(r.tr_PQ, np * nq, tol);
  r.ii = vanishes(r.tr_DP2, ndp * ndp, tol) && vanishes(r.tr_DQ2, ndq * ndq, tol) &&
         !vanishes(r.tr_DP2_DQ2, ndp * ndp * ndq * ndq, tol);
  const double s3 = std::max(std::pow(np * nq, 4), np * np * nq * nq * ndp * ndq);
  r.iii = vanishes(r.iii_value, s3, tol);
  return r;
}

Complex real_form_indicator(const GaugeData& gd) {
  const auto& d = gd.require_derivatives();
  const CMat3 DP = d.dP_dz + commutator(gd.A_z, gd.P);
  const CMat3 DQ = d.dQ_dzt + commutator(gd.A_zt, gd.Q);
  return tr(DP * DP * DQ * DQ);
}

RealForm classify_real_form(const GaugeData& gd, double tol) {
  if (gd.mode != RealityMode::UltrahyperbolicSL3R) {
    throw Error(ErrorCode::InvalidArgument, "real form classification needs the real slice");
  }
  const auto& d = gd.require_derivatives();
  const CMat3 DP = d.dP_dz + commutator(gd.A_z, gd.P);
  const CMat3 DQ = d.dQ_dzt + commutator(gd.A_zt, gd.Q);
  const double a = tr(DP * DP * DQ * DQ).real();
  const double scale = std::pow(max_abs(DP) * max_abs(DQ), 2);
  if (std::abs(a) <= tol * std::max(1.0, scale)) return RealForm::Liouville;
  return a > 0.0 ? RealForm::TzitzeicaMinus : RealForm::TzitzeicaPlus;
}

GaugeData build_toda_ansatz(double alpha, double alpha_x, double u, double u_x, double r, double b,
                            double c) {
  if (b == 0.0) throw Error(ErrorCode::DegenerateAnsatz, "b must be nonzero");
  if (r == 0.0) throw Error(ErrorCode::DegenerateAnsatz, "r must be nonzero");
  const double n = alpha_x;
  const double s = b * std::exp(u - 3.0 * alpha);
  const double k = (c / b) * std::exp(-2.0 * u + 3.0 * alpha);
  GaugeData gd;
  gd.mode = RealityMode::UltrahyperbolicSL3R;
  gd.A_z = n * E(1, 1) + (u_x - 2.0 * n) * E(2, 2) + (n - u_x) * E(3, 3) + r * E(2, 1) + E(3, 2);
  gd.A_zt = s * E(1, 2) + k * E(2, 3);
  gd.P = E(1, 3);
  gd.Q = std::exp(u) * E(3, 1);
  return gd;
}

GaugeData build_toda_ansatz(const TodaJet& j, double r, double b, double c) {
  GaugeData gd = build_toda_ansatz(j.alpha, j.alpha_x, j.u, j.u_x, r, b, c);
  const double s = b * std::exp(j.u - 3.0 * j.alpha);
  const double k = (c / b) * std::exp(-2.0 * j.u + 3.0 * j.alpha);
  const double eu = std::exp(j.u);
  GaugeDerivatives d;
  d.dA_z_dzt = j.alpha_xy * E(1, 1) + (j.u_xy - 2.0 * j.alpha_xy) * E(2, 2) +
               (j.alpha_xy - j.u_xy) * E(3, 3);
  d.dA_zt_dz = s * (j.u_x - 3.0 * j.alpha_x) * E(1, 2) + k * (3.0 * j.alpha_x - 2.0 * j.u_x) * E(2, 3);
  d.dQ_dz = j.u_x * eu * E(3, 1);
  d.dQ_dzt = j.u_y * eu * E(3, 1);
  gd.derivatives = d;
  return gd;
}

std::pair<ScalarGrid, ScalarGrid> toda_residual(const ScalarGrid& u1, const ScalarGrid& u2,
                                                Sign eps1, Sign eps2) {
  require_same_shape(u1.shape(), u2.shape(), "toda_residual");
  const auto& sh = u1.shape();
  const double e1 = sign_value(eps1), e2 = sign_value(eps2);
  ScalarGrid r1(sh), r2(sh);
  for (int j = 0; j < sh.ny; ++j) {
    for (int i = 0; i < sh.nx; ++i) {
      if (sh.is_boundary(i, j)) continue;
      const double a = u1(i, j), b = u2(i, j);
      r1(i, j) = d2_dxdy(u1, i, j) - e1 * std::exp(b - a) + std::exp(2.0 * a + b);
      r2(i, j) = d2_dxdy(u2, i, j) + e1 * std::exp(b - a) - e2 * std::exp(-2.0 * b - a);
    }
  }
  return {std::move(r1), std::move(r2)};
}

ScalarGrid toda_hitchin_residual(const ScalarGrid& u1, const ScalarGrid& u2, Sign eps1, Sign eps2) {
  require_same_shape(u1.shape(), u2.shape(), "toda_hitchin_residual");
  // Ansatz coordinates: alpha = u1, u = u2 + 2 u1, with y reversed.
  const double b = sign_value(eps1), c = b * sign_value(eps2);
  const auto& sh = u1.shape();
  ScalarGrid out(sh);
  for (int j = 0; j < sh.ny; ++j) {
    for (int i = 0; i < sh.nx; ++i) {
      if (sh.is_boundary(i, j)) continue;
      TodaJet jet;
      jet.alpha = u1(i, j);
      jet.alpha_x = d_dx(u1, i, j);
      jet.alpha_y = -d_dy(u1, i, j);
      jet.alpha_xy = -d2_dxdy(u1, i, j);
      jet.u = u2(i, j) + 2 * u1(i, j);
      jet.u_x = d_dx(u2, i, j) + 2 * jet.alpha_x;
      jet.u_y = -d_dy(u2, i, j) + 2 * jet.alpha_y;
      jet.u_xy = -d2_dxdy(u2, i, j) + 2 * jet.alpha_xy;
      out(i, j) = hitchin_residual(build_toda_ansatz(jet, 1.0, b, c)).max_abs();
    }
  }
  return out;
}

nlohmann::ordered_json complex_to_json(Complex c) {
  return nlohmann::ordered_json{{"re", c.real()}, {"im", c.imag()}};
}

nlohmann::ordered_json to_json(const Theorem11Report& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(RealityMode::EuclideanSU21);
  j["tol"] = r.tol;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["c3"] = r.c3;
  j["degenerate"] = r.degenerate;
  j["tr_QQs"] = complex_to_json(r.tr_QQs);
  j["tr_DQs2"] = complex_to_json(r.tr_DQs2);
  j["tr_DQs2_DQ2"] = complex_to_json(r.tr_DQs2_DQ2);
  j["c3_value"] = complex_to_json(r.c3_value);
  return j;
}

nlohmann::ordered_json to_json(const Prop42Report& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(r.mode);
  j["tol"] = r.tol;
  j["i"] = r.i;
  j["ii"] = r.ii;
  j["iii"] = r.iii;
  j["tr_PQ"] = complex_to_json(r.tr_PQ);
  j["tr_DP2"] = complex_to_json(r.tr_DP2);
  j["tr_DQ2"] = complex_to_json(r.tr_DQ2);
  j["tr_DP2_DQ2"] = complex_to_json(r.tr_DP2_DQ2);
  j["iii_value"] = complex_to_json(r.iii_value);
  return j;
}

nlohmann::ordered_json to_json(const HitchinResidual& r) {
  return nlohmann::ordered_json{{"R1", max_abs(r.R1)}, {"R2", max_abs(r.R2)}, {"R3", max_abs(r.R3)},
                                {"max", r.max_abs()}};
}

}  // namespace semiflat
