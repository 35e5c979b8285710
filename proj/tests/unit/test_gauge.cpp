#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "semiflat/gauge.hpp"
#include "support/expect.hpp"
#include "support/fixtures.hpp"

using namespace semiflat;
using semiflat::testing::Rng;
using semiflat::testing::throws_code;

namespace {

CMat3 E(int i, int j) { return matrix_unit(i, j); }
const double kRt2 = std::sqrt(2.0);

double rel_gap(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(TzitzeicaAnsatz, AtZero) {
  const auto gd = build_tzitzeica_ansatz(0.0, 0.0);
  EXPECT_EQ(max_abs(gd.P - E(1, 3)), 0.0);
  EXPECT_EQ(max_abs(gd.Q - E(3, 1)), 0.0);
  EXPECT_EQ(max_abs(gd.A_z - E(2, 1) - E(3, 2)), 0.0);
  EXPECT_EQ(max_abs(gd.A_zt - E(1, 2) - E(2, 3)), 0.0);
}

TEST(TzitzeicaAnsatz, ExponentEntryAndTraces) {
  EXPECT_NEAR(std::abs(build_tzitzeica_ansatz(std::log(2.0), 0.0).Q(2, 0) - 2.0), 0.0, 1e-15);
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto gd = build_tzitzeica_ansatz(rng.complex(), rng.complex());
    for (const CMat3* m : {&gd.A_z, &gd.A_zt, &gd.P, &gd.Q}) EXPECT_LE(std::abs(m->trace()), 1e-15);
  }
}

TEST(AffineSphereAnsatz, SpecialisedValues) {
  const auto gd = build_affine_sphere_ansatz(0.0, 0.0, 0.0, 1.0, 1.0);
  EXPECT_LE(max_abs(gd.Q - E(1, 3) / kRt2), 1e-15);
  EXPECT_LE(max_abs(gd.A_z - E(1, 2) / kRt2 + E(2, 3)), 1e-15);
}

TEST(AffineSphereAnsatz, EuclideanReality) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto j = rng.affine_sphere_jet();
    const auto gd = build_affine_sphere_ansatz(j);
    EXPECT_LE(max_abs(star(gd.Q) + gd.P), 1e-14);
    EXPECT_LE(max_abs(star(gd.A_z) - gd.A_zt), 1e-14);
  }
}

TEST(AffineSphereAnsatz, RealityViolation) {
  EXPECT_TRUE(throws_code(ErrorCode::RealityViolation, [] {
    build_affine_sphere_ansatz(0.0, 0.0, 0.0, Complex(1, 1), Complex(1, 1));
  }));
  EXPECT_NO_THROW(build_affine_sphere_ansatz(0.0, 0.0, 0.0, Complex(1, 1), Complex(1, 1),
                                             RealityMode::Holomorphic));
}

TEST(AffineSphereAnsatz, SolutionsSolveHitchin) {
  Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(hitchin_residual(build_affine_sphere_ansatz(rng.affine_sphere_jet())).max_abs(), 1e-13);
  }
}

TEST(AffineSphereAnsatz, LiouvilleStratumIsDegenerate) {
  AffineSphereJet j;
  j.psi_zzbar = -0.5;  // psi = 0 at the origin of the Liouville solution
  const auto r = check_theorem11(build_affine_sphere_ansatz(j));
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.c2);
  EXPECT_EQ(std::abs(r.tr_DQs2_DQ2), 0.0);
}

TEST(WangAnsatz, AtZero) {
  const auto gd = build_wang_ansatz(0.0, 0.0);
  EXPECT_EQ(max_abs(gd.P - E(1, 3) - E(2, 1) - E(3, 2)), 0.0);
  EXPECT_EQ(max_abs(gd.Q - E(1, 2) - E(2, 3) - E(3, 1)), 0.0);
  EXPECT_EQ(max_abs(build_wang_ansatz(Complex(0.3, 1), 2.0).A_zt), 0.0);
  EXPECT_EQ(hitchin_residual(build_wang_ansatz(FieldJet{})).max_abs(), 0.0);
}

TEST(WangAnsatz, TzitzeicaSolutionsSolveHitchin) {
  Rng rng(14);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(hitchin_residual(build_wang_ansatz(rng.tzitzeica_jet())).max_abs(), 1e-12);
  }
}

TEST(FirstAnsatz, Values) {
  const auto gd = build_first_ansatz(0.0, 0.0, 0.0);
  EXPECT_EQ(max_abs(gd.A_z), 0.0);
  EXPECT_EQ(max_abs(gd.A_zt), 0.0);
  Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    const double psi = rng.uniform();
    const auto f = build_first_ansatz(psi, rng.complex(), rng.complex());
    EXPECT_NEAR(std::abs(f.Q(0, 2) - std::exp(psi / 2) / kRt2), 0.0, 1e-15);
    EXPECT_TRUE(in_su21(f.A_z + f.A_zt));
    EXPECT_TRUE(in_su21(f.Q - f.P));  // A_w + A_wbar
  }
}

TEST(FirstAnsatz, SolutionsSolveHitchin) {
  Rng rng(16);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(hitchin_residual(build_first_ansatz(rng.affine_sphere_jet())).max_abs(), 1e-13);
  }
}

TEST(HitchinResidual, TzitzeicaAtZeroVanishes) {
  auto gd = build_tzitzeica_ansatz(0.0, 0.0);
  gd.derivatives = GaugeDerivatives{};
  const CMat3 diag = (Eigen::Vector3cd() << -1.0, 0.0, 1.0).finished().asDiagonal();
  EXPECT_EQ(max_abs(commutator(gd.A_z, gd.A_zt) - diag), 0.0);
  EXPECT_EQ(hitchin_residual(gd).max_abs(), 0.0);
}

TEST(HitchinResidual, ZeroHiggsLeavesCurvature) {
  Rng rng(17);
  GaugeData gd;
  gd.A_z = rng.matrix();
  gd.A_zt = rng.matrix();
  gd.derivatives = GaugeDerivatives{};
  EXPECT_EQ(max_abs(hitchin_residual(gd).R3 - commutator(gd.A_z, gd.A_zt)), 0.0);
}

TEST(HitchinResidual, NeedsDerivatives) {
  EXPECT_TRUE(throws_code(ErrorCode::MissingDerivatives,
                          [] { hitchin_residual(build_tzitzeica_ansatz(0.0, 0.0)); }));
  EXPECT_TRUE(throws_code(ErrorCode::MissingDerivatives,
                          [] { lax_commutator_coeffs(build_tzitzeica_ansatz(0.0, 0.0)); }));
}

TEST(LaxCoefficients, MatchResiduals) {
  Rng rng(18);
  for (int k = 0; k < 100; ++k) {
    const auto gd = rng.gauge_data();
    const auto r = hitchin_residual(gd);
    const auto c = lax_commutator_coeffs(gd);
    EXPECT_LE(max_abs(c.C0 - r.R1), 1e-13 * std::max(1.0, max_abs(r.R1)));
    EXPECT_LE(max_abs(c.C1 - r.R3), 1e-13 * std::max(1.0, max_abs(r.R3)));
    EXPECT_LE(max_abs(c.C2 + r.R2), 1e-13 * std::max(1.0, max_abs(r.R2)));
  }
}

TEST(LaxCoefficients, QuadraticFitThroughThreeLambdas) {
  Rng rng(19);
  const auto gd = rng.gauge_data();
  const auto& d = *gd.derivatives;
  // [d_z + A_z + l P, l d_zt + Q + l A_zt] as a multiplication operator.
  auto bracket = [&](double l) -> CMat3 {
    const CMat3 X = gd.A_z + l * gd.P, Y = gd.Q + l * gd.A_zt;
    return d.dQ_dz + l * d.dA_zt_dz - l * (d.dA_z_dzt + l * d.dP_dzt) + X * Y - Y * X;
  };
  const double ls[3] = {1.0, 2.0, -1.0};
  Eigen::Matrix3d V;
  for (int r = 0; r < 3; ++r) V.row(r) << 1.0, ls[r], ls[r] * ls[r];
  const Eigen::Matrix3d Vi = V.inverse();
  const CMat3 b[3] = {bracket(ls[0]), bracket(ls[1]), bracket(ls[2])};
  CMat3 fit[3];
  for (int c = 0; c < 3; ++c) fit[c] = Vi(c, 0) * b[0] + Vi(c, 1) * b[1] + Vi(c, 2) * b[2];
  const auto co = lax_commutator_coeffs(gd);
  EXPECT_LE(max_abs(fit[0] - co.C0), 1e-12);
  EXPECT_LE(max_abs(fit[1] - co.C1), 1e-12);
  EXPECT_LE(max_abs(fit[2] - co.C2), 1e-12);
}

TEST(LaxCoefficients, TzitzeicaAtZero) {
  auto gd = build_tzitzeica_ansatz(FieldJet{});
  const auto c = lax_commutator_coeffs(gd);
  EXPECT_EQ(max_abs(c.C0) + max_abs(c.C1) + max_abs(c.C2), 0.0);
}

TEST(Theorem11, FirstConditionValues) {
  AffineSphereJet j;
  j.U = j.Ut = 1.0;
  j.psi_zzbar = -1.5;
  const auto r = check_theorem11(build_affine_sphere_ansatz(j));
  EXPECT_TRUE(r.c1);
  EXPECT_NEAR(std::abs(r.tr_QQs - 0.5), 0.0, 1e-15);
  auto zero = build_affine_sphere_ansatz(j);
  zero.Q.setZero();
  EXPECT_FALSE(check_theorem11(zero).c1);
}

TEST(Theorem11, RandomSolutionsPassAndAreGaugeInvariant) {
  Rng rng(20);
  for (int k = 0; k < 100; ++k) {
    const auto gd = build_affine_sphere_ansatz(rng.affine_sphere_jet());
    const auto r = check_theorem11(gd);
    ASSERT_TRUE(r.all());
    EXPECT_LE(std::abs(r.c3_value), 1e-10);
    const auto g = check_theorem11(gd.conjugated(rng.su21_group()));
    EXPECT_TRUE(g.all());
    const double sc = std::max(1.0, std::abs(r.tr_DQs2_DQ2));
    EXPECT_LE(rel_gap(g.tr_QQs, r.tr_QQs), 1e-10);
    EXPECT_LE(std::abs(g.tr_DQs2_DQ2 - r.tr_DQs2_DQ2) / sc, 1e-10);
    EXPECT_LE(std::abs(g.c3_value - r.c3_value) / sc, 1e-10);
  }
}

TEST(Theorem11, RejectsHolomorphicMode) {
  EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument,
                          [] { check_theorem11(build_tzitzeica_ansatz(FieldJet{})); }));
}

TEST(Prop42, TzitzeicaSolutionsPass) {
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const auto r = check_prop42(build_tzitzeica_ansatz(rng.tzitzeica_jet()));
    EXPECT_TRUE(r.all());
  }
}

TEST(Prop42, VanishingTraceFailsFirstCondition) {
  GaugeData gd;
  gd.P = E(1, 3);
  gd.Q = E(1, 2);
  gd.derivatives = GaugeDerivatives{};
  EXPECT_FALSE(check_prop42(gd).i);
}

TEST(Prop42, GaugeInvariance) {
  Rng rng(22);
  for (int k = 0; k < 100; ++k) {
    const auto gd = build_tzitzeica_ansatz(rng.tzitzeica_jet());
    const auto r = check_prop42(gd);
    const auto g = check_prop42(gd.conjugated(rng.invertible()));
    const double sc = std::max(1.0, std::abs(r.tr_DP2_DQ2));
    EXPECT_EQ(r.all(), g.all());
    EXPECT_LE(rel_gap(g.tr_PQ, r.tr_PQ), 1e-10);
    EXPECT_LE(std::abs(g.tr_DP2_DQ2 - r.tr_DP2_DQ2) / sc, 1e-10);
    EXPECT_LE(std::abs(g.iii_value - r.iii_value) / sc, 1e-10);
  }
}

TEST(Prop42, AffineCoordinateCovariance) {
  Rng rng(23);
  const auto gd = build_tzitzeica_ansatz(rng.tzitzeica_jet());
  const Complex a(1.3, 0.4), b(-0.7, 0.9);
  // z = a zhat, zt = b zthat: dz-components pick up a, dzt-components b.
  GaugeData h = gd;
  h.A_z *= a;
  h.P *= a;
  h.A_zt *= b;
  h.Q *= b;
  auto& d = *h.derivatives;
  d.dP_dz *= a * a;
  d.dQ_dzt *= b * b;
  d.dA_z_dzt *= a * b;
  d.dA_zt_dz *= a * b;
  d.dP_dzt *= a * b;
  d.dQ_dz *= a * b;
  const auto r0 = check_prop42(gd), r1 = check_prop42(h);
  const Complex factor = std::pow(a, 4) * std::pow(b, 4);
  EXPECT_LE(rel_gap(r1.tr_DP2_DQ2, factor * r0.tr_DP2_DQ2), 1e-12);
  EXPECT_TRUE(r1.all());
}

TEST(RealForm, Classification) {
  Rng rng(24);
  for (int k = 0; k < 10; ++k) {
    FieldJet u;
    u.value = rng.uniform();
    u.d_z = rng.uniform();
    u.d_zt = rng.uniform();
    u.d_zzt = std::exp(u.value) - std::exp(-2.0 * u.value);
    auto gd = build_tzitzeica_ansatz(u);
    gd.mode = RealityMode::UltrahyperbolicSL3R;
    EXPECT_GT(real_form_indicator(gd).real(), 0.0);
    EXPECT_EQ(classify_real_form(gd), RealForm::TzitzeicaMinus);
    gd.A_zt(0, 1) *= -1.0;
    gd.derivatives->dA_zt_dz(0, 1) *= -1.0;
    EXPECT_EQ(classify_real_form(gd), RealForm::TzitzeicaPlus);
  }
  GaugeData flat;
  flat.P = E(1, 3);
  flat.Q = E(3, 1);
  flat.derivatives = GaugeDerivatives{};
  flat.mode = RealityMode::UltrahyperbolicSL3R;
  EXPECT_EQ(classify_real_form(flat), RealForm::Liouville);
}

TEST(Toda, AnsatzValues) {
  const auto gd = build_toda_ansatz(0, 0, 0, 0, 1, 1, 1);
  EXPECT_EQ(gd.A_zt(0, 1), Complex(1.0));
  EXPECT_EQ(gd.A_zt(1, 2), Complex(1.0));
  EXPECT_EQ(gd.A_z(0, 0), Complex(0.0));
  Rng rng(25);
  for (int k = 0; k < 20; ++k) {
    const auto t = build_toda_ansatz(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(),
                                     rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform());
    EXPECT_LE(std::abs(t.A_z.trace()), 1e-15);
  }
  EXPECT_TRUE(throws_code(ErrorCode::DegenerateAnsatz, [] { build_toda_ansatz(0, 0, 0, 0, 1, 0, 1); }));
  EXPECT_TRUE(throws_code(ErrorCode::DegenerateAnsatz, [] { build_toda_ansatz(0, 0, 0, 0, 0, 1, 1); }));
}

TEST(Toda, ResidualExamples) {
  const auto s = GridShape::cartesian(5, 5, 0, 1, 0, 1);
  const ScalarGrid z(s);
  const auto [a, b] = toda_residual(z, z, Sign::Plus, Sign::Plus);
  EXPECT_EQ(max_interior_abs(a) + max_interior_abs(b), 0.0);
  const auto [c, d] = toda_residual(z, z, Sign::Plus, Sign::Minus);
  EXPECT_EQ(max_interior_abs(c), 0.0);
  EXPECT_EQ(d(2, 2), 2.0);
  const ScalarGrid other(GridShape::cartesian(6, 5, 0, 1, 0, 1));
  EXPECT_TRUE(throws_code(ErrorCode::GridMismatch, [&] { toda_residual(z, other, Sign::Plus, Sign::Plus); }));
}

TEST(Toda, HitchinCurvatureIsTodaResidual) {
  Rng rng(26);
  for (Sign e1 : {Sign::Plus, Sign::Minus}) {
    for (Sign e2 : {Sign::Plus, Sign::Minus}) {
      for (int k = 0; k < 20; ++k) {
        TodaJet j{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(),
                  rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double b = sign_value(e1), c = b * sign_value(e2);
        const auto r = hitchin_residual(build_toda_ansatz(j, 1.0, b, c));
        // Toda coordinates reverse y: u1 = alpha, u2 = u - 2 alpha.
        const double u1 = j.alpha, u2 = j.u - 2 * j.alpha;
        const double u1xy = -j.alpha_xy, u2xy = -(j.u_xy - 2 * j.alpha_xy);
        const double t1 = u1xy - b * std::exp(u2 - u1) + std::exp(2 * u1 + u2);
        const double t2 = u2xy + b * std::exp(u2 - u1) - sign_value(e2) * std::exp(-2 * u2 - u1);
        EXPECT_LE(max_abs(r.R1) + max_abs(r.R2), 1e-13);
        EXPECT_NEAR(std::abs(r.R3(0, 0) - t1), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(r.R3(1, 1) - t2), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(r.R3(2, 2) + t1 + t2), 0.0, 1e-12);
      }
    }
  }
}

TEST(Reports, JsonCarriesRawValues) {
  Rng rng(27);
  const auto r = check_theorem11(build_affine_sphere_ansatz(rng.affine_sphere_jet()));
  const auto j = to_json(r);
  EXPECT_TRUE(j.contains("c1"));
  EXPECT_TRUE(j.contains("tol"));
  EXPECT_TRUE(j.contains("mode"));
  EXPECT_TRUE(to_json(check_prop42(build_tzitzeica_ansatz(rng.tzitzeica_jet()))).contains("iii"));
}
