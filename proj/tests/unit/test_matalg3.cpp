#include <gtest/gtest.h>

#include "semiflat/error.hpp"
#include "semiflat/matalg3.hpp"
#include "support/expect.hpp"
#include "support/fixtures.hpp"

using namespace semiflat;
using semiflat::testing::Rng;
using semiflat::testing::throws_code;

namespace {

CMat3 E(int i, int j) { return matrix_unit(i, j); }

}  // namespace

TEST(Star, ZeroMapsToZero) { EXPECT_EQ(max_abs(star(CMat3::Zero())), 0.0); }

TEST(Star, SwapsCornerUnits) {
  // -eta conj(E13)^T eta = -eta E31 eta = E31 since eta_33 = -1.
  EXPECT_EQ(max_abs(star(E(1, 3)) - E(3, 1)), 0.0);
  EXPECT_EQ(max_abs(star(E(3, 1)) - E(1, 3)), 0.0);
  EXPECT_EQ(max_abs(star(E(1, 2)) + E(2, 1)), 0.0);
}

TEST(Star, IsAnInvolution) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const CMat3 m = rng.matrix(3.0);
    EXPECT_LE(max_abs(star(star(m)) - m), 1e-15);
  }
}

TEST(Star, ReversesProducts) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const CMat3 m = rng.matrix(), n = rng.matrix();
    EXPECT_LE(max_abs(star(m * n) + star(n) * star(m)), 1e-14);
  }
}

TEST(Eta, IsItsOwnInverse) { EXPECT_EQ(max_abs(eta() * eta() - CMat3::Identity()), 0.0); }

TEST(Su21, Membership) {
  CMat3 d = CMat3::Zero();
  d.diagonal() << Complex(0, 1), Complex(0, -2), Complex(0, 1);
  EXPECT_TRUE(in_su21(d));
  EXPECT_FALSE(in_su21(CMat3::Identity()));
  EXPECT_TRUE(in_su21(E(1, 3) + E(3, 1)));
  EXPECT_FALSE(in_su21(E(1, 3)));
}

TEST(Su21, RandomLieAlgebraElementsAreMembers) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const CMat3 m = rng.matrix();
    CMat3 x = 0.5 * (m + star(m));
    x -= (x.trace() / 3.0) * CMat3::Identity();
    EXPECT_TRUE(in_su21(x));
  }
}

TEST(MinPoly, SquareZeroDetection) {
  EXPECT_TRUE(min_poly_is_t2(E(1, 3)));
  EXPECT_FALSE(min_poly_is_t2(CMat3::Zero()));
  EXPECT_FALSE(min_poly_is_t2(E(1, 2) + E(2, 3)));
}

TEST(Trace, ConjugationInvariant) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const CMat3 m = rng.matrix(), g = rng.invertible();
    const Complex t = (g.inverse() * m * g).trace();
    EXPECT_LE(std::abs(t - m.trace()), 1e-12 * std::max(1.0, std::abs(m.trace())));
  }
}

TEST(RequireFinite, RejectsNaN) {
  CMat3 m = CMat3::Zero();
  m(1, 2) = std::nan("");
  EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument, [&] { require_finite(m, "m"); }));
}

TEST(HiggsPair, CanonicalPairIsFixed) {
  for (Complex e : {Complex(2.5, 0), Complex(-1, 3), Complex(0, 0.01)}) {
    const auto n = normalize_higgs_pair(E(1, 3), e * E(3, 1));
    EXPECT_LE(std::abs(n.omega - e), 1e-14);
    EXPECT_LE(max_abs(n.g.inverse() * E(1, 3) * n.g - E(1, 3)), 1e-12);
    EXPECT_LE(std::abs(n.g.determinant() - 1.0), 1e-12);
  }
}

TEST(HiggsPair, RandomConjugatesNormalise) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const CMat3 g0 = rng.unimodular();
    const CMat3 gi = g0.inverse();
    const CMat3 P = gi * E(1, 3) * g0, Q = gi * E(3, 1) * g0;
    const auto n = normalize_higgs_pair(P, Q);
    const CMat3 ginv = n.g.inverse();
    EXPECT_LE(std::abs(n.omega - 1.0), 1e-10);
    EXPECT_LE(max_abs(ginv * P * n.g - E(1, 3)), 1e-10);
    EXPECT_LE(max_abs(ginv * Q * n.g - n.omega * E(3, 1)), 1e-10);
    EXPECT_LE(std::abs(n.g.determinant() - 1.0), 1e-10);
  }
}

TEST(HiggsPair, OmegaIsTraceOfProduct) {
  Rng rng(6);
  const CMat3 g0 = rng.unimodular();
  const CMat3 gi = g0.inverse();
  const Complex w(0.3, -1.7);
  const auto n = normalize_higgs_pair(gi * E(1, 3) * g0, w * gi * E(3, 1) * g0);
  EXPECT_LE(std::abs(n.omega - w), 1e-10);
}

TEST(HiggsPair, Errors) {
  EXPECT_TRUE(throws_code(ErrorCode::SingularPair, [] { normalize_higgs_pair(E(1, 3), E(1, 2)); }));
  EXPECT_TRUE(throws_code(ErrorCode::BadNilpotent, [] { normalize_higgs_pair(E(1, 2) + E(2, 3), E(3, 1)); }));
  EXPECT_TRUE(throws_code(ErrorCode::BadNilpotent, [] { normalize_higgs_pair(CMat3::Zero(), E(3, 1)); }));
}

TEST(HiggsPair, DeterministicPivot) {
  Rng rng(7);
  const CMat3 g0 = rng.unimodular();
  const CMat3 P = g0.inverse() * E(1, 3) * g0, Q = g0.inverse() * E(3, 1) * g0;
  const auto a = normalize_higgs_pair(P, Q), b = normalize_higgs_pair(P, Q);
  EXPECT_EQ(max_abs(a.g - b.g), 0.0);
}
