#pragma once

#include <complex>

#include <Eigen/Core>

namespace semiflat {

using Complex = std::complex<double>;
using CMat3 = Eigen::Matrix3cd;

/// Default relative tolerance for identity checks on 3x3 matrices.
inline constexpr double kDefaultTol = 1e-9;

/// Matrix unit E_ij with 1-based indices, matching the usual E13/E31 notation.
CMat3 matrix_unit(int row, int col);

/// diag(1, 1, -1). Its own inverse.
const CMat3& eta();

/// Max absolute entry. All tolerance tests in the library use this norm.
double max_abs(const CMat3& m);

bool is_finite(const CMat3& m);

/// Throws InvalidArgument if any entry is NaN or infinite.
const CMat3& require_finite(const CMat3& m, const char* what);

inline CMat3 commutator(const CMat3& a, const CMat3& b) { return a * b - b * a; }

/// m* = -eta^{-1} conj(m)^T eta. An involution whose fixed traceless
/// matrices form su(2,1).
CMat3 star(const CMat3& m);

/// Traceless and star-fixed within tol * max(1, |m|).
bool in_su21(const CMat3& m, double tol = kDefaultTol);

/// True iff m != 0 and m^2 = 0, i.e. the minimal polynomial is t^2.
bool min_poly_is_t2(const CMat3& m, double tol = kDefaultTol);

struct HiggsNormalization {
  CMat3 g;        ///< unimodular change of basis
  Complex omega;  ///< Tr(PQ) of the input pair
};

/// Finds g with det g = 1, g^-1 P g = E13 and g^-1 Q g = omega E31 for a pair
/// of square-zero matrices with Tr(PQ) = omega != 0.
///
/// The Jordan basis (v, u, w) is built with w the unit vector selecting the
/// largest column of P (lowest index on ties) and v = P w. The kernel vector
/// u is taken orthogonal to v inside ker P. Remaining scaling freedom is
/// fixed by keeping v, w and rescaling u to make det g = 1.
///
/// Throws BadNilpotent if P or Q fails the square-zero test, SingularPair if
/// |Tr(PQ)| <= tol * |P| |Q|.
HiggsNormalization normalize_higgs_pair(const CMat3& P, const CMat3& Q,
                                        double tol = kDefaultTol);

}  // namespace semiflat
