#include "semiflat/matalg3.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "semiflat/error.hpp"

namespace semiflat {

CMat3 matrix_unit(int row, int col) {
  if (row < 1 || row > 3 || col < 1 || col > 3) {
    throw Error(ErrorCode::InvalidArgument, "matrix unit index out of range");
  }
  CMat3 m = CMat3::Zero();
  m(row - 1, col - 1) = 1.0;
  return m;
}

const CMat3& eta() {
  static const CMat3 e = [] {
    CMat3 m = CMat3::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 2) = -1.0;
    return m;
  }();
  return e;
}

double max_abs(const CMat3& m) { return m.cwiseAbs().maxCoeff(); }

bool is_finite(const CMat3& m) {
  for (int i = 0; i < 9; ++i) {
    const Complex c = m.data()[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

const CMat3& require_finite(const CMat3& m, const char* what) {
  if (!is_finite(m)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
  return m;
}

CMat3 star(const CMat3& m) {
  // eta is diagonal and self-inverse, so this is entrywise: -eta_i eta_j conj(m_ji).
  return -(eta() * m.adjoint() * eta());
}

bool in_su21(const CMat3& m, double tol) {
  const double scale = tol * std::max(1.0, max_abs(m));
  return std::abs(m.trace()) <= scale && max_abs(star(m) - m) <= scale;
}

bool min_poly_is_t2(const CMat3& m, double tol) {
  const double n = max_abs(m);
  if (n <= tol) return false;
  return max_abs(m * m) <= tol * n * n;
}

HiggsNormalization normalize_higgs_pair(const CMat3& P, const CMat3& Q, double tol) {
  require_finite(P, "P");
  require_finite(Q, "Q");
  if (!min_poly_is_t2(P, tol)) {
    throw Error(ErrorCode::BadNilpotent, "P must be nonzero with P^2 = 0");
  }
  if (!min_poly_is_t2(Q, tol)) {
    throw Error(ErrorCode::BadNilpotent, "Q must be nonzero with Q^2 = 0");
  }
  const Complex omega = (P * Q).trace();
  if (std::abs(omega) <= tol * max_abs(P) * max_abs(Q)) {
    throw Error(ErrorCode::SingularPair, "Tr(PQ) vanishes");
  }

  int pivot = 0;
  for (int j = 1; j < 3; ++j) {
    if (P.col(j).norm() > P.col(pivot).norm()) pivot = j;
  }
  Eigen::Vector3cd w = Eigen::Vector3cd::Zero();
  w(pivot) = 1.0;
  const Eigen::Vector3cd v = P * w;

  // ker P is two-dimensional and contains v; take its direction orthogonal to v.
  Eigen::JacobiSVD<CMat3> svd(P, Eigen::ComputeFullV);
  Eigen::Vector3cd u = Eigen::Vector3cd::Zero();
  for (int k = 1; k < 3; ++k) {
    const Eigen::Vector3cd kv = svd.matrixV().col(k);
    const Eigen::Vector3cd cand = kv - (v.dot(kv) / v.squaredNorm()) * v;
    if (cand.norm() > u.norm()) u = cand;
  }
  u.normalize();

  // Q u = a Q v, Q w = b Q v since Im Q = span(Q v).
  const Eigen::Vector3cd qv = Q * v;
  const Complex a = qv.dot(Q * u) / qv.squaredNorm();
  const Complex b = qv.dot(Q * w) / qv.squaredNorm();
  const Eigen::Vector3cd u1 = u - a * v;
  const Eigen::Vector3cd w1 = w - b * v;

  // Q v lies in ker Q = span(u1, w1): Q v = c u1 + d w1 with d = omega.
  CMat3 basis;
  basis << v, u1, w1;
  const Eigen::Vector3cd coords = basis.fullPivLu().solve(qv);
  const Complex c = coords(1);
  const Complex d = coords(2);
  const Eigen::Vector3cd w2 = w1 + (c / d) * u1;

  CMat3 g;
  g << v, u1, w2;
  const Complex det = g.determinant();
  if (std::abs(det) <= tol) {
    throw Error(ErrorCode::SingularPair, "Jordan basis is degenerate");
  }
  g.col(1) /= det;
  return {g, omega};
}

}  // namespace semiflat
