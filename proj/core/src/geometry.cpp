#include "semiflat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "semiflat/error.hpp"

namespace semiflat {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const Complex kI(0.0, 1.0);

CMat3 E(int i, int j) { return matrix_unit(i, j); }

struct NodeData {
  double psi;
  Complex psi_z;
  Complex U;
};

NodeData node_data(const ScalarGrid& psi, const CubicDifferential& U, int i, int j) {
  const auto& s = psi.shape();
  return {psi(i, j), d_dz(psi, i, j), U(s.z(i, j))};
}

// Generator of transport along the chart x (dir = 0) or y (dir = 1) axis.
CMat3 chart_generator(const ScalarGrid& psi, const CubicDifferential& U, int i, int j, int dir) {
  const auto& s = psi.shape();
  const NodeData n = node_data(psi, U, i, j);
  const auto B = structure_matrices(n.psi, n.psi_z, std::conj(n.psi_z), n.U);
  const Complex zd = dir == 0 ? s.dz_dx(i, j) : s.dz_dy(i, j);
  return zd * B.Bz + std::conj(zd) * B.Bzbar;
}

// One RK4 step of N' = B(t) N with B linear between the endpoint values.
CMat3 rk4_step(const CMat3& N, const CMat3& B0, const CMat3& B1, double h) {
  const CMat3 Bm = 0.5 * (B0 + B1);
  const CMat3 k1 = B0 * N;
  const CMat3 k2 = Bm * (N + 0.5 * h * k1);
  const CMat3 k3 = Bm * (N + 0.5 * h * k2);
  const CMat3 k4 = B1 * (N + h * k3);
  return N + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Transport N from node a to node b along a straight grid line.
CMat3 transport(const ScalarGrid& psi, const CubicDifferential& U, CMat3 N, int ia, int ja, int ib,
                int jb) {
  const auto& s = psi.shape();
  const int dir = ja == jb ? 0 : 1;
  const int steps = dir == 0 ? ib - ia : jb - ja;
  const int inc = steps >= 0 ? 1 : -1;
  const double h = inc * (dir == 0 ? s.hx : s.hy);
  int i = ia, j = ja;
  CMat3 B0 = chart_generator(psi, U, i, j, dir);
  for (int k = 0; k < std::abs(steps); ++k) {
    const int i1 = dir == 0 ? i + inc : i;
    const int j1 = dir == 1 ? j + inc : j;
    const CMat3 B1 = chart_generator(psi, U, i1, j1, dir);
    N = rk4_step(N, B0, B1, h);
    B0 = B1;
    i = i1;
    j = j1;
  }
  return N;
}

// Kahler and holomorphic volume coefficients straight from a real coframe.
struct FormPair {
  Form6 omega;
  Form6 Omega;
};

FormPair forms_from(const CoframeMatrix& R) {
  FormPair fp;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      double w = 0.0;
      for (int r = 0; r < 3; ++r) w -= (R(r, a) * std::conj(R(r, b))).imag();
      fp.omega[(1u << a) | (1u << b)] = w;
    }
  }
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      for (int c = b + 1; c < 6; ++c) {
        Eigen::Matrix3cd m;
        m << R.col(a), R.col(b), R.col(c);
        fp.Omega[(1u << a) | (1u << b) | (1u << c)] = m.determinant();
      }
    }
  }
  return fp;
}

}  // namespace

StructureMatrices structure_matrices(double psi, Complex psi_z, Complex psi_zbar, Complex U) {
  const double ep = std::exp(psi);
  const double emp = std::exp(-psi);
  StructureMatrices B;
  B.Bz = E(1, 2) + psi_z * E(2, 2) + U * emp * E(2, 3) - 0.5 * ep * E(3, 1);
  B.Bzbar = E(1, 3) - 0.5 * ep * E(2, 1) + std::conj(U) * emp * E(3, 2) + psi_zbar * E(3, 3);
  return B;
}

CMat3 structure_curvature(const AffineSphereJet& j) {
  const double ep = std::exp(j.psi);
  const double emp = std::exp(-j.psi);
  const CMat3 Bz = E(1, 2) + j.psi_z * E(2, 2) + j.U * emp * E(2, 3) - 0.5 * ep * E(3, 1);
  const CMat3 Bzbar = E(1, 3) - 0.5 * ep * E(2, 1) + j.Ut * emp * E(3, 2) + j.psi_zbar * E(3, 3);
  const CMat3 dBz = j.psi_zzbar * E(2, 2) - j.psi_zbar * j.U * emp * E(2, 3) -
                    0.5 * j.psi_zbar * ep * E(3, 1);
  const CMat3 dBzbar = -0.5 * j.psi_z * ep * E(2, 1) - j.psi_z * j.Ut * emp * E(3, 2) +
                       j.psi_zzbar * E(3, 3);
  return dBz - dBzbar + commutator(Bz, Bzbar);
}

CMat3 default_base_frame(double psi0) {
  const double a = 0.5 * std::exp(0.5 * psi0);
  CMat3 N = CMat3::Zero();
  N(0, 2) = 1.0;
  N(1, 0) = a;
  N(1, 1) = -kI * a;
  N(2, 0) = a;
  N(2, 1) = kI * a;
  return N;
}

CMat3 sphere_frame(Complex z) {
  const Complex zb = std::conj(z);
  const double D = 1.0 + std::norm(z);
  const Eigen::Vector3cd n(z + zb, -kI * (z - zb), 1.0 - z * zb);
  const Eigen::Vector3cd n_z(1.0, -kI, -zb);
  const Eigen::Vector3cd f = n / D;
  const Eigen::Vector3cd f_z = n_z / D - n * (zb / (D * D));
  CMat3 N;
  N.row(0) = f.transpose();
  N.row(1) = f_z.transpose();
  N.row(2) = f_z.conjugate().transpose();
  return N;
}

FrameField integrate_frame(const ScalarGrid& psi, const CubicDifferential& U, const CMat3& N0,
                           int base_i, int base_j, double det_guard) {
  const auto& s = psi.shape();
  if (base_i < 0 || base_i >= s.nx || base_j < 0 || base_j >= s.ny) {
    throw Error(ErrorCode::InvalidArgument, "frame base point outside the grid");
  }
  require_finite(N0, "N0");
  FrameField ff;
  ff.shape = s;
  ff.base_i = base_i;
  ff.base_j = base_j;
  ff.N.assign(s.size(), CMat3::Zero());
  ff.N[s.index(base_i, base_j)] = N0;

  auto sweep = [&](int i0, int j0, int i1, int j1) {
    const int dir = j0 == j1 ? 0 : 1;
    const int inc = (dir == 0 ? i1 - i0 : j1 - j0) >= 0 ? 1 : -1;
    int i = i0, j = j0;
    CMat3 N = ff.N[s.index(i, j)];
    CMat3 B0 = chart_generator(psi, U, i, j, dir);
    const double h = inc * (dir == 0 ? s.hx : s.hy);
    while (i != i1 || j != j1) {
      const int in = dir == 0 ? i + inc : i;
      const int jn = dir == 1 ? j + inc : j;
      const CMat3 B1 = chart_generator(psi, U, in, jn, dir);
      N = rk4_step(N, B0, B1, h);
      ff.N[s.index(in, jn)] = N;
      B0 = B1;
      i = in;
      j = jn;
    }
  };
  sweep(base_i, base_j, s.nx - 1, base_j);
  sweep(base_i, base_j, 0, base_j);
  for (int i = 0; i < s.nx; ++i) {
    sweep(i, base_j, i, s.ny - 1);
    sweep(i, base_j, i, 0);
  }

  ff.min_abs_det = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const double d = std::abs(ff.at(i, j).determinant());
      ff.min_abs_det = std::min(ff.min_abs_det, d);
      if (!(d >= det_guard)) {
        throw Error(ErrorCode::SingularFrame,
                    "frame degenerates at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return ff;
}

double loop_defect(const ScalarGrid& psi, const CubicDifferential& U, const CMat3& N0, int i0,
                   int j0, int i1, int j1) {
  const auto& s = psi.shape();
  if (i0 < 0 || i1 >= s.nx || j0 < 0 || j1 >= s.ny || i0 >= i1 || j0 >= j1) {
    throw Error(ErrorCode::InvalidArgument, "loop rectangle must lie inside the grid");
  }
  CMat3 N = transport(psi, U, N0, i0, j0, i1, j0);
  N = transport(psi, U, N, i1, j0, i1, j1);
  N = transport(psi, U, N, i1, j1, i0, j1);
  N = transport(psi, U, N, i0, j1, i0, j0);
  return max_abs(N - N0);
}

Eigen::Vector3d cone_point(const CMat3& N, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "cone radius must be positive");
  return r * N.row(0).real().transpose();
}

CoframeMatrix CoframeSample::real_coeffs() const {
  const Complex zx = dz_dx;
  const Complex zy = kI * dz_dx;
  CoframeMatrix R;
  for (int r = 0; r < 3; ++r) {
    const auto c = complex_coeffs.row(r);
    R(r, 0) = c(0) * zx + c(1) * std::conj(zx);
    R(r, 1) = c(0) * zy + c(1) * std::conj(zy);
    R(r, 2) = c(2) + c(3);
    R(r, 3) = kI * (c(2) - c(3));
    R(r, 4) = c(4) + c(5);
    R(r, 5) = kI * (c(4) - c(5));
  }
  return R;
}

CoframeSample cy_coframe(Complex z, Complex w, Complex xi, double psi, Complex psi_z, Complex U,
                         Complex dz_dx) {
  CoframeSample cs;
  cs.z = z;
  cs.w = w;
  cs.xi = xi;
  cs.psi = psi;
  cs.psi_z = psi_z;
  cs.U = U;
  cs.dz_dx = dz_dx;
  const double ep = std::exp(psi);
  const double emp = std::exp(-psi);
  const double m = std::exp(0.5 * psi) / kSqrt2;
  const Complex xib = std::conj(xi);
  const Complex psi_zbar = std::conj(psi_z);
  CoframeMatrix& C = cs.complex_coeffs;
  C.setZero();
  // columns: dz, dzbar, dw, dwbar, dxi, dxibar
  C(0, 0) = -0.5 * kI * ep * xib;
  C(0, 1) = -0.5 * kI * ep * xi;
  C(0, 2) = 1.0;
  C(1, 0) = m * (w + kI * xi * psi_z);
  C(1, 1) = m * kI * emp * std::conj(U) * xib;
  C(1, 4) = m * kI;
  C(2, 0) = m * kI * emp * U * xi;
  C(2, 1) = m * (w + kI * xib * psi_zbar);
  C(2, 5) = m * kI;
  return cs;
}

MetricSample assemble_g_omega(const CoframeSample& cs) {
  const CoframeMatrix R = cs.real_coeffs();
  MetricSample ms;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      double g = 0.0, w = 0.0;
      for (int r = 0; r < 3; ++r) {
        const Complex p = R(r, a) * std::conj(R(r, b));
        g += p.real();
        w -= p.imag();
      }
      ms.g(a, b) = g;
      ms.omega(a, b) = w;
    }
  }
  ms.g = 0.5 * (ms.g + ms.g.transpose());
  Eigen::LLT<Mat6> llt(ms.g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateFrame, "assembled metric is not positive definite");
  }
  return ms;
}

Mat6 complex_structure(const CoframeSample& cs) {
  const CoframeMatrix R = cs.real_coeffs();
  Mat6 A, B;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 6; ++c) {
      A(r, c) = R(r, c).real();
      A(r + 3, c) = R(r, c).imag();
      B(r, c) = -R(r, c).imag();
      B(r + 3, c) = R(r, c).real();
    }
  }
  Eigen::FullPivLU<Mat6> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateFrame, "coframe is not a basis");
  return lu.solve(B);
}

Form6 kahler_form(const CoframeSample& cs) { return forms_from(cs.real_coeffs()).omega; }

Form6 holomorphic_volume(const CoframeSample& cs) {
  const CoframeMatrix R = cs.real_coeffs();
  Form6 e[3];
  for (int r = 0; r < 3; ++r) e[r] = Form6::one_form(R.row(r));
  return wedge(wedge(e[0], e[1]), e[2]);
}

Complex volume_form_ratio(const CoframeSample& cs) {
  const Form6 w = kahler_form(cs);
  const Form6 O = holomorphic_volume(cs);
  const Complex top = wedge(O, O.conj())[Form6::kTop];
  const Complex w3 = wedge(wedge(w, w), w)[Form6::kTop];
  if (std::abs(w3) == 0.0) throw Error(ErrorCode::DegenerateFrame, "omega^3 vanishes");
  return top / w3;
}

Su3Residuals su3_structure_residuals(const ScalarGrid& psi, const CubicDifferential& U,
                                     const FibreBox& box) {
  const auto& s = psi.shape();
  if (box.points_per_axis < 2) throw Error(ErrorCode::InvalidArgument, "need 2+ fibre points per axis");
  const int margin = 2;
  if (s.nx < 2 * margin + 1 || (!s.periodic_y() && s.ny < 2 * margin + 1)) {
    throw Error(ErrorCode::InvalidGrid, "grid too small for nested differences");
  }
  // Fibre lattice over (Re w, Im w, Re xi, Im xi).
  std::vector<double> offs(box.points_per_axis);
  for (int k = 0; k < box.points_per_axis; ++k) {
    offs[k] = -box.half_width + 2.0 * box.half_width * k / (box.points_per_axis - 1);
  }
  const double hf = s.hx;
  auto forms_at = [&](int i, int j, Complex w, Complex xi) {
    const NodeData n = node_data(psi, U, i, j);
    return forms_from(cy_coframe(s.z(i, j), w, xi, n.psi, n.psi_z, n.U, s.dz_dx(i, j)).real_coeffs());
  };
  auto diff2 = [](const Form6& p, const Form6& m, double h) { return (p + m * -1.0) * (0.5 / h); };
  // Fourth-order centred difference from samples at +h, -h, +2h, -2h.
  auto diff4 = [](const Form6& p1, const Form6& m1, const Form6& p2, const Form6& m2, double h) {
    return ((p1 + m1 * -1.0) * 8.0 + (p2 + m2 * -1.0) * -1.0) * (1.0 / (12.0 * h));
  };

  Su3Residuals res;
  const int j_lo = s.periodic_y() ? 0 : margin;
  const int j_hi = s.periodic_y() ? s.ny - 1 : s.ny - 1 - margin;
  for (int j = j_lo; j <= j_hi; ++j) {
    for (int i = margin; i <= s.nx - 1 - margin; ++i) {
      const int jp = wrap_y(s, j + 1), jm = wrap_y(s, j - 1);
      for (double a : offs) for (double b : offs) for (double c : offs) for (double d : offs) {
        const Complex w = box.w_center + Complex(a, b);
        const Complex xi = box.xi_center + Complex(c, d);
        std::array<Form6, 6> pw, pO;
        {
          const FormPair xp = forms_at(i + 1, j, w, xi), xm = forms_at(i - 1, j, w, xi);
          const FormPair yp = forms_at(i, jp, w, xi), ym = forms_at(i, jm, w, xi);
          pw[0] = diff2(xp.omega, xm.omega, s.hx);
          pO[0] = diff2(xp.Omega, xm.Omega, s.hx);
          pw[1] = diff2(yp.omega, ym.omega, s.hy);
          pO[1] = diff2(yp.Omega, ym.Omega, s.hy);
        }
        const Complex dirs[4] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
        for (int k = 0; k < 4; ++k) {
          auto at = [&](double m) {
            const Complex dv = m * hf * dirs[k];
            return k < 2 ? forms_at(i, j, w + dv, xi) : forms_at(i, j, w, xi + dv);
          };
          const FormPair p1 = at(1.0), m1 = at(-1.0), p2 = at(2.0), m2 = at(-2.0);
          pw[2 + k] = diff4(p1.omega, m1.omega, p2.omega, m2.omega, hf);
          pO[2 + k] = diff4(p1.Omega, m1.Omega, p2.Omega, m2.Omega, hf);
        }
        res.d_omega = std::max(res.d_omega, exterior_derivative(pw).max_abs());
        res.d_Omega = std::max(res.d_Omega, exterior_derivative(pO).max_abs());
        const Form6 dwbar = (pO[2] + pO[3] * kI) * 0.5;
        res.dwbar_Omega = std::max(res.dwbar_Omega, dwbar.max_abs());
      }
    }
  }
  return res;
}

double remark2_gauge_check(double psi, Complex psi_z, Complex U, double lambda) {
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "spectral parameter must be nonzero");
  const Complex psi_zbar = std::conj(psi_z);
  const GaugeData gd = build_affine_sphere_ansatz(psi, psi_z, psi_zbar, U, std::conj(U));
  const double q = -kSqrt2 * std::exp(-0.5 * psi);
  CMat3 g = CMat3::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = q;
  g(2, 2) = q;
  CMat3 gi = CMat3::Zero();
  gi(0, 0) = 1.0;
  gi(1, 1) = 1.0 / q;
  gi(2, 2) = 1.0 / q;
  // g^-1 dg = diag(0, -psi_z/2, -psi_z/2) (and likewise in zbar).
  const CMat3 gdz = -0.5 * psi_z * (E(2, 2) + E(3, 3));
  const CMat3 gdzb = -0.5 * psi_zbar * (E(2, 2) + E(3, 3));
  const auto B = structure_matrices(psi, psi_z, psi_zbar, U);
  const CMat3 tz = gi * (gd.A_z + lambda * gd.P) * g + gdz;
  const CMat3 tzb = gi * (gd.A_zt + gd.Q / lambda) * g + gdzb;
  return std::max(max_abs(tz + B.Bz), max_abs(tzb + B.Bzbar));
}

nlohmann::ordered_json to_json(const Su3Residuals& r) {
  return nlohmann::ordered_json{
      {"d_omega", r.d_omega}, {"d_Omega", r.d_Omega}, {"dwbar_Omega", r.dwbar_Omega}};
}

}  // namespace semiflat
