#include "semiflat/pdesolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "semiflat/error.hpp"
#include "semiflat/ode.hpp"

namespace semiflat {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Unknown numbering for interior (non-Dirichlet) nodes.
struct InteriorMap {
  std::vector<int> index;  // per node, -1 on the boundary
  std::vector<std::pair<int, int>> nodes;

  explicit InteriorMap(const GridShape& s) : index(s.size(), -1) {
    for (int j = 0; j < s.ny; ++j) {
      for (int i = 0; i < s.nx; ++i) {
        if (s.is_boundary(i, j)) continue;
        index[s.index(i, j)] = static_cast<int>(nodes.size());
        nodes.emplace_back(i, j);
      }
    }
  }
  int count() const { return static_cast<int>(nodes.size()); }
};

std::vector<double> abs_u_squared(const GridShape& s, const CubicDifferential& U) {
  std::vector<double> out(s.size(), 0.0);
  if (U.is_zero()) return out;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) out[s.index(i, j)] = std::norm(U(s.z(i, j)));
  }
  return out;
}

// Scale of the 5-point Laplacian at a node: d_z d_zbar = (Dxx + Dyy) / (4 |z_x|^2).
double laplacian_scale(const GridShape& s, int i, int j) {
  return 1.0 / (4.0 * std::norm(s.dz_dx(i, j)));
}

// Appends the 5-point stencil of `scale * (Dxx + Dyy)` at node (i, j);
// boundary neighbours are skipped (their values are fixed).
void stencil_triplets(const GridShape& s, const InteriorMap& m, int row, int i, int j, double scale,
                      std::vector<Triplet>& t) {
  const double ax = scale / (s.hx * s.hx);
  const double ay = scale / (s.hy * s.hy);
  t.emplace_back(row, row, -2.0 * (ax + ay));
  auto add = [&](int ii, int jj, double w) {
    jj = wrap_y(s, jj);
    const int col = m.index[s.index(ii, jj)];
    if (col >= 0) t.emplace_back(row, col, w);
  };
  add(i - 1, j, ax);
  add(i + 1, j, ax);
  add(i, j - 1, ay);
  add(i, j + 1, ay);
}

double laplacian_at(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  const double c = g(i, j);
  const double xx = (g(i - 1, j) - 2.0 * c + g(i + 1, j)) / (s.hx * s.hx);
  const double yy = (g(i, wrap_y(s, j - 1)) - 2.0 * c + g(i, wrap_y(s, j + 1))) / (s.hy * s.hy);
  return xx + yy;
}

double residual_norm(const ScalarGrid& psi, const std::vector<double>& u2, const InteriorMap& m,
                     Eigen::VectorXd* out) {
  const auto& s = psi.shape();
  double nrm = 0.0;
  for (int k = 0; k < m.count(); ++k) {
    const auto [i, j] = m.nodes[k];
    const double p = psi(i, j);
    const double f = laplacian_scale(s, i, j) * laplacian_at(psi, i, j) + 0.5 * std::exp(p) +
                     u2[s.index(i, j)] * std::exp(-2.0 * p);
    if (out) (*out)(k) = f;
    nrm = std::max(nrm, std::abs(f));
  }
  return nrm;
}

bool within_guard(const ScalarGrid& g, double guard) {
  for (double v : g.values()) {
    if (!std::isfinite(v) || std::abs(v) > guard) return false;
  }
  return true;
}

}  // namespace

ScalarGrid affine_sphere_residual(const ScalarGrid& psi, const CubicDifferential& U) {
  const auto& s = psi.shape();
  const auto u2 = abs_u_squared(s, U);
  ScalarGrid r(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (s.is_boundary(i, j)) continue;
      const double p = psi(i, j);
      r(i, j) = laplacian_scale(s, i, j) * laplacian_at(psi, i, j) + 0.5 * std::exp(p) +
                u2[s.index(i, j)] * std::exp(-2.0 * p);
    }
  }
  return r;
}

AffineSphereSolution solve_affine_sphere(const CubicDifferential& U, const ScalarGrid& boundary,
                                         const ScalarGrid& init, const NewtonOptions& opt) {
  require_same_shape(boundary.shape(), init.shape(), "solve_affine_sphere");
  const auto& s = boundary.shape();
  const InteriorMap m(s);
  const auto u2 = abs_u_squared(s, U);

  ScalarGrid psi(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) psi(i, j) = s.is_boundary(i, j) ? boundary(i, j) : init(i, j);
  }
  if (!within_guard(psi, opt.overflow_guard)) {
    throw Error(ErrorCode::Blowup, "initial data exceeds the overflow guard");
  }

  AffineSphereSolution sol{psi, {}};
  auto& st = sol.stats;
  const int n = m.count();
  Eigen::VectorXd F(n);
  double fnorm = residual_norm(psi, u2, m, &F);
  st.residual_history.push_back(fnorm);

  Eigen::SparseLU<SpMat> lu;
  bool analyzed = false;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  SpMat J(n, n);

  while (fnorm > opt.tol) {
    if (st.iterations >= opt.max_iterations) {
      throw NonConvergenceError(st.iterations, fnorm,
                                "Newton did not reach tol after " + std::to_string(st.iterations) +
                                    " iterations (residual " + std::to_string(fnorm) + ")");
    }
    trip.clear();
    for (int k = 0; k < n; ++k) {
      const auto [i, j] = m.nodes[k];
      stencil_triplets(s, m, k, i, j, laplacian_scale(s, i, j), trip);
      const double p = psi(i, j);
      trip.emplace_back(k, k, 0.5 * std::exp(p) - 2.0 * u2[s.index(i, j)] * std::exp(-2.0 * p));
    }
    J.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      throw NonConvergenceError(st.iterations, fnorm, "singular Newton Jacobian");
    }
    const Eigen::VectorXd step = lu.solve(-F);

    double alpha = 1.0;
    int halvings = 0;
    ScalarGrid trial = psi;
    Eigen::VectorXd Ft(n);
    double tnorm = 0.0;
    for (;;) {
      for (int k = 0; k < n; ++k) {
        const auto [i, j] = m.nodes[k];
        trial(i, j) = psi(i, j) + alpha * step(k);
      }
      if (within_guard(trial, opt.overflow_guard)) {
        tnorm = residual_norm(trial, u2, m, &Ft);
        if (tnorm <= fnorm) break;
      }
      if (++halvings > opt.max_halvings) {
        throw NonConvergenceError(st.iterations, fnorm, "line search exhausted its halvings");
      }
      alpha *= 0.5;
    }
    psi = std::move(trial);
    F = Ft;
    fnorm = tnorm;
    ++st.iterations;
    st.halvings.push_back(halvings);
    st.residual_history.push_back(fnorm);
  }
  st.final_residual = fnorm;
  sol.psi = std::move(psi);
  return sol;
}

ScalarGrid harmonic_extension(const ScalarGrid& boundary) {
  const auto& s = boundary.shape();
  const InteriorMap m(s);
  const int n = m.count();
  std::vector<Triplet> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = m.nodes[k];
    stencil_triplets(s, m, k, i, j, 1.0, trip);
    auto known = [&](int ii, int jj, double w) {
      jj = wrap_y(s, jj);
      if (m.index[s.index(ii, jj)] < 0) rhs(k) -= w * boundary(ii, jj);
    };
    const double ax = 1.0 / (s.hx * s.hx), ay = 1.0 / (s.hy * s.hy);
    known(i - 1, j, ax);
    known(i + 1, j, ax);
    known(i, j - 1, ay);
    known(i, j + 1, ay);
  }
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SpMat> lu(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::InvalidGrid, "harmonic extension failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  ScalarGrid out = boundary;
  for (int k = 0; k < n; ++k) out(m.nodes[k].first, m.nodes[k].second) = x(k);
  return out;
}

std::vector<ScalarGrid> goursat_march(const GridShape& shape,
                                      const std::vector<std::vector<double>>& bottom,
                                      const std::vector<std::vector<double>>& left,
                                      const GoursatRhs& rhs, double guard) {
  shape.validate();
  const std::size_t nc = bottom.size();
  if (nc == 0 || left.size() != nc) {
    throw Error(ErrorCode::InvalidArgument, "need matching characteristic data per component");
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (bottom[c].size() != static_cast<std::size_t>(shape.nx) ||
        left[c].size() != static_cast<std::size_t>(shape.ny)) {
      throw Error(ErrorCode::GridMismatch, "characteristic data length differs from the grid");
    }
    if (std::abs(bottom[c][0] - left[c][0]) > 1e-12 * std::max(1.0, std::abs(bottom[c][0]))) {
      throw Error(ErrorCode::InvalidArgument, "characteristic data disagree at the corner");
    }
  }
  std::vector<ScalarGrid> u(nc, ScalarGrid(shape));
  for (std::size_t c = 0; c < nc; ++c) {
    for (int i = 0; i < shape.nx; ++i) u[c](i, 0) = bottom[c][i];
    for (int j = 0; j < shape.ny; ++j) u[c](0, j) = left[c][j];
  }
  const double area = shape.hx * shape.hy;
  std::vector<double> mid(nc), f(nc);
  for (int j = 0; j + 1 < shape.ny; ++j) {
    for (int i = 0; i + 1 < shape.nx; ++i) {
      for (std::size_t c = 0; c < nc; ++c) mid[c] = 0.5 * (u[c](i + 1, j) + u[c](i, j + 1));
      rhs(shape.x(i) + 0.5 * shape.hx, shape.y(j) + 0.5 * shape.hy, mid, f);
      for (std::size_t c = 0; c < nc; ++c) {
        const double v = u[c](i + 1, j) + u[c](i, j + 1) - u[c](i, j) + area * f[c];
        if (!std::isfinite(v) || std::abs(v) > guard) {
          throw Error(ErrorCode::Blowup, "marched solution exceeds the overflow guard at x = " +
                                             std::to_string(shape.x(i + 1)) +
                                             ", y = " + std::to_string(shape.y(j + 1)));
        }
        u[c](i + 1, j + 1) = v;
      }
    }
  }
  return u;
}

ScalarGrid tzitzeica_march(const GridShape& shape, std::span<const double> bottom,
                           std::span<const double> left, Sign eps,
                           const std::function<double(double, double)>& forcing, double guard) {
  const double e = sign_value(eps);
  auto rhs = [&](double x, double y, std::span<const double> u, std::span<double> out) {
    out[0] = std::exp(u[0]) - e * std::exp(-2.0 * u[0]);
    if (forcing) out[0] += forcing(x, y);
  };
  auto g = goursat_march(shape, {std::vector<double>(bottom.begin(), bottom.end())},
                         {std::vector<double>(left.begin(), left.end())}, rhs, guard);
  return std::move(g[0]);
}

ScalarGrid tzitzeica_residual_grid(const ScalarGrid& u, Sign eps) {
  const auto& s = u.shape();
  const double e = sign_value(eps);
  ScalarGrid r(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (s.is_boundary(i, j)) continue;
      r(i, j) = d2_dxdy(u, i, j) - std::exp(u(i, j)) + e * std::exp(-2.0 * u(i, j));
    }
  }
  return r;
}

std::pair<ScalarGrid, ScalarGrid> toda_march(const GridShape& shape,
                                             std::span<const double> u1_bottom,
                                             std::span<const double> u1_left,
                                             std::span<const double> u2_bottom,
                                             std::span<const double> u2_left, Sign eps1,
                                             Sign eps2, double guard) {
  const double e1 = sign_value(eps1), e2 = sign_value(eps2);
  auto rhs = [&](double, double, std::span<const double> u, std::span<double> out) {
    const double a = u[0], b = u[1];
    const double cross = e1 * std::exp(b - a);
    out[0] = cross - std::exp(2.0 * a + b);
    out[1] = -cross + e2 * std::exp(-2.0 * b - a);
  };
  auto vec = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
  auto g = goursat_march(shape, {vec(u1_bottom), vec(u2_bottom)}, {vec(u1_left), vec(u2_left)},
                         rhs, guard);
  return {std::move(g[0]), std::move(g[1])};
}

double travelling_wave_potential(double f) { return std::exp(f) - 0.5 * std::exp(-2.0 * f); }

TravellingWaveProfile travelling_wave_profile(double E, double f0, double t_start,
                                              std::span<const double> times, double tol) {
  const double V0 = travelling_wave_potential(f0);
  if (V0 > E) throw Error(ErrorCode::ForbiddenRegion, "V(f0) exceeds the energy level");
  const std::vector<double> y0{f0, std::sqrt(2.0 * (E - V0))};
  OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -(std::exp(y[0]) + std::exp(-2.0 * y[0]));
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;

  TravellingWaveProfile p;
  p.energy = E;
  p.t.assign(times.begin(), times.end());
  p.f.assign(times.size(), 0.0);
  p.fp.assign(times.size(), 0.0);

  // Forward and backward sweeps from t_start, each over its sorted times.
  for (double dir : {1.0, -1.0}) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if ((times[k] - t_start) * dir > 0.0 || (dir > 0.0 && times[k] == t_start)) idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return (times[a] - times[b]) * dir < 0.0; });
    std::vector<double> ts{t_start};
    std::vector<std::size_t> where{static_cast<std::size_t>(-1)};
    for (std::size_t k : idx) {
      if (times[k] == ts.back()) {
        where.back() = k;
        continue;
      }
      ts.push_back(times[k]);
      where.push_back(k);
    }
    if (ts.size() == 1 && where[0] == static_cast<std::size_t>(-1)) continue;
    OdeTrajectory tr;
    if (ts.size() == 1) {
      tr.y = {y0};
    } else {
      tr = integrate_adaptive(rhs, y0, ts, opt);
    }
    for (std::size_t m = 0; m < ts.size(); ++m) {
      if (where[m] == static_cast<std::size_t>(-1)) continue;
      p.f[where[m]] = tr.y[m][0];
      p.fp[where[m]] = tr.y[m][1];
    }
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double e = 0.5 * p.fp[k] * p.fp[k] + travelling_wave_potential(p.f[k]);
    p.max_energy_drift = std::max(p.max_energy_drift, std::abs(e - E));
  }
  return p;
}

std::vector<double> travelling_wave_times(const GridShape& shape) {
  const double k = std::cbrt(4.0);
  std::vector<double> t(shape.nx);
  for (int i = 0; i < shape.nx; ++i) t[i] = k * shape.x(i);
  return t;
}

ScalarGrid lift_travelling_wave(const TravellingWaveProfile& p, const GridShape& shape) {
  if (shape.chart != Chart::Cartesian) throw Error(ErrorCode::InvalidGrid, "lift needs a Cartesian grid");
  const auto t = travelling_wave_times(shape);
  if (p.t.size() != t.size()) throw Error(ErrorCode::GridMismatch, "profile samples do not match grid");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(p.t[i] - t[i]) > 1e-12 * std::max(1.0, std::abs(t[i]))) {
      throw Error(ErrorCode::GridMismatch, "profile sample times do not match grid columns");
    }
  }
  const double shift = std::log(2.0) / 3.0;
  ScalarGrid g(shape);
  for (int j = 0; j < shape.ny; ++j) {
    for (int i = 0; i < shape.nx; ++i) g(i, j) = p.f[i] + shift;
  }
  return g;
}

std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n <= m) throw Error(ErrorCode::InvalidArgument, "too few nodes for the derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> differentiate_samples(std::span<const double> x, std::span<const double> f,
                                          int order) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(f.size()) != n) throw Error(ErrorCode::InvalidArgument, "length mismatch");
  if (n < 5) throw Error(ErrorCode::InvalidArgument, "need at least 5 samples");
  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) {
    const int a = std::clamp(k - 2, 0, n - 5);
    const auto w = fd_weights(x[k], x.subspan(a, 5), order);
    double acc = 0.0;
    for (int m = 0; m < 5; ++m) acc += w[m] * f[a + m];
    d[k] = acc;
  }
  return d;
}

std::vector<double> radial_n3_first_integral(std::span<const double> s, std::span<const double> psi,
                                             std::span<const double> psi_s) {
  if (s.size() != psi.size() || s.size() != psi_s.size()) {
    throw Error(ErrorCode::InvalidArgument, "radial samples differ in length");
  }
  std::vector<double> c(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double r = s[k], p = psi[k], q = psi_s[k];
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radial samples need s > 0");
    c[k] = -r * r * (0.25 * q * q + q / r + std::exp(p) - std::exp(-2.0 * p) / std::pow(r, 6));
  }
  return c;
}

std::vector<double> radial_n3_first_integral(std::span<const double> s, std::span<const double> psi) {
  const auto q = differentiate_samples(s, psi, 1);
  return radial_n3_first_integral(s, psi, q);
}

double radial_n3_rhs(double s, double psi, double psi_s) {
  return -psi_s / s - 4.0 * std::exp(-2.0 * psi) / std::pow(s, 6) - 2.0 * std::exp(psi);
}

RadialN3Solution integrate_radial_n3(double psi0, double psi_s0, std::span<const double> s_out,
                                     double tol) {
  if (s_out.empty() || !(s_out.front() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radial samples need s > 0");
  }
  OdeRhs rhs = [](double s, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = radial_n3_rhs(s, y[0], y[1]);
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  const auto tr = integrate_adaptive(rhs, {psi0, psi_s0}, s_out, opt);
  RadialN3Solution out;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    out.s.push_back(tr.t[k]);
    out.psi.push_back(tr.y[k][0]);
    out.psi_s.push_back(tr.y[k][1]);
  }
  return out;
}

nlohmann::ordered_json to_json(const NewtonStats& s) {
  nlohmann::ordered_json j;
  j["iterations"] = s.iterations;
  j["final_residual"] = s.final_residual;
  j["residual_history"] = s.residual_history;
  j["halvings"] = s.halvings;
  return j;
}

}  // namespace semiflat
