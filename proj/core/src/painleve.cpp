#include "semiflat/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semiflat/error.hpp"
#include "semiflat/ode.hpp"
#include "semiflat/pdesolve.hpp"

namespace semiflat {

namespace {

const double kSqrt2 = std::sqrt(2.0);

CMat3 E(int i, int j) { return matrix_unit(i, j); }

void require_positive(double s, double H) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonpositiveH, "Lax pair needs s > 0");
  if (!(H > 0.0)) throw Error(ErrorCode::NonpositiveH, "Lax pair needs H > 0 for real roots");
}

}  // namespace

double piii_rhs(double s, double H, double Hs, const PIIIParams& p) {
  if (s == 0.0) throw Error(ErrorCode::SingularPoint, "PIII is singular at s = 0");
  if (H == 0.0) throw Error(ErrorCode::SingularPoint, "PIII is singular at H = 0");
  return Hs * Hs / H - Hs / s + (p.alpha * H * H + p.beta) / s + p.gamma * H * H * H + p.delta / H;
}

double algebraic_solution(double s) { return -std::cbrt(2.0 * s); }
double algebraic_solution_ds(double s) { return -std::cbrt(2.0) / 3.0 * std::pow(s, -2.0 / 3.0); }
double algebraic_solution_dss(double s) { return 2.0 * std::cbrt(2.0) / 9.0 * std::pow(s, -5.0 / 3.0); }

RadialReduction reduction_params(int n, Sign k) {
  if (n == 3) {
    throw Error(ErrorCode::NEqualsThree,
                "n = 3 does not reduce to PIII; use the radial n = 3 first integral");
  }
  const double d = static_cast<double>((3 - n) * (3 - n));
  RadialReduction r;
  r.n = n;
  r.k = k == Sign::Plus ? 1 : -1;
  r.params = k == Sign::Plus ? PIIIParams{-8.0 / d, 0.0, 0.0, -16.0 / d}
                             : PIIIParams{0.0, 8.0 / d, 16.0 / d, 0.0};
  r.s_exponent = (3.0 - n) / 4.0;
  r.s_power = -(1.0 + n) / (3.0 - n);
  return r;
}

RadialSolution integrate_piii(const PIIIParams& p, double H0, double Hs0,
                              std::span<const double> s_out, const PIIIOptions& opt) {
  if (s_out.empty()) throw Error(ErrorCode::InvalidArgument, "no output points");
  for (double s : s_out) {
    if (!(s > 0.0)) throw Error(ErrorCode::SingularPoint, "PIII samples need s > 0");
  }
  if (H0 == 0.0) throw Error(ErrorCode::SingularPoint, "PIII is singular at H = 0");
  OdeRhs rhs = [&p](double s, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = y[0] == 0.0 ? std::nan("") : piii_rhs(s, y[0], y[1], p);
  };
  OdeGuard guard = [&opt](double, std::span<const double> y) {
    return std::abs(y[0]) >= opt.h_guard;
  };
  OdeOptions o;
  o.rtol = opt.tol;
  o.atol = opt.tol;
  o.initial_step = 1e-4;
  const auto tr = integrate_adaptive(rhs, {H0, Hs0}, s_out, o, guard);
  if (tr.stopped) {
    throw SingularApproachError(tr.stop_t, tr.stop_y[0],
                                "trajectory approaches H = 0; last good s = " +
                                    std::to_string(tr.stop_t));
  }
  RadialSolution rs;
  rs.s = tr.t;
  for (const auto& y : tr.y) {
    rs.H.push_back(y[0]);
    rs.Hs.push_back(y[1]);
  }
  return rs;
}

RadialSolution integrate_piii(const PIIIParams& p, double s0, double H0, double Hs0, double s_end,
                              double tol, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  std::vector<double> s(samples);
  for (int k = 0; k < samples; ++k) s[k] = s0 + (s_end - s0) * k / (samples - 1);
  s.back() = s_end;
  PIIIOptions opt;
  opt.tol = tol;
  return integrate_piii(p, H0, Hs0, s, opt);
}

RadialPsi radial_to_psi(const RadialSolution& rs) {
  RadialPsi out;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double s = rs.s[k], H = rs.H[k];
    if (!(H > 0.0)) {
      throw Error(ErrorCode::NonpositiveH, "H <= 0 at s = " + std::to_string(s));
    }
    out.s.push_back(s);
    out.psi.push_back(std::log(H) - 3.0 * std::log(s));
    out.psi_s.push_back(rs.Hs[k] / H - 3.0 / s);
    out.rho.push_back(s * s);
    out.radius.push_back(s * s);
  }
  return out;
}

ScalarGrid annulus_from_piii(const GridShape& shape, double s0, double H0, double Hs0,
                             const PIIIOptions& opt) {
  if (shape.chart != Chart::LogPolar) {
    throw Error(ErrorCode::InvalidGrid, "annulus data need a log-polar grid");
  }
  std::vector<double> s(shape.nx);
  for (int i = 0; i < shape.nx; ++i) s[i] = std::exp(0.5 * shape.x(i));
  std::vector<double> H(shape.nx);
  // Two sweeps from s0: outward over columns with s >= s0, inward over the rest.
  std::vector<double> up{s0}, down{s0};
  for (double v : s) {
    if (v > s0) up.push_back(v);
    if (v < s0) down.push_back(v);
  }
  std::reverse(down.begin() + 1, down.end());
  auto fill = [&](const std::vector<double>& pts) {
    if (pts.size() < 2) return;
    const auto rs = integrate_piii(kAffineSphereParams, H0, Hs0, pts, opt);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const auto it = std::find(s.begin(), s.end(), pts[k]);
      H[it - s.begin()] = rs.H[k];
    }
  };
  fill(up);
  fill(down);
  for (int i = 0; i < shape.nx; ++i) {
    if (s[i] == s0) H[i] = H0;
  }
  ScalarGrid g(shape);
  for (int i = 0; i < shape.nx; ++i) {
    if (!(H[i] > 0.0)) throw Error(ErrorCode::NonpositiveH, "trajectory leaves H > 0");
    const double psi = std::log(H[i]) - 3.0 * std::log(s[i]);
    for (int j = 0; j < shape.ny; ++j) g(i, j) = psi;
  }
  return g;
}

CMat3 LaxSample::L(Complex zeta) const { return C_m2 / (zeta * zeta) + C_m1 / zeta + C_0; }
CMat3 LaxSample::M(Complex zeta) const { return D_m1 / zeta + D_0 + D_1 * zeta; }
CMat3 LaxSample::dM_dzeta(Complex zeta) const { return -D_m1 / (zeta * zeta) + D_1; }

LaxSample lax_pair_at(double s, double H, double Hs) {
  require_positive(s, H);
  const double a = std::sqrt(s * H) / kSqrt2;
  const double g = s * Hs / (4.0 * H);
  const double t = s / H;
  const double k = kSqrt2 * std::sqrt(H / s);
  const double q = kSqrt2 * std::sqrt(s / (H * H * H));
  LaxSample ls;
  ls.s = s;
  ls.C_m2 = -a * E(1, 3);
  ls.C_m1 = -((1.0 / 3.0) * E(1, 1) + a * (E(1, 2) + E(2, 1)) + (1.0 / 12.0 - g) * E(2, 2) -
              t * E(2, 3) + t * E(3, 2) + (g - 5.0 / 12.0) * E(3, 3));
  ls.C_0 = -a * E(3, 1);
  ls.D_m1 = k * E(1, 3);
  ls.D_0 = k * (E(2, 1) - E(1, 2)) + k * q * (E(2, 3) + E(3, 2));
  ls.D_1 = -k * E(3, 1);
  return ls;
}

LaxSample lax_pair_ds(double s, double H, double Hs, double Hss) {
  require_positive(s, H);
  const double a = std::sqrt(s * H) / kSqrt2;
  const double da = 0.5 * a * (1.0 / s + Hs / H);
  const double dg = (Hs + s * Hss) / (4.0 * H) - s * Hs * Hs / (4.0 * H * H);
  const double dt = 1.0 / H - s * Hs / (H * H);
  const double k = kSqrt2 * std::sqrt(H / s);
  const double q = kSqrt2 * std::sqrt(s / (H * H * H));
  const double dk = 0.5 * k * (Hs / H - 1.0 / s);
  const double dq = 0.5 * q * (1.0 / s - 3.0 * Hs / H);
  LaxSample d;
  d.s = s;
  d.C_m2 = -da * E(1, 3);
  d.C_m1 = -(da * (E(1, 2) + E(2, 1)) - dg * E(2, 2) - dt * E(2, 3) + dt * E(3, 2) + dg * E(3, 3));
  d.C_0 = -da * E(3, 1);
  d.D_m1 = dk * E(1, 3);
  d.D_0 = dk * (E(2, 1) - E(1, 2)) + (dk * q + k * dq) * (E(2, 3) + E(3, 2));
  d.D_1 = -dk * E(3, 1);
  return d;
}

CMat3 lax_compatibility(double s, double H, double Hs, double Hss, Complex zeta) {
  const LaxSample ls = lax_pair_at(s, H, Hs);
  const LaxSample d = lax_pair_ds(s, H, Hs, Hss);
  const CMat3 L = ls.L(zeta);
  const CMat3 M = ls.M(zeta);
  return d.L(zeta) - ls.dM_dzeta(zeta) + commutator(L, M);
}

IsomonodromyReport isomonodromy_residual(const RadialSolution& rs, const PIIIParams& p,
                                         std::span<const Complex> zetas, HssSource source) {
  if (!(p == kAffineSphereParams)) {
    throw Error(ErrorCode::InvalidArgument, "the Lax pair encodes PIII at (-8, 0, 0, -16) only");
  }
  for (double H : rs.H) {
    if (!(H > 0.0)) throw Error(ErrorCode::NonpositiveH, "isomonodromy residual needs H > 0");
  }
  std::vector<double> hss;
  if (source == HssSource::Samples) {
    hss = differentiate_samples(rs.s, rs.Hs, 1);
  } else {
    for (std::size_t k = 0; k < rs.size(); ++k) hss.push_back(piii_rhs(rs.s[k], rs.H[k], rs.Hs[k], p));
  }
  IsomonodromyReport rep;
  for (const Complex zeta : zetas) {
    if (std::abs(zeta) < 1e-8) throw Error(ErrorCode::InvalidArgument, "zeta must stay away from 0");
    double m = 0.0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      m = std::max(m, max_abs(lax_compatibility(rs.s[k], rs.H[k], rs.Hs[k], hss[k], zeta)));
    }
    rep.per_zeta.push_back(m);
    rep.max_residual = std::max(rep.max_residual, m);
  }
  return rep;
}

nlohmann::ordered_json to_json(const PIIIParams& p) {
  return nlohmann::ordered_json{
      {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}};
}

nlohmann::ordered_json to_json(const IsomonodromyReport& r, std::span<const Complex> zetas) {
  nlohmann::ordered_json j;
  j["max_residual"] = r.max_residual;
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.per_zeta.size() && k < zetas.size(); ++k) {
    arr.push_back({{"zeta", complex_to_json(zetas[k])}, {"residual", r.per_zeta[k]}});
  }
  j["per_zeta"] = arr;
  return j;
}

}  // namespace semiflat
