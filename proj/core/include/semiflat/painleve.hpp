#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"
#include "semiflat/matalg3.hpp"

namespace semiflat {

struct PIIIParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  bool operator==(const PIIIParams&) const = default;
};

/// Parameters reached by the radial reduction with U = z^{-2}, k = +1.
inline constexpr PIIIParams kAffineSphereParams{-8.0, 0.0, 0.0, -16.0};

/// H_ss = Hs^2/H - Hs/s + (alpha H^2 + beta)/s + gamma H^3 + delta/H.
/// Throws SingularPoint at H = 0 or s = 0.
double piii_rhs(double s, double H, double Hs, const PIIIParams& p);

/// The algebraic solution H = -(2s)^{1/3} and its derivatives.
double algebraic_solution(double s);
double algebraic_solution_ds(double s);
double algebraic_solution_dss(double s);

/// Radial reduction of the affine sphere equation with U = z^{-n}:
/// s = (z zbar)^{(3-n)/4} and psi = log(s^{-(1+n)/(3-n)} H^k).
struct RadialReduction {
  int n = 2;
  int k = 1;
  PIIIParams params;
  double s_exponent = 0.25;  ///< s = |z|^{2 * s_exponent}
  double s_power = -3.0;     ///< psi = s_power * log s + k log H
};
/// Throws NEqualsThree for n = 3 (use the n = 3 first integral instead).
RadialReduction reduction_params(int n, Sign k);

struct RadialSolution {
  std::vector<double> s;
  std::vector<double> H;
  std::vector<double> Hs;
  std::size_t size() const { return s.size(); }
};

struct PIIIOptions {
  double tol = 1e-12;
  double h_guard = 1e-8;  ///< SingularApproach once |H| drops below this
};

/// Adaptive RKF 7(8) integration sampled at s_out (s_out[0] is the start).
/// Backward integration is allowed. Throws SingularApproachError carrying the
/// last good (s, H), or StepUnderflow.
RadialSolution integrate_piii(const PIIIParams& p, double H0, double Hs0,
                              std::span<const double> s_out, const PIIIOptions& opt = {});
/// Uniform samples with `samples` nodes on [s0, s_end].
RadialSolution integrate_piii(const PIIIParams& p, double s0, double H0, double Hs0, double s_end,
                              double tol, int samples = 201);

struct RadialPsi {
  std::vector<double> s;
  std::vector<double> psi;
  std::vector<double> psi_s;
  std::vector<double> rho;     ///< s^2
  std::vector<double> radius;  ///< |z| = s^2
};
/// psi = log H - 3 log s. Throws NonpositiveH.
RadialPsi radial_to_psi(const RadialSolution& rs);

/// Log-polar annulus grid whose radial columns sit at s_i = exp(t_i / 2)
/// (|z| = s^2), filled from a PIII trajectory through psi = log H - 3 log s.
ScalarGrid annulus_from_piii(const GridShape& shape, double s0, double H0, double Hs0,
                             const PIIIOptions& opt = {});

/// L = C_m2/zeta^2 + C_m1/zeta + C_0 and M = D_m1/zeta + D_0 + D_1 zeta.
struct LaxSample {
  double s = 0.0;
  CMat3 C_m2, C_m1, C_0;
  CMat3 D_m1, D_0, D_1;
  CMat3 L(Complex zeta) const;
  CMat3 M(Complex zeta) const;
  CMat3 dM_dzeta(Complex zeta) const;
};

/// Lax matrices of the reduced pair. Throws NonpositiveH unless s, H > 0.
LaxSample lax_pair_at(double s, double H, double Hs);
/// Total s-derivative of the coefficients along a curve with the given H_ss.
LaxSample lax_pair_ds(double s, double H, double Hs, double Hss);

/// L_s - M_zeta + [L, M] at one point, with H_ss supplied.
CMat3 lax_compatibility(double s, double H, double Hs, double Hss, Complex zeta);

struct IsomonodromyReport {
  double max_residual = 0.0;
  std::vector<double> per_zeta;  ///< max over samples, one entry per zeta
};

/// Where the second derivative entering L_s comes from.
enum class HssSource {
  Samples,   ///< fourth-order differences of the sampled H_s
  Equation,  ///< piii_rhs at each sample; makes the residual vanish identically
};

/// Compatibility residual along a sampled trajectory, max entry norm over
/// samples for each zeta. With HssSource::Samples the residual measures how
/// far the data are from a PIII solution. Requires p = (-8, 0, 0, -16).
IsomonodromyReport isomonodromy_residual(const RadialSolution& rs, const PIIIParams& p,
                                         std::span<const Complex> zetas,
                                         HssSource source = HssSource::Samples);

nlohmann::ordered_json to_json(const PIIIParams& p);
nlohmann::ordered_json to_json(const IsomonodromyReport& r, std::span<const Complex> zetas);

}  // namespace semiflat
