#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "semiflat/gauge.hpp"
#include "semiflat/geometry.hpp"
#include "semiflat/hessian.hpp"
#include "semiflat/painleve.hpp"
#include "semiflat/pdesolve.hpp"

using namespace semiflat;

namespace {

double liouville(double x, double y) { return std::log(4.0) - 2.0 * std::log1p(x * x + y * y); }

GraphFunction hemisphere() {
  using Vec = GraphFunction::Vec;
  using Mat = GraphFunction::Mat;
  return GraphFunction(
      2, [](const Vec& x) { return std::sqrt(1.0 - x.squaredNorm()); },
      [](const Vec& x) -> Vec { return -x / std::sqrt(1.0 - x.squaredNorm()); },
      [](const Vec& x) -> Mat {
        const double v = std::sqrt(1.0 - x.squaredNorm());
        return -Mat::Identity(2, 2) / v - x * x.transpose() / (v * v * v);
      });
}

void BM_SolveLiouville(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = GridShape::cartesian(n, n, 0.5, 1.0, 0.5, 1.0);
  const auto boundary = ScalarGrid::from_function(s, liouville);
  const auto init = harmonic_extension(boundary);
  NewtonOptions opt;
  opt.tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(solve_affine_sphere(CubicDifferential::zero(), boundary, init, opt));
}
BENCHMARK(BM_SolveLiouville)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_AffineSphereResidual(benchmark::State& state) {
  const auto s = GridShape::log_polar(static_cast<int>(state.range(0)), 64, 0.64, 1.44);
  const auto psi = ScalarGrid::from_function(s, [](double t, double) { return -1.5 * t; });
  const auto U = CubicDifferential::monomial(2);
  for (auto _ : state) benchmark::DoNotOptimize(affine_sphere_residual(psi, U));
}
BENCHMARK(BM_AffineSphereResidual)->Arg(33)->Arg(129);

void BM_IntegratePiii(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_piii(kAffineSphereParams, 0.8, 0.55, 3.9, 1.2, 1e-13, 801));
}
BENCHMARK(BM_IntegratePiii)->Unit(benchmark::kMillisecond);

void BM_Isomonodromy(benchmark::State& state) {
  const auto rs = integrate_piii(kAffineSphereParams, 0.8, 0.55, 3.9, 1.2, 1e-13, 801);
  const std::vector<Complex> zetas{{1, 0}, {0, 1}, {2, -1}};
  for (auto _ : state) benchmark::DoNotOptimize(isomonodromy_residual(rs, kAffineSphereParams, zetas));
}
BENCHMARK(BM_Isomonodromy)->Unit(benchmark::kMillisecond);

void BM_TheoremConditions(benchmark::State& state) {
  AffineSphereJet jet;
  jet.psi = 0.3;
  jet.psi_z = {0.1, -0.2};
  jet.psi_zbar = std::conj(jet.psi_z);
  jet.psi_zzbar = -0.2;
  jet.U = {0.5, 0.4};
  jet.Ut = std::conj(jet.U);
  const auto gd = build_affine_sphere_ansatz(jet);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_theorem11(gd));
    benchmark::DoNotOptimize(hitchin_residual(gd));
  }
}
BENCHMARK(BM_TheoremConditions);

void BM_IntegrateFrame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = GridShape::cartesian(n, n, -0.5, 0.5, -0.5, 0.5);
  const auto psi = ScalarGrid::from_function(s, liouville);
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_frame(psi, CubicDifferential::zero(), sphere_frame(0.0), n / 2, n / 2));
}
BENCHMARK(BM_IntegrateFrame)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_Su3Residuals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = GridShape::cartesian(n, n, -0.5, 0.5, -0.5, 0.5);
  const auto psi = ScalarGrid::from_function(s, liouville);
  for (auto _ : state) benchmark::DoNotOptimize(su3_structure_residuals(psi, CubicDifferential::zero()));
}
BENCHMARK(BM_Su3Residuals)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_Legendre(benchmark::State& state) {
  const auto v = hemisphere();
  const auto shape = GridShape::cartesian(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), -1, 1, -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(legendre(v, shape, Eigen::Vector2d::Zero()));
}
BENCHMARK(BM_Legendre)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
