#include <cmath>
#include <filesystem>
#include <memory>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "cli/svg.hpp"
#include "semiflat/hessian.hpp"
#include "semiflat/io.hpp"

namespace semiflat::cli {

namespace {

struct HessianOptions {
  CommonFlags common;
  std::string preset = "sphere";
  std::string v;
  std::string sign = "plus";
  std::string domain = "-0.5,0.5,-0.5,0.5";
  std::string p_domain = "-1,1,-1,1";
};

int run(const HessianOptions& o) {
  const bool sphere = o.preset == "sphere";
  if (!sphere && o.preset != "none") throw UsageError("--preset must be sphere or none");
  if (!sphere && o.v.empty()) throw UsageError("--v FILE is required unless --preset sphere is given");
  if (!sphere && o.common.refine > 1) throw UsageError("--refine needs the sphere preset");
  if (o.common.refine < 1 || o.common.refine > 6) throw UsageError("--refine must be between 1 and 6");
  const Sign sign = parse_sign(o.sign);
  LegendreOptions newton;
  newton.tol = o.common.tol;

  Json report = report_header("hessian");
  report["preset"] = o.preset;
  report["sign"] = sign_name(sign);
  const std::filesystem::path out(o.common.out);

  if (!sphere) {
    const ScalarGrid v = read_grid(o.v);
    const ScalarGrid res = tzitzeica_residual(v, sign);
    const MetricGrid m = graph_metric(v);
    int definite = 0, interior = 0;
    for (int j = 1; j < v.ny() - 1; ++j)
      for (int i = 1; i < v.nx() - 1; ++i) {
        ++interior;
        const Eigen::Matrix2d& h = m.at(i, j);
        if (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) > 0.0) ++definite;
      }
    report["tzitzeica_residual"] = max_interior_abs(res);
    report["metric"] = {{"interior_nodes", interior}, {"definite_nodes", definite}};
    report["legendre"] = nullptr;
    write_grid(out / "tzitzeica_residual.csv", res, {{"field", "tzitzeica_residual"}});
    write_json(out / "hessian.json", report);
    if (o.common.svg) write_text_file(out / "tzitzeica_residual.svg", svg_heat_map(res, "|Tzitzeica residual|", true));
    return kOk;
  }

  const auto [nx, ny] = parse_grid(o.common.grid.empty() ? "33,33" : o.common.grid);
  const auto xd = parse_domain(o.domain), pd = parse_domain(o.p_domain);
  GridShape xs = GridShape::cartesian(nx, ny, xd[0], xd[1], xd[2], xd[3]);
  GridShape ps = GridShape::cartesian(nx, ny, pd[0], pd[1], pd[2], pd[3]);
  const GraphFunction v = unit_hemisphere();
  Json levels = Json::array();
  std::vector<double> hs, tz, ma;
  ScalarGrid tz_grid;
  LegendreDual dual;
  for (int r = 0; r < o.common.refine; ++r, xs = xs.refined(), ps = ps.refined()) {
    const ScalarGrid vg = ScalarGrid::from_function(xs, [](double x, double y) { return std::sqrt(1.0 - x * x - y * y); });
    tz_grid = tzitzeica_residual(vg, sign);
    dual = legendre(v, ps, Eigen::Vector2d::Zero(), newton);
    const int stride = 1 << r;
    hs.push_back(xs.hx);
    tz.push_back(max_on_coarse_nodes(tz_grid, stride));
    ma.push_back(max_on_coarse_nodes(dual_ma_residual(dual.w), stride));
    levels.push_back({{"nx", xs.nx}, {"ny", xs.ny}, {"h_x", xs.hx}, {"h_p", ps.hx},
                      {"tzitzeica_residual", tz.back()}, {"dual_ma_residual", ma.back()}});
  }
  double dual_error = 0.0;
  for (int j = 0; j < dual.w.ny(); ++j)
    for (int i = 0; i < dual.w.nx(); ++i)
      dual_error = std::max(dual_error, std::abs(dual.w(i, j) - hemisphere_dual(dual.w.shape().x(i), dual.w.shape().y(j))));

  // Round trip: transform the callable dual back onto the x grid.
  const GraphFunction w = legendre_function(v, Eigen::VectorXd::Zero(2), newton);
  const GridShape back_shape = GridShape::cartesian(nx, ny, xd[0], xd[1], xd[2], xd[3]);
  const LegendreDual back = legendre(w, back_shape, Eigen::Vector2d::Zero(), newton);
  double round_trip = 0.0;
  for (int j = 0; j < back.w.ny(); ++j)
    for (int i = 0; i < back.w.nx(); ++i)
      round_trip = std::max(round_trip, std::abs(back.w(i, j) - v.value(Eigen::Vector2d(back_shape.x(i), back_shape.y(j)))));

  report["levels"] = levels;
  report["tzitzeica_residual"] = tz.back();
  report["dual_ma_residual"] = ma.back();
  if (hs.size() >= 2) {
    Json slopes = Json::object();
    if (tz.back() > 0.0) slopes["tzitzeica_residual"] = fitted_slope(hs, tz);
    if (ma.back() > 0.0) slopes["dual_ma_residual"] = fitted_slope(hs, ma);
    report["convergence_slope"] = slopes;
  }
  report["legendre"] = {{"newton_tol", newton.tol},
                        {"max_gradient_error", dual.max_gradient_error},
                        {"dual_error", dual_error},
                        {"round_trip_error", round_trip}};
  write_grid(out / "tzitzeica_residual.csv", tz_grid, {{"field", "tzitzeica_residual"}});
  write_grid(out / "w.csv", dual.w, {{"field", "legendre_dual"}});
  write_json(out / "hessian.json", report);
  if (o.common.svg) {
    write_text_file(out / "tzitzeica_residual.svg", svg_heat_map(tz_grid, "|Tzitzeica residual|", true));
    write_text_file(out / "w.svg", svg_heat_map(dual.w, "Legendre dual w(p)", false));
  }
  return kOk;
}

}  // namespace

Runner add_hessian(CLI::App& app) {
  auto o = std::make_shared<HessianOptions>();
  auto* sub = app.add_subcommand("hessian", "Graph metric, Tzitzeica condition and Legendre dual");
  sub->add_option("--preset", o->preset, "sphere or none")->capture_default_str();
  sub->add_option("--v", o->v, "grid CSV of graph values v(x) when no preset is used");
  sub->add_option("--sign", o->sign, "plus or minus in det v'' = +-(v - x.grad v)^4")->capture_default_str();
  sub->add_option("--domain", o->domain, "x-grid extent xa,xb,ya,yb")->capture_default_str();
  sub->add_option("--p-domain", o->p_domain, "p-grid extent for the Legendre dual")->capture_default_str();
  o->common.tol = 1e-12;
  add_common_flags(sub, o->common, kWithTol | kWithGrid | kWithRefine);
  return [o] { return run(*o); };
}

}  // namespace semiflat::cli
