#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>
#include <optional>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "cli/svg.hpp"
#include "semiflat/io.hpp"
#include "semiflat/pdesolve.hpp"

namespace semiflat::cli {

namespace {

struct SolvePdeOptions {
  CommonFlags common;
  std::string preset = "none";
  std::string U = "zero";
  std::string domain;
  std::string boundary;
  std::string init;
  double perturb = 0.1;
  int max_iterations = 50;
};

double liouville_psi(double x, double y) { return std::log(4.0) - 2.0 * std::log1p(x * x + y * y); }

ScalarGrid perturbed_harmonic_start(const ScalarGrid& boundary, double amplitude) {
  ScalarGrid init = harmonic_extension(boundary);
  const auto& s = boundary.shape();
  const double lx = s.x(s.nx - 1) - s.x(0), ly = s.y(s.ny - 1) - s.y(0);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i)
      init(i, j) += amplitude * std::sin(2 * std::numbers::pi * (s.x(i) - s.x(0)) / lx) *
                    std::sin(2 * std::numbers::pi * (s.y(j) - s.y(0)) / ly);
  return init;
}

int run(const SolvePdeOptions& o) {
  const bool liouville = o.preset == "liouville";
  if (!liouville && o.preset != "none") throw UsageError("unknown --preset '" + o.preset + "'");
  if (!liouville && o.boundary.empty()) throw UsageError("--boundary FILE is required unless --preset is given");
  if (!liouville && o.common.refine > 1) throw UsageError("--refine needs a preset with a closed-form boundary");
  if (o.common.refine < 1 || o.common.refine > 6) throw UsageError("--refine must be between 1 and 6");
  const CubicDifferential U = parse_cubic(o.U);
  if (liouville && !U.is_zero()) throw UsageError("the liouville preset needs --U zero");

  NewtonOptions newton;
  newton.tol = o.common.tol;
  newton.max_iterations = o.max_iterations;

  std::vector<GridShape> shapes;
  ScalarGrid file_boundary;
  if (liouville) {
    const auto [nx, ny] = parse_grid(o.common.grid.empty() ? "65,65" : o.common.grid);
    const auto d = parse_domain(o.domain.empty() ? "0.5,1,0.5,1" : o.domain);
    GridShape s = GridShape::cartesian(nx, ny, d[0], d[1], d[2], d[3]);
    for (int r = 0; r < o.common.refine; ++r, s = s.refined()) shapes.push_back(s);
  } else {
    file_boundary = read_grid(o.boundary);
    if (!o.common.grid.empty()) {
      const auto [nx, ny] = parse_grid(o.common.grid);
      if (nx != file_boundary.nx() || ny != file_boundary.ny())
        throw UsageError("--grid does not match the boundary file");
    }
    shapes.push_back(file_boundary.shape());
  }

  Json report = report_header("solve-pde");
  report["preset"] = o.preset;
  report["U"] = U.to_json();
  report["newton_tol"] = newton.tol;
  Json levels = Json::array();
  std::vector<double> hs, errors, closed_residuals;
  std::optional<AffineSphereSolution> last;
  for (std::size_t r = 0; r < shapes.size(); ++r) {
    const GridShape& s = shapes[r];
    ScalarGrid boundary = liouville ? ScalarGrid::from_function(s, liouville_psi) : file_boundary;
    ScalarGrid init;
    if (!o.init.empty()) {
      init = read_grid(o.init);
      require_same_shape(init.shape(), s, "--init");
    } else {
      init = perturbed_harmonic_start(boundary, liouville ? o.perturb : 0.0);
    }
    auto sol = solve_affine_sphere(U, boundary, init, newton);
    Json level;
    level["nx"] = s.nx;
    level["ny"] = s.ny;
    level["h"] = s.hx;
    level["iterations"] = sol.stats.iterations;
    level["final_residual"] = sol.stats.final_residual;
    if (liouville) {
      const int stride = 1 << r;
      ScalarGrid err(s), closed = ScalarGrid::from_function(s, liouville_psi);
      for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) err(i, j) = std::exp(sol.psi(i, j)) - std::exp(closed(i, j));
      level["sup_error"] = max_interior_abs(err);
      level["closed_form_residual"] = max_on_coarse_nodes(affine_sphere_residual(closed, U), stride);
      hs.push_back(s.hx);
      errors.push_back(max_on_coarse_nodes(err, stride));
      closed_residuals.push_back(level["closed_form_residual"].get<double>());
    }
    levels.push_back(level);
    last = std::move(sol);
  }
  report["levels"] = levels;
  report["newton"] = to_json(last->stats);
  const ScalarGrid residual = affine_sphere_residual(last->psi, U);
  report["max_residual"] = max_interior_abs(residual);
  if (liouville) report["sup_error"] = levels.back()["sup_error"];
  if (hs.size() >= 2) {
    report["convergence_slope"] = {{"error", fitted_slope(hs, errors)},
                                   {"closed_form_residual", fitted_slope(hs, closed_residuals)}};
  }

  const std::filesystem::path out(o.common.out);
  Json meta{{"field", "psi"}, {"U", U.to_json()}};
  write_grid(out / "psi.csv", last->psi, meta);
  write_grid(out / "residual.csv", residual, {{"field", "affine_sphere_residual"}});
  write_json(out / "report.json", report);
  if (o.common.svg) {
    write_text_file(out / "psi.svg", svg_heat_map(last->psi, "psi", false));
    write_text_file(out / "residual.svg", svg_heat_map(residual, "|residual|", true));
  }
  return kOk;
}

}  // namespace

Runner add_solve_pde(CLI::App& app) {
  auto o = std::make_shared<SolvePdeOptions>();
  auto* sub = app.add_subcommand("solve-pde", "Solve the affine sphere equation by damped Newton");
  sub->add_option("--preset", o->preset, "liouville (closed-form boundary, U = 0) or none")
      ->capture_default_str();
  sub->add_option("--U", o->U, "cubic differential: zero, const:RE[,IM], monomial:N")->capture_default_str();
  sub->add_option("--domain", o->domain, "xa,xb,ya,yb for presets (default 0.5,1,0.5,1)");
  sub->add_option("--boundary", o->boundary, "grid CSV whose edge values are the Dirichlet data");
  sub->add_option("--init", o->init, "grid CSV with the starting interior");
  sub->add_option("--perturb", o->perturb, "amplitude of the sin*sin bump added to the preset start")
      ->capture_default_str();
  sub->add_option("--max-iter", o->max_iterations, "Newton iteration cap")->capture_default_str();
  add_common_flags(sub, o->common, kWithTol | kWithGrid | kWithRefine);
  return [o] { return run(*o); };
}

}  // namespace semiflat::cli
