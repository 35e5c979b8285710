#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "cli/svg.hpp"
#include "semiflat/geometry.hpp"
#include "semiflat/io.hpp"

namespace semiflat::cli {

namespace {

struct BuildMetricOptions {
  CommonFlags common;
  std::string preset = "none";
  std::string psi;
  std::string U;
  std::string domain = "-0.5,0.5,-0.5,0.5";
  std::string fibre_w = "1";
  std::string fibre_xi = "0";
  double half_width = 0.5;
  double cone_r = 1.0;
};

Json matrix_json(const Mat6& m) {
  Json rows = Json::array();
  for (int a = 0; a < 6; ++a) {
    Json row = Json::array();
    for (int b = 0; b < 6; ++b) row.push_back(m(a, b));
    rows.push_back(row);
  }
  return rows;
}

int run(const BuildMetricOptions& o) {
  const bool liouville = o.preset == "liouville";
  if (!liouville && o.preset != "none") throw UsageError("unknown --preset '" + o.preset + "'");
  if (!liouville && o.psi.empty()) throw UsageError("--psi FILE is required unless --preset is given");

  ScalarGrid psi;
  Json meta;
  if (liouville) {
    const auto [nx, ny] = parse_grid(o.common.grid.empty() ? "33,33" : o.common.grid);
    const auto d = parse_domain(o.domain);
    psi = ScalarGrid::from_function(GridShape::cartesian(nx, ny, d[0], d[1], d[2], d[3]), [](double x, double y) {
      return std::log(4.0) - 2.0 * std::log1p(x * x + y * y);
    });
  } else {
    psi = read_grid(o.psi, &meta);
  }
  CubicDifferential U = CubicDifferential::zero();
  if (!o.U.empty()) {
    U = parse_cubic(o.U);
  } else if (meta.contains("U")) {
    U = CubicDifferential::from_json(meta["U"]);
  }
  if (liouville && !U.is_zero()) throw UsageError("the liouville preset needs --U zero");

  const auto& s = psi.shape();
  const int ci = s.nx / 2, cj = s.ny / 2;
  const CMat3 N0 = liouville ? sphere_frame(s.z(ci, cj)) : default_base_frame(psi(ci, cj));
  const FrameField frame = integrate_frame(psi, U, N0, ci, cj);
  const double loop = loop_defect(psi, U, N0, 0, 0, s.nx - 1, s.ny - 1);

  FibreBox box;
  box.w_center = parse_complex(o.fibre_w);
  box.xi_center = parse_complex(o.fibre_xi);
  box.half_width = o.half_width;
  const Su3Residuals su3 = su3_structure_residuals(psi, U, box);

  const Complex psi_z = d_dz(psi, ci, cj);
  const auto cs = cy_coframe(s.z(ci, cj), box.w_center, box.xi_center, psi(ci, cj), psi_z, U(s.z(ci, cj)),
                             s.dz_dx(ci, cj));
  const MetricSample ms = assemble_g_omega(cs);

  Json report = report_header("build-metric");
  report["preset"] = o.preset;
  report["U"] = U.to_json();
  report["shape"] = to_json(s);
  report["fibre"] = {{"w", complex_to_json(box.w_center)},
                     {"xi", complex_to_json(box.xi_center)},
                     {"half_width", box.half_width}};
  report["su3"] = to_json(su3);
  report["frame"] = {{"base_node", {ci, cj}}, {"min_abs_det", frame.min_abs_det}, {"loop_defect", loop}};
  report["centre_sample"] = {{"g", matrix_json(ms.g)},
                             {"omega", matrix_json(ms.omega)},
                             {"volume_ratio", complex_to_json(volume_form_ratio(cs))}};

  const std::filesystem::path out(o.common.out);
  std::ostringstream cone;
  cone << "# " << Json{{"schema", kSchemaVersion}, {"kind", "cone"}, {"r", o.cone_r}}.dump() << "\n";
  cone << "i,j,X,Y,Z\n";
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      const Eigen::Vector3d p = cone_point(frame.at(i, j), o.cone_r);
      cone << i << "," << j << "," << format_double(p(0)) << "," << format_double(p(1)) << ","
           << format_double(p(2)) << "\n";
    }
  write_text_file(out / "cone.csv", cone.str());
  write_json(out / "metric.json", report);
  if (o.common.svg) {
    ScalarGrid height(s);
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i) height(i, j) = cone_point(frame.at(i, j), o.cone_r)(2);
    write_text_file(out / "cone_height.svg", svg_heat_map(height, "third cone coordinate", false));
  }
  return kOk;
}

}  // namespace

Runner add_build_metric(CLI::App& app) {
  auto o = std::make_shared<BuildMetricOptions>();
  auto* sub = app.add_subcommand("build-metric", "Integrate the frame and assemble the semi-flat metric");
  sub->add_option("--preset", o->preset, "liouville (closed-form psi) or none")->capture_default_str();
  sub->add_option("--psi", o->psi, "grid CSV of psi, e.g. from solve-pde");
  sub->add_option("--U", o->U, "cubic differential; defaults to the one recorded in the psi file");
  sub->add_option("--domain", o->domain, "xa,xb,ya,yb for the preset")->capture_default_str();
  sub->add_option("--fibre-w", o->fibre_w, "centre of the w box, complex")->capture_default_str();
  sub->add_option("--fibre-xi", o->fibre_xi, "centre of the xi box, complex")->capture_default_str();
  sub->add_option("--half-width", o->half_width, "half width of the fibre box")->capture_default_str();
  sub->add_option("--cone-r", o->cone_r, "cone radius for cone.csv")->capture_default_str();
  add_common_flags(sub, o->common, kWithGrid);
  return [o] { return run(*o); };
}

}  // namespace semiflat::cli
