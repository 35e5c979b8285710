#include <cmath>
#include <filesystem>
#include <memory>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "cli/svg.hpp"
#include "semiflat/io.hpp"
#include "semiflat/pdesolve.hpp"

namespace semiflat::cli {

namespace {

struct TzitzeicaOptions {
  CommonFlags common;
  std::string system = "tzitzeica";
  std::string preset = "wave";
  std::string sign = "plus";
  std::string sign2 = "minus";
  std::string domain = "0,0.5,0,0.5";
};

// Characteristic data of the presets, one function per component and edge.
struct Data {
  double (*bottom)(double);
  double (*left)(double);
};

double zero_fn(double) { return 0.0; }
const Data kZero{zero_fn, zero_fn};
const Data kWave1{[](double x) { return 0.2 * std::sin(2 * x); }, [](double y) { return 0.3 * y * y; }};
const Data kWave2{[](double x) { return 0.1 * x; }, [](double y) { return -0.2 * std::sin(y); }};

std::vector<double> sample_x(const GridShape& s, double (*f)(double)) {
  std::vector<double> v(s.nx);
  for (int i = 0; i < s.nx; ++i) v[i] = f(s.x(i));
  return v;
}

std::vector<double> sample_y(const GridShape& s, double (*f)(double)) {
  std::vector<double> v(s.ny);
  for (int j = 0; j < s.ny; ++j) v[j] = f(s.y(j));
  return v;
}

// Hitchin residual of the holomorphic ansatz with z -> x and zt -> y.
ScalarGrid tzitzeica_hitchin(const ScalarGrid& u) {
  const auto& s = u.shape();
  ScalarGrid out(s);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (s.is_boundary(i, j)) continue;
      FieldJet jet;
      jet.value = u(i, j);
      jet.d_z = d_dx(u, i, j);
      jet.d_zt = d_dy(u, i, j);
      jet.d_zzt = d2_dxdy(u, i, j);
      out(i, j) = hitchin_residual(build_tzitzeica_ansatz(jet)).max_abs();
    }
  return out;
}

int run(const TzitzeicaOptions& o) {
  const bool toda = o.system == "toda";
  if (!toda && o.system != "tzitzeica") throw UsageError("--system must be tzitzeica or toda");
  if (o.preset != "wave" && o.preset != "zero") throw UsageError("--preset must be wave or zero");
  if (o.common.refine < 1 || o.common.refine > 6) throw UsageError("--refine must be between 1 and 6");
  const Sign eps1 = parse_sign(o.sign), eps2 = parse_sign(o.sign2);
  const auto [nx, ny] = parse_grid(o.common.grid.empty() ? "33,33" : o.common.grid);
  const auto d = parse_domain(o.domain);
  const bool zero = o.preset == "zero";
  const Data& c1 = zero ? kZero : kWave1;
  const Data& c2 = zero ? kZero : kWave2;

  Json report = report_header("tzitzeica");
  report["system"] = o.system;
  report["preset"] = o.preset;
  report["sign"] = sign_name(eps1);
  if (toda) report["sign2"] = sign_name(eps2);
  Json levels = Json::array();
  std::vector<double> hs, stencil, hitchin;
  bool have_hitchin = toda || eps1 == Sign::Plus;
  GridShape s = GridShape::cartesian(nx, ny, d[0], d[1], d[2], d[3]);
  std::vector<ScalarGrid> fields;
  ScalarGrid hitchin_grid;
  for (int r = 0; r < o.common.refine; ++r, s = s.refined()) {
    double stencil_max = 0.0;
    fields.clear();
    if (toda) {
      auto [u1, u2] = toda_march(s, sample_x(s, c1.bottom), sample_y(s, c1.left), sample_x(s, c2.bottom),
                                 sample_y(s, c2.left), eps1, eps2);
      const auto [r1, r2] = toda_residual(u1, u2, eps1, eps2);
      stencil_max = std::max(max_interior_abs(r1), max_interior_abs(r2));
      hitchin_grid = toda_hitchin_residual(u1, u2, eps1, eps2);
      fields.push_back(std::move(u1));
      fields.push_back(std::move(u2));
    } else {
      ScalarGrid u = tzitzeica_march(s, sample_x(s, c1.bottom), sample_y(s, c1.left), eps1);
      stencil_max = max_interior_abs(tzitzeica_residual_grid(u, eps1));
      if (have_hitchin) hitchin_grid = tzitzeica_hitchin(u);
      fields.push_back(std::move(u));
    }
    Json level{{"nx", s.nx}, {"ny", s.ny}, {"h", s.hx}, {"stencil_residual", stencil_max}};
    hs.push_back(s.hx);
    stencil.push_back(stencil_max);
    if (have_hitchin) {
      level["hitchin_residual"] = max_on_coarse_nodes(hitchin_grid, 1 << r);
      hitchin.push_back(level["hitchin_residual"].get<double>());
    }
    levels.push_back(level);
  }
  report["levels"] = levels;
  report["stencil_residual"] = stencil.back();
  if (have_hitchin) {
    report["hitchin_residual"] = max_interior_abs(hitchin_grid);
  } else {
    report["hitchin_residual"] = nullptr;
    report["hitchin_note"] = "no gauge ansatz is provided for the minus sign of the scalar equation";
  }
  if (hs.size() >= 2) {
    Json slopes = Json::object();
    if (stencil.back() > 0.0) slopes["stencil_residual"] = fitted_slope(hs, stencil);
    if (have_hitchin && hitchin.back() > 0.0) slopes["hitchin_residual"] = fitted_slope(hs, hitchin);
    report["convergence_slope"] = slopes;
  }

  const std::filesystem::path out(o.common.out);
  if (toda) {
    write_grid(out / "u1.csv", fields[0], {{"field", "u1"}});
    write_grid(out / "u2.csv", fields[1], {{"field", "u2"}});
  } else {
    write_grid(out / "u.csv", fields[0], {{"field", "u"}});
  }
  write_json(out / "report.json", report);
  if (o.common.svg) {
    write_text_file(out / "u.svg", svg_heat_map(fields[0], toda ? "u1" : "u", false));
    if (have_hitchin) write_text_file(out / "hitchin.svg", svg_heat_map(hitchin_grid, "Hitchin residual", true));
  }
  return kOk;
}

}  // namespace

Runner add_tzitzeica(CLI::App& app) {
  auto o = std::make_shared<TzitzeicaOptions>();
  auto* sub = app.add_subcommand("tzitzeica", "March the Tzitzeica or Toda system from characteristic data");
  sub->add_option("--system", o->system, "tzitzeica or toda")->capture_default_str();
  sub->add_option("--preset", o->preset, "wave or zero characteristic data")->capture_default_str();
  sub->add_option("--sign", o->sign, "plus or minus (first sign for toda)")->capture_default_str();
  sub->add_option("--sign2", o->sign2, "second sign for toda")->capture_default_str();
  sub->add_option("--domain", o->domain, "xa,xb,ya,yb")->capture_default_str();
  add_common_flags(sub, o->common, kWithGrid | kWithRefine);
  return [o] { return run(*o); };
}

}  // namespace semiflat::cli
