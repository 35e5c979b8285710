#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "cli/svg.hpp"
#include "semiflat/io.hpp"
#include "semiflat/painleve.hpp"

namespace semiflat::cli {

namespace {

struct PainleveOptions {
  CommonFlags common;
  std::string preset = "positive";
  int n = 2;
  std::string k = "plus";
  std::optional<double> s0, H0, Hs0, s_min, s_max;
  int samples = 801;
  std::string zetas = "1,i,2-i";
};

// Samples [s_min, s_max]; the initial data sit at s0 inside that interval.
RadialSolution trajectory(const PIIIParams& p, double s0, double H0, double Hs0, double s_min, double s_max,
                          int samples, double tol) {
  PIIIOptions opt;
  opt.tol = tol;
  double Hstart = H0, Hsstart = Hs0;
  if (s_min < s0) {
    const std::vector<double> back{s0, s_min};
    const auto b = integrate_piii(p, H0, Hs0, back, opt);
    Hstart = b.H[1];
    Hsstart = b.Hs[1];
  }
  return integrate_piii(p, s_min, Hstart, Hsstart, s_max, tol, samples);
}

int run(const PainleveOptions& o) {
  const Sign k = parse_sign(o.k);
  const RadialReduction red = reduction_params(o.n, k);
  const auto zetas = parse_complex_list(o.zetas);
  if (o.samples < 5) throw UsageError("--samples must be at least 5");
  const bool algebraic = o.preset == "algebraic";
  if (!algebraic && o.preset != "positive" && o.preset != "custom") {
    throw UsageError("--preset must be algebraic, positive or custom");
  }
  if (algebraic && !(red.params == kAffineSphereParams)) {
    throw UsageError("the algebraic preset needs parameters (-8, 0, 0, -16): use --n 2 --k plus");
  }
  if (o.preset == "custom" && (!o.H0 || !o.Hs0)) throw UsageError("the custom preset needs --H0 and --Hs0");

  const double s0 = o.s0.value_or(1.0);
  const double s_min = o.s_min.value_or(algebraic ? s0 : 0.8 * s0);
  // Perturbations of the algebraic solution grow with s, so its preset stays short.
  const double s_max = o.s_max.value_or(algebraic ? 3 * s0 : 1.2 * s0);
  if (!(s_min > 0.0 && s_min <= s0 && s0 < s_max)) throw UsageError("need 0 < s-min <= s0 < s-max");
  const double H0 = o.H0.value_or(algebraic ? algebraic_solution(s0) : 1.0);
  const double Hs0 = o.Hs0.value_or(algebraic ? algebraic_solution_ds(s0) : 0.0);

  RadialSolution rs;
  try {
    rs = trajectory(red.params, s0, H0, Hs0, s_min, s_max, o.samples, o.common.tol);
  } catch (const SingularApproachError& e) {
    std::ostringstream msg;
    msg << "last good s = " << format_double(e.s()) << ", H = " << format_double(e.h());
    std::cerr << msg.str() << "\n";
    throw;
  }

  Json meta;
  meta["n"] = red.n;
  meta["k"] = red.k;
  meta["params"] = to_json(red.params);
  meta["s_exponent"] = red.s_exponent;
  meta["s_power"] = red.s_power;

  Json report = report_header("painleve");
  report["preset"] = o.preset;
  report["metadata"] = meta;
  report["initial"] = {{"s0", s0}, {"H0", H0}, {"Hs0", Hs0}};
  report["interval"] = {s_min, s_max};
  report["samples"] = rs.size();
  report["tol"] = o.common.tol;
  if (algebraic) {
    double dev = 0.0;
    for (std::size_t q = 0; q < rs.size(); ++q) dev = std::max(dev, std::abs(rs.H[q] - algebraic_solution(rs.s[q])));
    report["max_deviation"] = dev;
  }
  bool positive = true;
  for (double h : rs.H) positive = positive && h > 0.0;
  if (red.params == kAffineSphereParams && positive) {
    report["isomonodromy"] = to_json(isomonodromy_residual(rs, red.params, zetas), zetas);
  } else {
    report["isomonodromy"] = nullptr;
    report["isomonodromy_note"] = positive ? "the Lax pair is available for parameters (-8, 0, 0, -16) only"
                                           : "the Lax pair needs H > 0 along the trajectory";
  }

  const std::filesystem::path out(o.common.out);
  std::ostringstream csv;
  write_radial_csv(csv, rs, meta);
  write_text_file(out / "trajectory.csv", csv.str());
  write_json(out / "report.json", report);
  if (o.common.svg) write_text_file(out / "H.svg", svg_line_plot(rs.s, rs.H, "H(s)", "s", "H"));
  return kOk;
}

}  // namespace

Runner add_painleve(CLI::App& app) {
  auto o = std::make_shared<PainleveOptions>();
  auto* sub = app.add_subcommand("painleve", "Integrate the radial Painleve III reduction and test isomonodromy");
  sub->add_option("--preset", o->preset, "algebraic, positive or custom")->capture_default_str();
  sub->add_option("--n", o->n, "power of U = z^-n")->capture_default_str();
  sub->add_option("--k", o->k, "plus or minus: psi carries k log H")->capture_default_str();
  sub->add_option("--s0", o->s0, "where the initial data sit");
  sub->add_option("--H0", o->H0, "H(s0)");
  sub->add_option("--Hs0", o->Hs0, "H'(s0)");
  sub->add_option("--s-min", o->s_min, "left end of the sampled interval");
  sub->add_option("--s-max", o->s_max, "right end of the sampled interval");
  sub->add_option("--samples", o->samples, "uniform samples on the interval")->capture_default_str();
  sub->add_option("--zeta", o->zetas, "spectral parameters, e.g. \"1,i,2-i\"")->capture_default_str();
  o->common.tol = 1e-13;
  add_common_flags(sub, o->common, kWithTol);
  return [o] { return run(*o); };
}

}  // namespace semiflat::cli
