#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("semiflat_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Runs the tool with `args` from `dir`; returns its exit status.
int run(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" SEMIFLAT_CLI "' " + args + " >stdout.txt 2>stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST(CliSolvePde, LiouvillePresetMeetsSupBound) {
  const auto d = scratch("liouville");
  ASSERT_EQ(run(d, "solve-pde --preset liouville --out o --svg"), 0);
  const Json r = load(d / "o/report.json");
  EXPECT_EQ(r["schema"], 1);
  EXPECT_LE(r["sup_error"].get<double>(), 1e-6);
  EXPECT_TRUE(fs::exists(d / "o/psi.csv"));
  EXPECT_TRUE(fs::exists(d / "o/residual.csv"));
  EXPECT_EQ(slurp(d / "o/residual.svg").rfind("<svg", 0), 0u);
}

TEST(CliSolvePde, MissingBoundaryIsUsageError) {
  const auto d = scratch("no_boundary");
  EXPECT_EQ(run(d, "solve-pde --out o"), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("--boundary"), std::string::npos);
}

TEST(CliSolvePde, RefineThreeReportsSlopeTwo) {
  const auto d = scratch("refine");
  ASSERT_EQ(run(d, "solve-pde --preset liouville --grid 17,17 --refine 3 --out o"), 0);
  const Json r = load(d / "o/report.json");
  EXPECT_EQ(r["levels"].size(), 3u);
  EXPECT_NEAR(r["convergence_slope"]["error"].get<double>(), 2.0, 0.2);
  EXPECT_NEAR(r["convergence_slope"]["closed_form_residual"].get<double>(), 2.0, 0.2);
}

TEST(CliSolvePde, BoundaryFileRoundTrip) {
  const auto d = scratch("boundary_file");
  ASSERT_EQ(run(d, "solve-pde --preset liouville --grid 17,17 --out a"), 0);
  ASSERT_EQ(run(d, "solve-pde --boundary a/psi.csv --U monomial:2 --out b"), 0);
  EXPECT_LE(load(d / "b/report.json")["max_residual"].get<double>(), 1e-8);
  EXPECT_EQ(run(d, "solve-pde --boundary a/psi.csv --grid 9,9 --out c"), 2);
}

TEST(CliPainleve, AlgebraicPreset) {
  const auto d = scratch("algebraic");
  ASSERT_EQ(run(d, "painleve --preset algebraic --out o"), 0);
  EXPECT_LE(load(d / "o/report.json")["max_deviation"].get<double>(), 1e-8);
}

TEST(CliPainleve, MinusBranchEchoesParameters) {
  const auto d = scratch("minus");
  ASSERT_EQ(run(d, "painleve --n 2 --k minus --out o"), 0);
  const Json p = load(d / "o/report.json")["metadata"]["params"];
  EXPECT_EQ(p["alpha"], 0.0);
  EXPECT_EQ(p["beta"], 8.0);
  EXPECT_EQ(p["gamma"], 16.0);
  EXPECT_EQ(p["delta"], 0.0);
  const std::string csv = slurp(d / "o/trajectory.csv");
  EXPECT_NE(csv.substr(0, csv.find('\n')).find("\"beta\":8.0"), std::string::npos);
}

TEST(CliPainleve, ZetaListGivesOneEntryEach) {
  const auto d = scratch("zeta");
  ASSERT_EQ(run(d, "painleve --zeta \"1,i\" --out o --svg"), 0);
  const Json iso = load(d / "o/report.json")["isomonodromy"];
  ASSERT_EQ(iso["per_zeta"].size(), 2u);
  EXPECT_EQ(iso["per_zeta"][1]["zeta"]["im"], 1.0);
  EXPECT_LE(iso["max_residual"].get<double>(), 1e-8);
  EXPECT_TRUE(fs::exists(d / "o/H.svg"));
}

TEST(CliPainleve, ErrorsMapToExitCodes) {
  const auto d = scratch("painleve_errors");
  EXPECT_EQ(run(d, "painleve --n 3 --out o"), 6);
  EXPECT_EQ(run(d, "painleve --preset custom --H0 0.05 --Hs0 -2 --out o"), 5);
  EXPECT_NE(slurp(d / "stderr.txt").find("last good s"), std::string::npos);
  EXPECT_EQ(run(d, "painleve --preset custom --out o"), 2);
  EXPECT_EQ(run(d, "painleve --zeta \"1,x\" --out o"), 2);
}

TEST(CliVerify, LiouvillePipelinePassesAndIsDeterministic) {
  const auto d = scratch("verify");
  ASSERT_EQ(run(d, "solve-pde --preset liouville --grid 33,33 --out s"), 0);
  ASSERT_EQ(run(d, "verify --psi s/psi.csv --out a"), 0);
  ASSERT_EQ(run(d, "verify --psi s/psi.csv --out b"), 0);
  const Json r = load(d / "a/verify.json");
  EXPECT_TRUE(r["pass"].get<bool>());
  for (const auto& [name, c] : r["checks"].items()) EXPECT_TRUE(c["pass"].get<bool>()) << name;
  EXPECT_EQ(slurp(d / "a/verify.json"), slurp(d / "b/verify.json"));
}

TEST(CliVerify, CorruptedPsiFailsClosednessCheck) {
  const auto d = scratch("corrupt");
  ASSERT_EQ(run(d, "solve-pde --preset liouville --grid 33,33 --out s"), 0);
  // Bump one node that the coarsened grid does not contain.
  std::istringstream in(slurp(d / "s/psi.csv"));
  std::ostringstream out;
  std::string line;
  for (int n = 0; std::getline(in, line); ++n) {
    if (n == 2 + 15) {
      std::size_t pos = 0;
      for (int k = 0; k < 16; ++k) pos = line.find(',', pos) + 1;
      const std::size_t end = line.find(',', pos);
      line = line.substr(0, pos) + std::to_string(std::stod(line.substr(pos, end - pos)) + 0.05) + line.substr(end);
    }
    out << line << "\n";
  }
  std::ofstream(d / "bad.csv") << out.str();
  EXPECT_EQ(run(d, "verify --psi bad.csv --out v"), 7);
  const Json r = load(d / "v/verify.json");
  EXPECT_FALSE(r["pass"].get<bool>());
  EXPECT_FALSE(r["checks"]["d_omega"]["pass"].get<bool>());
  EXPECT_NE(slurp(d / "stdout.txt").find("FAIL d_omega"), std::string::npos);
}

TEST(CliVerify, InputErrors) {
  const auto d = scratch("verify_errors");
  EXPECT_EQ(run(d, "verify --out o"), 2);
  EXPECT_EQ(run(d, "verify --psi missing.csv --out o"), 3);
  std::ofstream(d / "junk.csv") << "not a grid\n";
  EXPECT_EQ(run(d, "verify --psi junk.csv --out o"), 4);
}

TEST(CliTzitzeica, ZeroPresetIsExact) {
  const auto d = scratch("tz_zero");
  ASSERT_EQ(run(d, "tzitzeica --preset zero --out o"), 0);
  const Json r = load(d / "o/report.json");
  EXPECT_EQ(r["stencil_residual"].get<double>(), 0.0);
  EXPECT_EQ(r["hitchin_residual"].get<double>(), 0.0);
}

TEST(CliTzitzeica, TodaHitchinResidualIsSecondOrder) {
  const auto d = scratch("toda");
  ASSERT_EQ(run(d, "tzitzeica --system toda --grid 17,17 --refine 3 --out o"), 0);
  const Json r = load(d / "o/report.json");
  EXPECT_NEAR(r["convergence_slope"]["hitchin_residual"].get<double>(), 2.0, 0.3);
  EXPECT_TRUE(fs::exists(d / "o/u1.csv"));
  EXPECT_TRUE(fs::exists(d / "o/u2.csv"));
}

TEST(CliHessian, SphereSuite) {
  const auto d = scratch("hessian");
  ASSERT_EQ(run(d, "hessian --grid 17,17 --refine 3 --out o"), 0);
  const Json r = load(d / "o/hessian.json");
  EXPECT_NEAR(r["convergence_slope"]["tzitzeica_residual"].get<double>(), 2.0, 0.3);
  EXPECT_NEAR(r["convergence_slope"]["dual_ma_residual"].get<double>(), 2.0, 0.3);
  EXPECT_LE(r["legendre"]["round_trip_error"].get<double>(), 1e-12);
  EXPECT_LE(r["legendre"]["dual_error"].get<double>(), 1e-12);
}

TEST(CliBuildMetric, LiouvillePreset) {
  const auto d = scratch("metric");
  ASSERT_EQ(run(d, "build-metric --preset liouville --grid 17,17 --out o"), 0);
  const Json r = load(d / "o/metric.json");
  EXPECT_GT(r["su3"]["d_Omega"].get<double>(), 0.0);
  EXPECT_LE(r["su3"]["dwbar_Omega"].get<double>(), 1e-12);
  EXPECT_GT(r["frame"]["min_abs_det"].get<double>(), 0.1);
  std::istringstream cone(slurp(d / "o/cone.csv"));
  int rows = 0;
  for (std::string line; std::getline(cone, line);) ++rows;
  EXPECT_EQ(rows, 2 + 17 * 17);
}

TEST(CliConfig, SectionValuesApplyAndFlagsWin) {
  const auto d = scratch("config");
  std::ofstream(d / "run.ini") << "[solve-pde]\npreset = liouville\ngrid = \"17,17\"\nrefine = 2\n";
  ASSERT_EQ(run(d, "solve-pde --config run.ini --out a"), 0);
  EXPECT_EQ(load(d / "a/report.json")["levels"].size(), 2u);
  ASSERT_EQ(run(d, "solve-pde --config run.ini --refine 1 --out b"), 0);
  EXPECT_EQ(load(d / "b/report.json")["levels"].size(), 1u);
  EXPECT_EQ(run(d, "solve-pde --config absent.ini"), 3);
}

TEST(CliHelp, DocumentsExitCodes) {
  const auto d = scratch("help");
  ASSERT_EQ(run(d, "--help"), 0);
  const std::string text = slurp(d / "stdout.txt");
  for (const char* code : {"  2  usage", "  3  file", "  4  malformed", "  5  numerical", "  6  input", "  7  verify"})
    EXPECT_NE(text.find(code), std::string::npos) << code;
  EXPECT_EQ(run(d, "no-such-command"), 2);
}
