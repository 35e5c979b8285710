#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "semiflat/io.hpp"
#include "support/expect.hpp"

using namespace semiflat;
using semiflat::testing::throws_code;

namespace {

ScalarGrid sample(const GridShape& s) {
  return ScalarGrid::from_function(s, [](double x, double y) { return std::sin(3 * x) * std::exp(y) / 7.0; });
}

bool same_shape(const GridShape& a, const GridShape& b) {
  return a.nx == b.nx && a.ny == b.ny && a.hx == b.hx && a.hy == b.hy && a.x(0) == b.x(0) &&
         a.y(0) == b.y(0) && a.periodic_y() == b.periodic_y();
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Io, GridCsvRoundTripIsExact) {
  for (const auto& s : {GridShape::cartesian(5, 4, -1, 1, 0, 0.5), GridShape::log_polar(6, 8, 0.5, 2.0)}) {
    const auto g = sample(s);
    std::stringstream ss;
    write_grid_csv(ss, g, {{"label", "psi"}});
    nlohmann::ordered_json meta;
    const auto back = read_grid_csv(ss, &meta);
    EXPECT_TRUE(same_shape(back.shape(), s));
    EXPECT_EQ(meta["label"], "psi");
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i) EXPECT_EQ(back(i, j), g(i, j));
  }
}

TEST(Io, GridCsvLayout) {
  std::stringstream ss;
  write_grid_csv(ss, ScalarGrid(GridShape::cartesian(3, 3, 0, 1, 0, 1), 0.5));
  std::string first, header, row;
  std::getline(ss, first);
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(first[0], '#');
  EXPECT_EQ(nlohmann::json::parse(first.substr(1))["schema"], kSchemaVersion);
  EXPECT_EQ(header, "j,v0,v1,v2");
  EXPECT_EQ(row, "0,0.5,0.5,0.5");
}

TEST(Io, GridCsvDeterministic) {
  const auto g = sample(GridShape::cartesian(7, 7, 0, 1, 0, 1));
  std::stringstream a, b;
  write_grid_csv(a, g);
  write_grid_csv(b, g);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Io, MalformedCsvIsSchemaError) {
  std::stringstream ss;
  write_grid_csv(ss, sample(GridShape::cartesian(4, 4, 0, 1, 0, 1)));
  const std::string good = ss.str();
  auto read = [](const std::string& text) {
    std::istringstream is(text);
    return read_grid_csv(is);
  };
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read(good.substr(1)); }));
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read(good.substr(0, good.size() / 2)); }));
  std::string bad = good;
  bad.replace(bad.rfind(',') + 1, 1, "x");
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read(bad); }));
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read("# {\"schema\": 99}\n"); }));
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read(""); }));
}

TEST(Io, GridJsonRoundTrip) {
  const auto g = sample(GridShape::cartesian(5, 3, 0, 2, -1, 1));
  const auto back = grid_from_json(nlohmann::ordered_json::parse(grid_to_json(g).dump()));
  EXPECT_TRUE(same_shape(back.shape(), g.shape()));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 5; ++i) EXPECT_EQ(back(i, j), g(i, j));
  auto j = grid_to_json(g);
  j["shape"]["chart"] = "spherical";
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { grid_from_json(j); }));
}

TEST(Io, RadialCsvRoundTrip) {
  RadialSolution rs;
  for (int k = 0; k < 5; ++k) {
    rs.s.push_back(1.0 + 0.1 * k);
    rs.H.push_back(-std::cbrt(2 * rs.s.back()));
    rs.Hs.push_back(rs.H.back() / (3 * rs.s.back()));
  }
  std::stringstream ss;
  write_radial_csv(ss, rs, {{"n", 2}});
  nlohmann::ordered_json meta;
  const auto back = read_radial_csv(ss, &meta);
  EXPECT_EQ(meta["n"], 2);
  EXPECT_EQ(back.s, rs.s);
  EXPECT_EQ(back.H, rs.H);
  EXPECT_EQ(back.Hs, rs.Hs);
  std::istringstream wrong("# {\"schema\":1,\"kind\":\"grid\"}\ns,H,Hs\n");
  EXPECT_TRUE(throws_code(ErrorCode::Schema, [&] { read_radial_csv(wrong); }));
}

TEST(Io, TextFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "semiflat_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "a.txt"), "hello\n");
  EXPECT_TRUE(throws_code(ErrorCode::Io, [&] { read_text_file(dir / "missing.txt"); }));
  std::filesystem::remove_all(dir.parent_path());
}
