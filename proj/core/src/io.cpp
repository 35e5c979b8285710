#include "semiflat/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "semiflat/error.hpp"

namespace semiflat {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw Error(ErrorCode::Schema, "not a number: '" + s + "'");
  return v;
}

json read_meta_line(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') {
    throw Error(ErrorCode::Schema, "missing '#' metadata line");
  }
  try {
    json j = json::parse(line.substr(1));
    if (j.value("schema", 0) != kSchemaVersion) throw Error(ErrorCode::Schema, "unsupported schema");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("bad metadata: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const GridShape& s) {
  json j;
  j["nx"] = s.nx;
  j["ny"] = s.ny;
  j["x0"] = s.x0;
  j["y0"] = s.y0;
  j["hx"] = s.hx;
  j["hy"] = s.hy;
  j["chart"] = s.chart == Chart::Cartesian ? "cartesian" : "log-polar";
  return j;
}

GridShape shape_from_json(const json& j) {
  try {
    GridShape s;
    s.nx = j.at("nx").get<int>();
    s.ny = j.at("ny").get<int>();
    s.x0 = j.at("x0").get<double>();
    s.y0 = j.at("y0").get<double>();
    s.hx = j.at("hx").get<double>();
    s.hy = j.at("hy").get<double>();
    const std::string chart = j.value("chart", "cartesian");
    if (chart == "cartesian") {
      s.chart = Chart::Cartesian;
    } else if (chart == "log-polar") {
      s.chart = Chart::LogPolar;
    } else {
      throw Error(ErrorCode::Schema, "unknown chart '" + chart + "'");
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("grid shape: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidGrid) throw Error(ErrorCode::Schema, e.what());
    throw;
  }
}

void write_grid_csv(std::ostream& os, const ScalarGrid& g, const json& meta) {
  json m;
  m["schema"] = kSchemaVersion;
  m["kind"] = "grid";
  m["shape"] = to_json(g.shape());
  if (meta.is_object()) {
    for (const auto& [k, v] : meta.items()) m[k] = v;
  }
  os << '#' << m.dump() << '\n';
  os << 'j';
  for (int i = 0; i < g.nx(); ++i) os << ",v" << i;
  os << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    os << j;
    for (int i = 0; i < g.nx(); ++i) os << ',' << format_double(g(i, j));
    os << '\n';
  }
}

ScalarGrid read_grid_csv(std::istream& is, json* meta) {
  const json m = read_meta_line(is);
  if (m.value("kind", "") != "grid" || !m.contains("shape")) {
    throw Error(ErrorCode::Schema, "metadata does not describe a grid");
  }
  const GridShape s = shape_from_json(m["shape"]);
  ScalarGrid g(s);
  std::string line;
  if (!std::getline(is, line) || split(line, ',').size() != static_cast<std::size_t>(s.nx) + 1) {
    throw Error(ErrorCode::Schema, "grid header row does not match nx");
  }
  for (int j = 0; j < s.ny; ++j) {
    if (!std::getline(is, line)) throw Error(ErrorCode::Schema, "grid has fewer rows than ny");
    const auto cells = split(line, ',');
    if (cells.size() != static_cast<std::size_t>(s.nx) + 1) {
      throw Error(ErrorCode::Schema, "grid row " + std::to_string(j) + " has the wrong length");
    }
    for (int i = 0; i < s.nx; ++i) g(i, j) = parse_double(cells[i + 1]);
  }
  if (meta) *meta = m;
  return g;
}

json grid_to_json(const ScalarGrid& g, const json& meta) {
  json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "grid";
  j["shape"] = to_json(g.shape());
  if (meta.is_object()) {
    for (const auto& [k, v] : meta.items()) j[k] = v;
  }
  j["values"] = std::vector<double>(g.values().begin(), g.values().end());
  return j;
}

ScalarGrid grid_from_json(const json& j) {
  try {
    if (j.value("schema", 0) != kSchemaVersion) throw Error(ErrorCode::Schema, "unsupported schema");
    const GridShape s = shape_from_json(j.at("shape"));
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != s.size()) throw Error(ErrorCode::Schema, "values length differs from nx * ny");
    ScalarGrid g(s);
    std::copy(vals.begin(), vals.end(), g.values().begin());
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("grid json: ") + e.what());
  }
}

void write_radial_csv(std::ostream& os, const RadialSolution& rs, const json& meta) {
  json m;
  m["schema"] = kSchemaVersion;
  m["kind"] = "radial";
  if (meta.is_object()) {
    for (const auto& [k, v] : meta.items()) m[k] = v;
  }
  os << '#' << m.dump() << '\n' << "s,H,Hs\n";
  for (std::size_t k = 0; k < rs.size(); ++k) {
    os << format_double(rs.s[k]) << ',' << format_double(rs.H[k]) << ',' << format_double(rs.Hs[k])
       << '\n';
  }
}

RadialSolution read_radial_csv(std::istream& is, json* meta) {
  const json m = read_meta_line(is);
  if (m.value("kind", "") != "radial") throw Error(ErrorCode::Schema, "metadata does not describe a trajectory");
  std::string line;
  if (!std::getline(is, line) || line != "s,H,Hs") throw Error(ErrorCode::Schema, "expected header s,H,Hs");
  RadialSolution rs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw Error(ErrorCode::Schema, "trajectory rows need three columns");
    rs.s.push_back(parse_double(cells[0]));
    rs.H.push_back(parse_double(cells[1]));
    rs.Hs.push_back(parse_double(cells[2]));
  }
  if (meta) *meta = m;
  return rs;
}

json radial_to_json(const RadialSolution& rs, const PIIIParams& p) {
  json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "radial";
  j["params"] = to_json(p);
  j["s"] = rs.s;
  j["H"] = rs.H;
  j["Hs"] = rs.Hs;
  return j;
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + p.string() + "'");
}

}  // namespace semiflat
