#include "cli/common.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "semiflat/io.hpp"

namespace semiflat::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

double to_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("cannot read a number from '" + raw + "' in " + what);
  }
  return v;
}

int to_int(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw UsageError("cannot read an integer from '" + raw + "' in " + what);
  }
  return v;
}

}  // namespace

std::string exit_code_help() {
  return "Exit codes:\n"
         "  0  success\n"
         "  2  usage error (bad flag, missing input)\n"
         "  3  file could not be read or written\n"
         "  4  malformed input file\n"
         "  5  numerical failure (no convergence, blow-up, singular approach)\n"
         "  6  input outside the domain of an operation\n"
         "  7  verify: at least one check failed\n";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return kIo;
    case ErrorCode::Schema:
      return kSchema;
    case ErrorCode::NonConvergence:
    case ErrorCode::Blowup:
    case ErrorCode::SingularApproach:
    case ErrorCode::StepUnderflow:
    case ErrorCode::SingularFrame:
    case ErrorCode::DegenerateFrame:
    case ErrorCode::NonInvertibleGradient:
    case ErrorCode::SingularPair:
    case ErrorCode::BadNilpotent:
      return kNumerical;
    default:
      return kDomain;
  }
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--grid expects NX,NY, got '" + text + "'");
  return {to_int(parts[0], "--grid"), to_int(parts[1], "--grid")};
}

std::array<double, 4> parse_domain(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw UsageError("domain expects a,b,c,d, got '" + text + "'");
  std::array<double, 4> d{};
  for (int k = 0; k < 4; ++k) d[k] = to_double(parts[k], "domain");
  if (!(d[0] < d[1] && d[2] < d[3])) throw UsageError("domain needs a < b and c < d");
  return d;
}

Complex parse_complex(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw UsageError("empty complex number");
  if (s.back() != 'i') return {to_double(s, "complex number"), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_double(t, "complex number");
  };
  if (cut == std::string::npos) return {0.0, imag_of(s)};
  return {to_double(s.substr(0, cut), "complex number"), imag_of(s.substr(cut))};
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw UsageError("empty list of complex numbers");
  return out;
}

CubicDifferential parse_cubic(const std::string& text) {
  if (text == "zero") return CubicDifferential::zero();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "const") {
    const auto parts = split(arg, ',');
    if (parts.empty() || parts.size() > 2) throw UsageError("--U const:RE[,IM]");
    const double re = to_double(parts[0], "--U");
    const double im = parts.size() == 2 ? to_double(parts[1], "--U") : 0.0;
    return CubicDifferential::constant({re, im});
  }
  if (kind == "monomial") return CubicDifferential::monomial(to_int(arg, "--U"));
  throw UsageError("--U must be zero, const:RE[,IM] or monomial:N, got '" + text + "'");
}

Sign parse_sign(const std::string& text) {
  if (text == "plus" || text == "+" || text == "+1" || text == "1") return Sign::Plus;
  if (text == "minus" || text == "-" || text == "-1") return Sign::Minus;
  throw UsageError("sign must be plus or minus, got '" + text + "'");
}

std::string sign_name(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

double fitted_slope(std::span<const double> h, std::span<const double> err) {
  const std::size_t n = h.size();
  if (n < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(h[k]);
    my += std::log(err[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(h[k]) - mx;
    sxy += dx * (std::log(err[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double max_on_coarse_nodes(const ScalarGrid& g, int stride) {
  const auto& s = g.shape();
  double m = 0.0;
  for (int j = 0; j < s.ny; j += stride)
    for (int i = 0; i < s.nx; i += stride)
      if (!s.is_boundary(i, j)) m = std::max(m, std::abs(g(i, j)));
  return m;
}

ScalarGrid coarsened(const ScalarGrid& g) {
  const auto& s = g.shape();
  if (s.chart != Chart::Cartesian || s.nx % 2 == 0 || s.ny % 2 == 0 || s.nx < 9 || s.ny < 9) {
    throw UsageError("coarsening needs a Cartesian grid with odd sizes of at least 9");
  }
  GridShape c = s;
  c.nx = (s.nx + 1) / 2;
  c.ny = (s.ny + 1) / 2;
  c.hx = 2 * s.hx;
  c.hy = 2 * s.hy;
  ScalarGrid out(c);
  for (int j = 0; j < c.ny; ++j)
    for (int i = 0; i < c.nx; ++i) out(i, j) = g(2 * i, 2 * j);
  return out;
}

GraphFunction unit_hemisphere() {
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

double hemisphere_dual(double px, double py) { return -std::sqrt(1.0 + px * px + py * py); }

Json report_header(const std::string& command) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

void write_json(const std::filesystem::path& p, const Json& j) { write_text_file(p, j.dump(2) + "\n"); }

void write_grid(const std::filesystem::path& p, const ScalarGrid& g, const Json& meta) {
  std::ostringstream os;
  write_grid_csv(os, g, meta);
  write_text_file(p, os.str());
}

ScalarGrid read_grid(const std::filesystem::path& p, Json* meta) {
  std::istringstream is(read_text_file(p));
  return read_grid_csv(is, meta);
}

}  // namespace semiflat::cli
