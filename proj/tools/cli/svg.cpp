#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace semiflat::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v, const char* f = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
}

// Piecewise-linear blue-green-yellow ramp.
std::string colour(double t) {
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                           {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - k;
  char buf[16];
  int c[3];
  for (int q = 0; q < 3; ++q) c[q] = static_cast<int>(std::lround(stops[k][q] * (1 - f) + stops[k + 1][q] * f));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::pair<double, double> padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::string svg_line_plot(std::span<const double> x, std::span<const double> y, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
  std::ostringstream os;
  open_svg(os, title);
  const auto [x0, x1] = padded_range(*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end()));
  const auto [y0, y1] = padded_range(*std::min_element(y.begin(), y.end()), *std::max_element(y.begin(), y.end()));
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? " " : "") << num(px(x[k])) << "," << num(py(y[k]));
  os << "\"/>\n";
  const double base = kTop + ph;
  os << "<text x=\"" << kLeft << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">" << num(x0, "%.4g") << "</text>\n"
     << "<text x=\"" << kLeft + pw << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">" << num(x1, "%.4g") << "</text>\n"
     << "<text x=\"" << kLeft - 6 << "\" y=\"" << base << "\" text-anchor=\"end\">" << num(y0, "%.4g") << "</text>\n"
     << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">" << num(y1, "%.4g") << "</text>\n"
     << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
     << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">" << escape(y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string svg_heat_map(const ScalarGrid& g, const std::string& title, bool log_scale) {
  std::ostringstream os;
  open_svg(os, title);
  auto value = [&](double v) { return log_scale ? std::log10(std::abs(v)) : v; };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : g.values()) {
    if (log_scale && v == 0.0) continue;
    lo = std::min(lo, value(v));
    hi = std::max(hi, value(v));
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const auto [c0, c1] = padded_range(lo, hi);
  const double pw = kWidth - kLeft - kRight - 60, ph = kHeight - kTop - kBottom;
  const double cw = pw / g.nx(), ch = ph / g.ny();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double v = g(i, j);
      const double t = (log_scale && v == 0.0) ? 0.0 : (value(v) - c0) / (c1 - c0);
      os << "<rect x=\"" << num(kLeft + i * cw) << "\" y=\"" << num(kTop + (g.ny() - 1 - j) * ch)
         << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\"" << colour(t)
         << "\"/>\n";
    }
  }
  const double lx = kLeft + pw + 20;
  for (int k = 0; k < 20; ++k) {
    os << "<rect x=\"" << lx << "\" y=\"" << num(kTop + ph * (19 - k) / 20.0) << "\" width=\"14\" height=\""
       << num(ph / 20.0 + 0.5) << "\" fill=\"" << colour((k + 0.5) / 20.0) << "\"/>\n";
  }
  const std::string tag = log_scale ? "log10 " : "";
  os << "<text x=\"" << lx + 7 << "\" y=\"" << kTop - 6 << "\" text-anchor=\"middle\">" << tag << num(c1, "%.3g") << "</text>\n"
     << "<text x=\"" << lx + 7 << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << tag << num(c0, "%.3g") << "</text>\n"
     << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">x in ["
     << num(g.shape().x(0), "%.3g") << ", " << num(g.shape().x(g.nx() - 1), "%.3g") << "], y in ["
     << num(g.shape().y(0), "%.3g") << ", " << num(g.shape().y(g.ny() - 1), "%.3g") << "]</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace semiflat::cli
