#pragma once

#include <span>
#include <string>

#include "semiflat/grid.hpp"

namespace semiflat::cli {

/// Static SVG line plot of y against x with min/max tick labels.
std::string svg_line_plot(std::span<const double> x, std::span<const double> y, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

/// Heat map of a grid in chart coordinates. With log_scale the colour
/// encodes log10|value| (zeros take the floor of the nonzero range).
std::string svg_heat_map(const ScalarGrid& g, const std::string& title, bool log_scale);

}  // namespace semiflat::cli
