#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiflat/error.hpp"
#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"
#include "semiflat/hessian.hpp"

namespace semiflat::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kSchema = 4,
  kNumerical = 5,
  kDomain = 6,
  kVerifyFail = 7,
};

/// Text shown at the end of --help.
std::string exit_code_help();
int exit_code_for(ErrorCode code);

/// Bad or missing command-line input detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "NX,NY".
std::pair<int, int> parse_grid(const std::string& text);
/// "a,b,c,d".
std::array<double, 4> parse_domain(const std::string& text);
/// "1", "i", "-2.5i", "2-i", "0.5+3i".
Complex parse_complex(const std::string& text);
/// Comma-separated complex numbers.
std::vector<Complex> parse_complex_list(const std::string& text);
/// "zero", "const:RE[,IM]" or "monomial:N".
CubicDifferential parse_cubic(const std::string& text);
Sign parse_sign(const std::string& text);
std::string sign_name(Sign s);

/// Least-squares slope of log(err) against log(h).
double fitted_slope(std::span<const double> h, std::span<const double> err);
/// Max |g| over interior nodes that sit on multiples of `stride`, so that
/// refined grids are compared on the nodes of the coarsest one.
double max_on_coarse_nodes(const ScalarGrid& g, int stride);
/// Every other node of an odd-sized grid; throws UsageError otherwise.
ScalarGrid coarsened(const ScalarGrid& g);

/// Upper unit hemisphere v = sqrt(1 - |x|^2) with analytic derivatives.
GraphFunction unit_hemisphere();
/// Its Legendre dual -sqrt(1 + |p|^2).
double hemisphere_dual(double px, double py);

/// Report skeleton with schema version and command name.
Json report_header(const std::string& command);
void write_json(const std::filesystem::path& p, const Json& j);
void write_grid(const std::filesystem::path& p, const ScalarGrid& g, const Json& meta = {});
ScalarGrid read_grid(const std::filesystem::path& p, Json* meta = nullptr);

}  // namespace semiflat::cli
