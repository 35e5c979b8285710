#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiflat/error.hpp"

namespace semiflat {

using Complex = std::complex<double>;

/// How grid coordinates (x, y) map to the complex plane.
/// Cartesian: z = x + i y. LogPolar: z = exp(x + i y), y periodic with ny*hy = 2 pi.
enum class Chart { Cartesian, LogPolar };

struct GridShape {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 1.0;
  double hy = 1.0;
  Chart chart = Chart::Cartesian;

  /// Uniform grid with nx x ny nodes covering [xa, xb] x [ya, yb] inclusive.
  static GridShape cartesian(int nx, int ny, double xa, double xb, double ya, double yb);
  /// Annulus r in [ra, rb], full turn in angle (ny nodes, periodic).
  static GridShape log_polar(int nt, int ntheta, double ra, double rb);

  /// Throws InvalidGrid unless hx, hy > 0, nx, ny >= 3 and the log-polar period closes.
  void validate() const;

  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  bool periodic_y() const { return chart == Chart::LogPolar; }
  /// Dirichlet boundary: x edges always, y edges unless periodic.
  bool is_boundary(int i, int j) const;

  Complex z(int i, int j) const;
  Complex dz_dx(int i, int j) const;
  Complex dz_dy(int i, int j) const;

  /// Same chart and extent with spacing halved (2n - 1 nodes, or 2n when periodic).
  GridShape refined() const;

  bool operator==(const GridShape&) const = default;
};

template <class T>
class BasicGrid {
 public:
  BasicGrid() = default;
  explicit BasicGrid(const GridShape& shape, T fill = T{})
      : shape_(shape), values_((shape.validate(), shape.size()), fill) {}

  const GridShape& shape() const { return shape_; }
  int nx() const { return shape_.nx; }
  int ny() const { return shape_.ny; }

  T& operator()(int i, int j) { return values_[shape_.index(i, j)]; }
  const T& operator()(int i, int j) const { return values_[shape_.index(i, j)]; }

  /// Row-major in y: values()[j * nx + i].
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  template <class F>
  static BasicGrid from_function(const GridShape& shape, F&& f) {
    BasicGrid g(shape);
    for (int j = 0; j < shape.ny; ++j) {
      for (int i = 0; i < shape.nx; ++i) g(i, j) = f(shape.x(i), shape.y(j));
    }
    return g;
  }

 private:
  GridShape shape_{};
  std::vector<T> values_;
};

using ScalarGrid = BasicGrid<double>;

/// Throws GridMismatch if the two shapes differ.
void require_same_shape(const GridShape& a, const GridShape& b, const char* what);

/// Wraps j into [0, ny) on periodic grids.
int wrap_y(const GridShape& s, int j);

// Second-order finite differences in chart coordinates. Interior nodes use
// centered stencils; x edges (and y edges of non-periodic grids) use
// one-sided three-point stencils.
double d_dx(const ScalarGrid& g, int i, int j);
double d_dy(const ScalarGrid& g, int i, int j);
double d2_dx2(const ScalarGrid& g, int i, int j);
double d2_dy2(const ScalarGrid& g, int i, int j);
/// Centered mixed derivative; valid at nodes with four diagonal neighbours.
double d2_dxdy(const ScalarGrid& g, int i, int j);

/// Complex derivatives of a real field, chart aware.
Complex d_dz(const ScalarGrid& g, int i, int j);
Complex d_dzbar(const ScalarGrid& g, int i, int j);
/// psi_{z zbar} = (1/4) Laplacian in the z-plane (5-point stencil, interior only).
double d2_dzdzbar(const ScalarGrid& g, int i, int j);

/// Max |value| over nodes that are not on the Dirichlet boundary. Skips
/// `margin` additional layers when margin > 0.
double max_interior_abs(const ScalarGrid& g, int margin = 0);

/// Holomorphic cubic differential U(z) dz^3.
class CubicDifferential {
 public:
  enum class Kind { Zero, Constant, MonomialPower, Callable };

  static CubicDifferential zero();
  static CubicDifferential constant(Complex c);
  /// U(z) = z^{-n}.
  static CubicDifferential monomial(int n);
  static CubicDifferential callable(std::function<Complex(Complex)> f, std::string name);

  Kind kind() const { return kind_; }
  Complex constant_value() const { return c_; }
  int power() const { return n_; }

  /// Throws SingularU at a pole.
  Complex operator()(Complex z) const;
  /// dU/dz, analytic for the closed-form kinds and a centered difference otherwise.
  Complex derivative(Complex z) const;
  bool is_zero() const { return kind_ == Kind::Zero; }

  nlohmann::ordered_json to_json() const;
  /// Accepts {"kind":"zero"}, {"kind":"constant","re":..,"im":..}, {"kind":"monomial","n":..}.
  static CubicDifferential from_json(const nlohmann::ordered_json& j);

 private:
  Kind kind_ = Kind::Zero;
  Complex c_{0.0, 0.0};
  int n_ = 0;
  std::shared_ptr<const std::function<Complex(Complex)>> fn_;
  std::string name_;
};

}  // namespace semiflat
