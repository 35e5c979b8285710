#include "semiflat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semiflat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Three-point first-derivative weights at offset positions relative to node k.
struct Stencil3 {
  int start;
  double w[3];
};

Stencil3 first_derivative_stencil(int k, int n, double h) {
  if (k == 0) return {0, {-1.5 / h, 2.0 / h, -0.5 / h}};
  if (k == n - 1) return {n - 3, {0.5 / h, -2.0 / h, 1.5 / h}};
  return {k - 1, {-0.5 / h, 0.0, 0.5 / h}};
}

double second_derivative_1d(const double* f, std::ptrdiff_t stride, int k, int n, double h) {
  const double h2 = h * h;
  auto at = [&](int m) { return f[m * stride]; };
  if (k > 0 && k < n - 1) return (at(k - 1) - 2.0 * at(k) + at(k + 1)) / h2;
  if (n < 4) {
    const int b = k == 0 ? 0 : n - 3;
    return (at(b) - 2.0 * at(b + 1) + at(b + 2)) / h2;
  }
  if (k == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
  return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
}

}  // namespace

GridShape GridShape::cartesian(int nx, int ny, double xa, double xb, double ya, double yb) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidGrid, "need at least two nodes per axis");
  GridShape s;
  s.nx = nx;
  s.ny = ny;
  s.x0 = xa;
  s.y0 = ya;
  s.hx = (xb - xa) / (nx - 1);
  s.hy = (yb - ya) / (ny - 1);
  s.validate();
  return s;
}

GridShape GridShape::log_polar(int nt, int ntheta, double ra, double rb) {
  if (!(ra > 0.0) || !(rb > ra)) throw Error(ErrorCode::InvalidGrid, "annulus needs 0 < ra < rb");
  if (nt < 2 || ntheta < 1) throw Error(ErrorCode::InvalidGrid, "bad node counts");
  GridShape s;
  s.nx = nt;
  s.ny = ntheta;
  s.x0 = std::log(ra);
  s.y0 = 0.0;
  s.hx = (std::log(rb) - std::log(ra)) / (nt - 1);
  s.hy = kTwoPi / ntheta;
  s.chart = Chart::LogPolar;
  s.validate();
  return s;
}

void GridShape::validate() const {
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) {
    throw Error(ErrorCode::InvalidGrid, "grid spacings must be positive and finite");
  }
  if (nx < 3 || ny < 3) throw Error(ErrorCode::InvalidGrid, "grid needs at least 3x3 nodes");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw Error(ErrorCode::InvalidGrid, "non-finite origin");
  if (chart == Chart::LogPolar && std::abs(ny * hy - kTwoPi) > 1e-9) {
    throw Error(ErrorCode::InvalidGrid, "log-polar grid must close: ny * hy = 2 pi");
  }
}

bool GridShape::is_boundary(int i, int j) const {
  if (i == 0 || i == nx - 1) return true;
  if (!periodic_y() && (j == 0 || j == ny - 1)) return true;
  return false;
}

Complex GridShape::z(int i, int j) const {
  if (chart == Chart::Cartesian) return {x(i), y(j)};
  return std::exp(Complex(x(i), y(j)));
}

Complex GridShape::dz_dx(int i, int j) const {
  if (chart == Chart::Cartesian) return 1.0;
  return z(i, j);
}

Complex GridShape::dz_dy(int i, int j) const { return Complex(0.0, 1.0) * dz_dx(i, j); }

GridShape GridShape::refined() const {
  GridShape s = *this;
  s.nx = 2 * nx - 1;
  s.ny = periodic_y() ? 2 * ny : 2 * ny - 1;
  s.hx = hx / 2.0;
  s.hy = hy / 2.0;
  return s;
}

void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, std::string(what) + ": grid shapes differ");
}

int wrap_y(const GridShape& s, int j) {
  if (!s.periodic_y()) return j;
  return ((j % s.ny) + s.ny) % s.ny;
}

double d_dx(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  const Stencil3 st = first_derivative_stencil(i, s.nx, s.hx);
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) acc += st.w[k] * g(st.start + k, j);
  return acc;
}

double d_dy(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  if (s.periodic_y()) return (g(i, wrap_y(s, j + 1)) - g(i, wrap_y(s, j - 1))) / (2.0 * s.hy);
  const Stencil3 st = first_derivative_stencil(j, s.ny, s.hy);
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) acc += st.w[k] * g(i, st.start + k);
  return acc;
}

double d2_dx2(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  return second_derivative_1d(&g(0, j), 1, i, s.nx, s.hx);
}

double d2_dy2(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  if (s.periodic_y()) {
    return (g(i, wrap_y(s, j + 1)) - 2.0 * g(i, j) + g(i, wrap_y(s, j - 1))) / (s.hy * s.hy);
  }
  return second_derivative_1d(&g(i, 0), s.nx, j, s.ny, s.hy);
}

double d2_dxdy(const ScalarGrid& g, int i, int j) {
  const auto& s = g.shape();
  const Stencil3 st = first_derivative_stencil(i, s.nx, s.hx);
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (st.w[k] != 0.0) acc += st.w[k] * d_dy(g, st.start + k, j);
  }
  return acc;
}

Complex d_dz(const ScalarGrid& g, int i, int j) {
  const Complex zx = g.shape().dz_dx(i, j);
  return Complex(d_dx(g, i, j), -d_dy(g, i, j)) / (2.0 * zx);
}

Complex d_dzbar(const ScalarGrid& g, int i, int j) { return std::conj(d_dz(g, i, j)); }

double d2_dzdzbar(const ScalarGrid& g, int i, int j) {
  const double zx2 = std::norm(g.shape().dz_dx(i, j));
  return (d2_dx2(g, i, j) + d2_dy2(g, i, j)) / (4.0 * zx2);
}

double max_interior_abs(const ScalarGrid& g, int margin) {
  const auto& s = g.shape();
  double m = 0.0;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (s.is_boundary(i, j)) continue;
      if (i < margin || i >= s.nx - margin) continue;
      if (!s.periodic_y() && (j < margin || j >= s.ny - margin)) continue;
      m = std::max(m, std::abs(g(i, j)));
    }
  }
  return m;
}

CubicDifferential CubicDifferential::zero() { return {}; }

CubicDifferential CubicDifferential::constant(Complex c) {
  CubicDifferential u;
  u.kind_ = Kind::Constant;
  u.c_ = c;
  return u;
}

CubicDifferential CubicDifferential::monomial(int n) {
  CubicDifferential u;
  u.kind_ = Kind::MonomialPower;
  u.n_ = n;
  return u;
}

CubicDifferential CubicDifferential::callable(std::function<Complex(Complex)> f, std::string name) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "empty callable cubic differential");
  CubicDifferential u;
  u.kind_ = Kind::Callable;
  u.fn_ = std::make_shared<const std::function<Complex(Complex)>>(std::move(f));
  u.name_ = std::move(name);
  return u;
}

Complex CubicDifferential::operator()(Complex z) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return c_;
    case Kind::MonomialPower:
      if (n_ > 0 && z == Complex(0.0, 0.0)) {
        throw Error(ErrorCode::SingularU, "grid node at the pole z = 0 of U");
      }
      return std::pow(z, -n_);
    case Kind::Callable: {
      const Complex v = (*fn_)(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorCode::SingularU, "U is not finite at a grid node");
      }
      return v;
    }
  }
  return 0.0;
}

Complex CubicDifferential::derivative(Complex z) const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Constant:
      return 0.0;
    case Kind::MonomialPower:
      if (n_ == 0) return 0.0;
      if (z == Complex(0.0, 0.0)) throw Error(ErrorCode::SingularU, "derivative at the pole of U");
      return -static_cast<double>(n_) * std::pow(z, -n_ - 1);
    case Kind::Callable: {
      const double h = 1e-5 * std::max(1.0, std::abs(z));
      return ((*this)(z + h) - (*this)(z - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

nlohmann::ordered_json CubicDifferential::to_json() const {
  nlohmann::ordered_json j;
  switch (kind_) {
    case Kind::Zero:
      j["kind"] = "zero";
      break;
    case Kind::Constant:
      j["kind"] = "constant";
      j["re"] = c_.real();
      j["im"] = c_.imag();
      break;
    case Kind::MonomialPower:
      j["kind"] = "monomial";
      j["n"] = n_;
      break;
    case Kind::Callable:
      j["kind"] = "callable";
      j["name"] = name_;
      break;
  }
  return j;
}

CubicDifferential CubicDifferential::from_json(const nlohmann::ordered_json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return zero();
    if (kind == "constant") return constant({j.at("re").get<double>(), j.value("im", 0.0)});
    if (kind == "monomial") return monomial(j.at("n").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("cubic differential: ") + e.what());
  }
  throw Error(ErrorCode::Schema, "cubic differential kind must be zero, constant or monomial");
}

}  // namespace semiflat
