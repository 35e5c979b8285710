#include "semiflat/hessian.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/LU>

#include "semiflat/error.hpp"

namespace semiflat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

void require_cartesian(const GridShape& s) {
  if (s.chart != Chart::Cartesian) throw Error(ErrorCode::InvalidGrid, "graph grids must be Cartesian");
}

struct Jet2 {
  double v;
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
};

Jet2 grid_jet(const ScalarGrid& g, int i, int j) {
  Jet2 J;
  J.v = g(i, j);
  J.grad << d_dx(g, i, j), d_dy(g, i, j);
  const double xy = d2_dxdy(g, i, j);
  J.hess << d2_dx2(g, i, j), xy, xy, d2_dy2(g, i, j);
  return J;
}

double support_of(const Jet2& J, const Eigen::Vector2d& x) { return x.dot(J.grad) - J.v; }

}  // namespace

GraphFunction::GraphFunction(int dim, ValueFn v, GradFn g, HessFn h, double fd_step)
    : dim_(dim), v_(std::move(v)), g_(std::move(g)), h_(std::move(h)), fd_step_(fd_step) {
  if (dim_ < 1) throw Error(ErrorCode::InvalidArgument, "graph dimension must be positive");
  if (!v_) throw Error(ErrorCode::InvalidArgument, "graph needs a value callable");
}

double GraphFunction::value(const Vec& x) const { return v_(x); }

Vec GraphFunction::gradient(const Vec& x) const {
  if (g_) return g_(x);
  Vec g(dim_);
  for (int a = 0; a < dim_; ++a) {
    Vec xp = x, xm = x;
    xp(a) += fd_step_;
    xm(a) -= fd_step_;
    g(a) = (v_(xp) - v_(xm)) / (2.0 * fd_step_);
  }
  return g;
}

Mat GraphFunction::hessian(const Vec& x) const {
  if (h_) return h_(x);
  Mat H(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    Vec xp = x, xm = x;
    xp(a) += fd_step_;
    xm(a) -= fd_step_;
    H.col(a) = (gradient(xp) - gradient(xm)) / (2.0 * fd_step_);
  }
  return 0.5 * (H + H.transpose());
}

double GraphFunction::support(const Vec& x) const { return x.dot(gradient(x)) - value(x); }

Mat graph_metric(const GraphFunction& v, const Vec& x) {
  const double d = v.support(x);
  if (d == 0.0 || !std::isfinite(d)) {
    throw Error(ErrorCode::VanishingSupport, "x . grad v - v vanishes");
  }
  return v.hessian(x) / d;
}

double tzitzeica_residual(const GraphFunction& v, const Vec& x, Sign sign) {
  const double d = v.value(x) - x.dot(v.gradient(x));
  return v.hessian(x).determinant() - sign_value(sign) * std::pow(d, v.dim() + 2);
}

MetricGrid graph_metric(const ScalarGrid& v) {
  const auto& s = v.shape();
  require_cartesian(s);
  MetricGrid m{s, std::vector<Eigen::Matrix2d>(s.size(), Eigen::Matrix2d::Zero())};
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const Jet2 J = grid_jet(v, i, j);
      const double d = support_of(J, {s.x(i), s.y(j)});
      if (d == 0.0 || !std::isfinite(d)) {
        throw Error(ErrorCode::VanishingSupport, "x . grad v - v vanishes at a node");
      }
      m.h[s.index(i, j)] = J.hess / d;
    }
  }
  return m;
}

ScalarGrid tzitzeica_residual(const ScalarGrid& v, Sign sign) {
  const auto& s = v.shape();
  require_cartesian(s);
  ScalarGrid r(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (s.is_boundary(i, j)) continue;
      const Jet2 J = grid_jet(v, i, j);
      const double d = -support_of(J, {s.x(i), s.y(j)});
      r(i, j) = J.hess.determinant() - sign_value(sign) * std::pow(d, 4);
    }
  }
  return r;
}

Vec invert_gradient(const GraphFunction& v, const Vec& p, Vec seed, const LegendreOptions& opt) {
  Vec x = std::move(seed);
  auto misfit = [&](const Vec& y, Vec& r) {
    r = v.gradient(y) - p;
    const double n = r.lpNorm<Eigen::Infinity>();
    return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
  };
  Vec r;
  double err = misfit(x, r);
  if (!std::isfinite(err)) {
    throw Error(ErrorCode::NonInvertibleGradient, "Newton seed lies outside the domain of v");
  }
  for (int it = 0; it < opt.max_iterations && err > opt.tol; ++it) {
    const Mat H = v.hessian(x);
    Eigen::FullPivLU<Mat> lu(H);
    if (!lu.isInvertible()) throw Error(ErrorCode::NonInvertibleGradient, "Hessian is degenerate");
    const Vec step = lu.solve(r);
    double alpha = 1.0;
    Vec trial, rt;
    double et = 0.0;
    int h = 0;
    for (;;) {
      trial = x - alpha * step;
      et = misfit(trial, rt);
      if (et < err) break;
      if (++h > opt.max_halvings) {
        throw Error(ErrorCode::NonInvertibleGradient, "p is outside the gradient image");
      }
      alpha *= 0.5;
    }
    x = trial;
    r = rt;
    err = et;
  }
  if (err > opt.tol) {
    throw Error(ErrorCode::NonInvertibleGradient,
                "gradient inversion stalled at residual " + std::to_string(err));
  }
  return x;
}

LegendreDual legendre(const GraphFunction& v, const GridShape& p_grid, const Eigen::Vector2d& seed,
                      const LegendreOptions& opt) {
  require_cartesian(p_grid);
  if (v.dim() != 2) throw Error(ErrorCode::InvalidArgument, "grid Legendre transform needs n = 2");
  LegendreDual out{ScalarGrid(p_grid), std::vector<Eigen::Vector2d>(p_grid.size()), 0.0};
  Eigen::Vector2d prev = seed;
  for (int j = 0; j < p_grid.ny; ++j) {
    for (int i = 0; i < p_grid.nx; ++i) {
      // Nearest solved neighbour: left in the row, else the node below.
      Eigen::Vector2d start = prev;
      if (i == 0 && j > 0) start = out.preimage[p_grid.index(0, j - 1)];
      const Vec p = Eigen::Vector2d(p_grid.x(i), p_grid.y(j));
      const Vec x = invert_gradient(v, p, start, opt);
      out.preimage[p_grid.index(i, j)] = x;
      out.w(i, j) = x.dot(p) - v.value(x);
      out.max_gradient_error =
          std::max(out.max_gradient_error, (v.gradient(x) - p).lpNorm<Eigen::Infinity>());
      prev = x;
    }
  }
  return out;
}

GraphFunction legendre_function(const GraphFunction& v, const Vec& seed, const LegendreOptions& opt) {
  auto last = std::make_shared<Vec>(seed);
  auto pre = [v, last, opt](const Vec& p) {
    *last = invert_gradient(v, p, *last, opt);
    return *last;
  };
  auto value = [v, pre](const Vec& p) {
    const Vec x = pre(p);
    return x.dot(p) - v.value(x);
  };
  auto grad = [pre](const Vec& p) { return pre(p); };
  auto hess = [v, pre](const Vec& p) -> Mat { return v.hessian(pre(p)).inverse(); };
  return GraphFunction(v.dim(), value, grad, hess);
}

double dual_ma_residual(const GraphFunction& w, const Vec& p) {
  const double wv = w.value(p);
  if (wv == 0.0) throw Error(ErrorCode::VanishingW, "w vanishes");
  return w.hessian(p).determinant() - 1.0 / std::pow(wv, w.dim() + 2);
}

ScalarGrid dual_ma_residual(const ScalarGrid& w) {
  const auto& s = w.shape();
  require_cartesian(s);
  ScalarGrid r(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (w(i, j) == 0.0) throw Error(ErrorCode::VanishingW, "w vanishes at a node");
      if (s.is_boundary(i, j)) continue;
      const Jet2 J = grid_jet(w, i, j);
      r(i, j) = J.hess.determinant() - 1.0 / std::pow(J.v, 4);
    }
  }
  return r;
}

Mat dual_metric(const GraphFunction& w, const Vec& p) {
  const double wv = w.value(p);
  if (wv == 0.0) throw Error(ErrorCode::VanishingW, "w vanishes");
  return w.hessian(p) / wv;
}

}  // namespace semiflat
