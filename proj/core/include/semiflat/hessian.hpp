#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "semiflat/gauge.hpp"
#include "semiflat/grid.hpp"

namespace semiflat {

/// Graph x_{n+1} = v(x) of a hypersurface over R^n, given by callables.
/// Missing derivatives fall back to centred differences with step fd_step.
class GraphFunction {
 public:
  using Vec = Eigen::VectorXd;
  using Mat = Eigen::MatrixXd;
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  GraphFunction(int dim, ValueFn v, GradFn g = {}, HessFn h = {}, double fd_step = 1e-4);

  int dim() const { return dim_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  /// x . grad v - v.
  double support(const Vec& x) const;

 private:
  int dim_;
  ValueFn v_;
  GradFn g_;
  HessFn h_;
  double fd_step_;
};

/// h = v_ab / (x . grad v - v). Throws VanishingSupport.
Eigen::MatrixXd graph_metric(const GraphFunction& v, const Eigen::VectorXd& x);
/// det(v_ab) - sign (v - x . grad v)^{n+2}.
double tzitzeica_residual(const GraphFunction& v, const Eigen::VectorXd& x, Sign sign);

/// Metric samples on a grid of graph values (n = 2, Cartesian chart).
struct MetricGrid {
  GridShape shape;
  std::vector<Eigen::Matrix2d> h;
  const Eigen::Matrix2d& at(int i, int j) const { return h[shape.index(i, j)]; }
};
MetricGrid graph_metric(const ScalarGrid& v);
/// Interior nodes only; boundary entries are zero.
ScalarGrid tzitzeica_residual(const ScalarGrid& v, Sign sign);

struct LegendreOptions {
  double tol = 1e-12;  ///< on |grad v(x) - p|
  int max_iterations = 60;
  int max_halvings = 40;
};

/// Solves grad v(x) = p by damped Newton from `seed`. Throws
/// NonInvertibleGradient when the Hessian degenerates or Newton stalls.
Eigen::VectorXd invert_gradient(const GraphFunction& v, const Eigen::VectorXd& p,
                                Eigen::VectorXd seed, const LegendreOptions& opt = {});

struct LegendreDual {
  ScalarGrid w;
  std::vector<Eigen::Vector2d> preimage;
  double max_gradient_error = 0.0;
};
/// w(p) = x . p - v(x) at x = (grad v)^{-1}(p) on every node of a Cartesian
/// p-grid. Nodes are solved row by row, each seeded from the previously
/// solved neighbour; the first node uses `seed`.
LegendreDual legendre(const GraphFunction& v, const GridShape& p_grid, const Eigen::Vector2d& seed,
                      const LegendreOptions& opt = {});

/// The Legendre conjugate as a callable: value x . p - v(x), gradient x and
/// Hessian (v_xx)^{-1} at the preimage x of p. Preimages are found by Newton
/// starting from the previous call's answer (initially `seed`).
GraphFunction legendre_function(const GraphFunction& v, const Eigen::VectorXd& seed,
                                const LegendreOptions& opt = {});

/// det(w_pp) - 1 / w^{n+2}. Throws VanishingW.
double dual_ma_residual(const GraphFunction& w, const Eigen::VectorXd& p);
ScalarGrid dual_ma_residual(const ScalarGrid& w);
/// (1/w) w_pp.
Eigen::MatrixXd dual_metric(const GraphFunction& w, const Eigen::VectorXd& p);

}  // namespace semiflat
