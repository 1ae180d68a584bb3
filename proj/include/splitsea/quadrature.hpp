#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "splitsea/errors.hpp"
#include "splitsea/model.hpp"

namespace splitsea {

struct Interval {
  double left;
  double right;
  double length() const { return right - left; }
};

// Origin of a sea configuration in quantum-number space: block edges I_ia
// (integers or half-odd integers) together with the system length L. The
// Fermi momenta are then pinned to k_ia = 2 pi I_ia / L.
struct BlockOrigin {
  std::vector<Interval> blocks;
  double length;
};

// n disjoint Fermi intervals [lambda_iL, lambda_iR], sorted ascending.
class SeaConfig {
public:
  explicit SeaConfig(std::vector<Interval> intervals,
                     std::optional<BlockOrigin> origin = std::nullopt);
  static SeaConfig single(double left, double right);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t seas() const { return intervals_.size(); }
  const std::optional<BlockOrigin>& origin() const { return origin_; }

  bool contains(double lambda) const;
  // max_i |lambda_iL + lambda_{n+1-i,R}|
  double asymmetry() const;
  bool is_symmetric(double tol = 1e-10) const { return asymmetry() <= tol; }

private:
  std::vector<Interval> intervals_;
  std::optional<BlockOrigin> origin_;
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// Composite Gauss-Legendre grid over the union of Fermi intervals.
// Weights carry the affine map, so sum(w_i) over interval i equals its length.
class Grid {
public:
  Grid(const SeaConfig& seas, int order);

  const std::vector<Interval>& intervals() const { return intervals_; }
  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  // node index range [begin, end) of interval i
  std::pair<std::size_t, std::size_t> interval_range(std::size_t i) const;

  double integrate(const Eigen::VectorXd& values) const;
  double integrate_interval(std::size_t i, const Eigen::VectorXd& values) const;
  Eigen::VectorXd sample(const std::function<double(double)>& f) const;

private:
  std::vector<Interval> intervals_;
  int order_;
  std::vector<double> nodes_, weights_;
};

Grid build_grid(const SeaConfig& seas, int order);

// A function known at the grid nodes. Solutions of solve() also keep their
// driving term and sign so they can be evaluated off-grid through the
// integral equation itself.
struct GridFunction {
  std::shared_ptr<const Grid> grid;
  Eigen::VectorXd values;
  std::function<double(double)> driving;  // empty unless a Fredholm solution
  double sign = 1.0;
};

// Nystrom discretization of f(x) = g(x) + sign * sum_i int (dv/2pi) K(x-v) f(v)
// over the grid, solved densely via one shared LU factorization. The
// factorization depends only on (grid, model, sign); all right-hand sides
// reuse it, and distinct solves may run concurrently.
class FredholmSolver {
public:
  FredholmSolver(std::shared_ptr<const Grid> grid, const ModelSpec& model,
                 double sign = 1.0);

  GridFunction solve(const std::function<double(double)>& driving) const;
  // Nystrom interpolation: exact at nodes, integral-equation-consistent
  // everywhere else. Requires f.driving.
  double eval(const GridFunction& f, double lambda) const;

  const std::shared_ptr<const Grid>& grid() const { return grid_; }
  const ModelSpec& model() const { return model_; }
  double sign() const { return sign_; }
  double rcond() const { return rcond_; }

private:
  std::shared_ptr<const Grid> grid_;
  ModelSpec model_;
  double sign_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 1.0;
};

// Free-function form of Nystrom off-grid evaluation (no factorization needed).
double nystrom_eval(const ModelSpec& model, const GridFunction& f,
                    double lambda);

}  // namespace splitsea
