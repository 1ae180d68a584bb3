#include "splitsea/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace splitsea {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

SeaConfig::SeaConfig(std::vector<Interval> intervals,
                     std::optional<BlockOrigin> origin)
    : intervals_(std::move(intervals)), origin_(std::move(origin)) {
  if (intervals_.empty()) throw ConfigError("sea configuration is empty");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(intervals_[i].left < intervals_[i].right))
      throw ConfigError("sea interval " + std::to_string(i) + " is reversed");
    if (i > 0 && !(intervals_[i].left > intervals_[i - 1].right))
      throw ConfigError("sea intervals overlap or are out of order");
  }
}

SeaConfig SeaConfig::single(double left, double right) {
  return SeaConfig({{left, right}});
}

bool SeaConfig::contains(double lambda) const {
  for (const auto& iv : intervals_)
    if (lambda >= iv.left && lambda <= iv.right) return true;
  return false;
}

double SeaConfig::asymmetry() const {
  const std::size_t n = intervals_.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(
        worst, std::abs(intervals_[i].left + intervals_[n - 1 - i].right));
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

GaussLegendre compute_gauss_legendre(int m) {
  // Newton iteration on P_m with the Chebyshev-like initial guess.
  GaussLegendre gl;
  gl.nodes.resize(m);
  gl.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) gl.nodes[m / 2] = 0.0;
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

Grid::Grid(const SeaConfig& seas, int order)
    : intervals_(seas.intervals()), order_(order) {
  if (order < 2) throw ConfigError("quadrature order must be >= 2");
  const auto& gl = gauss_legendre(order);
  nodes_.reserve(intervals_.size() * order);
  weights_.reserve(intervals_.size() * order);
  for (const auto& iv : intervals_) {
    const double mid = 0.5 * (iv.left + iv.right);
    const double half = 0.5 * iv.length();
    for (int k = 0; k < order; ++k) {
      nodes_.push_back(mid + half * gl.nodes[k]);
      weights_.push_back(half * gl.weights[k]);
    }
  }
}

std::pair<std::size_t, std::size_t> Grid::interval_range(std::size_t i) const {
  const auto m = static_cast<std::size_t>(order_);
  return {i * m, (i + 1) * m};
}

double Grid::integrate(const Eigen::VectorXd& values) const {
  double s = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * values[k];
  return s;
}

double Grid::integrate_interval(std::size_t i,
                                const Eigen::VectorXd& values) const {
  auto [b, e] = interval_range(i);
  double s = 0.0;
  for (std::size_t k = b; k < e; ++k) s += weights_[k] * values[k];
  return s;
}

Eigen::VectorXd Grid::sample(const std::function<double(double)>& f) const {
  Eigen::VectorXd v(size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) v[k] = f(nodes_[k]);
  return v;
}

Grid build_grid(const SeaConfig& seas, int order) { return Grid(seas, order); }

// ---------------------------------------------------------------------------

FredholmSolver::FredholmSolver(std::shared_ptr<const Grid> grid,
                               const ModelSpec& model, double sign)
    : grid_(std::move(grid)), model_(model), sign_(sign) {
  const auto n = static_cast<Eigen::Index>(grid_->size());
  const auto& x = grid_->nodes();
  const auto& w = grid_->weights();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      a(j, k) = (j == k ? 1.0 : 0.0) -
                sign_ * w[k] * model_.K(x[j] - x[k]) / kTwoPi;
  lu_.compute(a);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-12))
    throw SingularSystemError(
        "Nystrom matrix numerically singular (rcond " + std::to_string(rcond_) +
        "); pathological kernel/interval combination");
}

GridFunction FredholmSolver::solve(
    const std::function<double(double)>& driving) const {
  GridFunction f;
  f.grid = grid_;
  f.driving = driving;
  f.sign = sign_;
  const Eigen::VectorXd g = grid_->sample(driving);
  f.values = lu_.solve(g);
  // One step of iterative refinement keeps the discrete residual at the
  // rounding floor independent of the right-hand side scale.
  const auto& x = grid_->nodes();
  const auto& w = grid_->weights();
  const auto n = static_cast<Eigen::Index>(grid_->size());
  Eigen::VectorXd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = f.values[j];
    for (Eigen::Index k = 0; k < n; ++k)
      acc -= sign_ * w[k] * model_.K(x[j] - x[k]) / kTwoPi * f.values[k];
    r[j] = g[j] - acc;
  }
  f.values += lu_.solve(r);
  return f;
}

double FredholmSolver::eval(const GridFunction& f, double lambda) const {
  return nystrom_eval(model_, f, lambda);
}

double nystrom_eval(const ModelSpec& model, const GridFunction& f,
                    double lambda) {
  if (!f.driving)
    throw Error("grid function has no driving term; off-grid evaluation "
                "requires a Fredholm solution");
  const auto& x = f.grid->nodes();
  const auto& w = f.grid->weights();
  double acc = f.driving(lambda);
  for (std::size_t k = 0; k < x.size(); ++k)
    acc += f.sign * w[k] * model.K(lambda - x[k]) / kTwoPi * f.values[k];
  return acc;
}

}  // namespace splitsea
