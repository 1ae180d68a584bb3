#include "splitsea/dressed.hpp"

#include <cmath>

namespace splitsea {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

DressedState DressedState::compute(const ModelSpec& model,
                                   const BareCharge& charge,
                                   const SeaConfig& seas, int order) {
  return DressedState(model, charge, seas, order);
}

DressedState::DressedState(const ModelSpec& model, const BareCharge& charge,
                           const SeaConfig& seas, int order)
    : model_(model), charge_(charge), seas_(seas) {
  grid_ = std::make_shared<const Grid>(seas_, order);
  solver_ = std::make_shared<const FredholmSolver>(grid_, model_, 1.0);

  const ModelSpec m = model_;
  rho_ = solver_->solve([m](double x) { return m.p0_prime(x) / kTwoPi; });
  zfun_ = solver_->solve([](double) { return 1.0; });
  const BareCharge ch = charge_;
  eps_ = solver_->solve([ch](double x) { return ch.eps0(x); });

  // Fermi points and the cached shift/resolvent columns.
  const std::size_t n = seas_.seas();
  fermi_.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = seas_.intervals()[i];
    for (int a = 0; a < 2; ++a) {
      FermiPoint& pt = fermi_[2 * i + a];
      pt.sea = static_cast<int>(i);
      pt.side = a == 0 ? Side::Left : Side::Right;
      pt.sign = a == 0 ? -1.0 : 1.0;
      pt.lambda = a == 0 ? iv.left : iv.right;
    }
  }

  // eps' solves the equation obtained by differentiating the dressed-energy
  // equation and integrating by parts; the moving-endpoint boundary terms
  // enter the driving with sign -s_a.
  std::vector<double> eps_edge(fermi_.size());
  for (std::size_t q = 0; q < fermi_.size(); ++q)
    eps_edge[q] = nystrom_eval(model_, eps_, fermi_[q].lambda);
  {
    std::vector<double> edge_lambda(fermi_.size()), edge_sign(fermi_.size());
    for (std::size_t q = 0; q < fermi_.size(); ++q) {
      edge_lambda[q] = fermi_[q].lambda;
      edge_sign[q] = fermi_[q].sign;
    }
    eps_prime_ = solver_->solve([m, ch, edge_lambda, edge_sign,
                                 eps_edge](double x) {
      double g = ch.eps0_prime(x);
      for (std::size_t q = 0; q < edge_lambda.size(); ++q)
        g -= edge_sign[q] * m.K(x - edge_lambda[q]) * eps_edge[q] / kTwoPi;
      return g;
    });
  }

  f_cols_.reserve(fermi_.size());
  l_cols_.reserve(fermi_.size());
  for (const auto& pt : fermi_) {
    const double lp = pt.lambda;
    f_cols_.push_back(
        solver_->solve([m, lp](double x) { return m.theta(x - lp) / kTwoPi; }));
    l_cols_.push_back(
        solver_->solve([m, lp](double x) { return m.K(x - lp) / kTwoPi; }));
  }

  const auto np = static_cast<Eigen::Index>(fermi_.size());
  fval_.resize(np, np);
  Eigen::MatrixXd lval(np, np);
  for (Eigen::Index q = 0; q < np; ++q)
    for (Eigen::Index p = 0; p < np; ++p) {
      fval_(p, q) = nystrom_eval(model_, f_cols_[q], fermi_[p].lambda);
      lval(p, q) = nystrom_eval(model_, l_cols_[q], fermi_[p].lambda);
    }

  u_.resize(np, np);
  u_inv_.resize(np, np);
  for (Eigen::Index p = 0; p < np; ++p)
    for (Eigen::Index q = 0; q < np; ++q) {
      const double delta = p == q ? 1.0 : 0.0;
      u_(p, q) = delta - fermi_[q].sign * fval_(p, q);
      u_inv_(p, q) = delta - fermi_[q].sign * fval_(q, p);
    }

  for (std::size_t q = 0; q < fermi_.size(); ++q) {
    FermiPoint& pt = fermi_[q];
    pt.rho = nystrom_eval(model_, rho_, pt.lambda);
    pt.eps = eps_edge[q];
    pt.eps_prime = nystrom_eval(model_, eps_prime_, pt.lambda);
    double et = pt.eps, etp = pt.eps_prime;
    for (std::size_t p = 0; p < fermi_.size(); ++p) {
      et -= fermi_[p].sign * eps_edge[p] * fval_(p, q);
      etp += fermi_[p].sign * eps_edge[p] * lval(p, q);
    }
    pt.eps_tilde = et;
    pt.eps_tilde_prime = etp;
    pt.v = pt.eps_prime / (kTwoPi * pt.rho);
    pt.v_tilde = pt.eps_tilde_prime / (kTwoPi * pt.rho);
  }

  // Dressed momenta at the points: exact quantum-number anchors when the
  // seas came from blocks, otherwise the defining integral.
  if (seas_.origin()) {
    const auto& origin = *seas_.origin();
    for (std::size_t i = 0; i < origin.blocks.size(); ++i) {
      fermi_[2 * i].k = kTwoPi * origin.blocks[i].left / origin.length;
      fermi_[2 * i + 1].k = kTwoPi * origin.blocks[i].right / origin.length;
    }
  } else {
    for (auto& pt : fermi_) pt.k = momentum(pt.lambda);
  }

  Eigen::VectorXd eps0_nodes = grid_->sample([ch](double x) { return ch.eps0(x); });
  e_inf_ = grid_->integrate(eps0_nodes.cwiseProduct(rho_.values));
  c_cas_ = 0.0;
  for (const auto& pt : fermi_) c_cas_ -= pt.sign * pt.eps_prime / (24.0 * pt.rho);
}

GridFunction DressedState::solve_shift_column(double lambda_prime,
                                              bool bosonic) const {
  const ModelSpec m = model_;
  const double shift = bosonic ? kPi : 0.0;
  return solver_->solve([m, lambda_prime, shift](double x) {
    return (m.theta(x - lambda_prime) - shift) / kTwoPi;
  });
}

GridFunction DressedState::solve_resolvent_column(double lambda_prime) const {
  const ModelSpec m = model_;
  return solver_->solve([m, lambda_prime](double x) {
    return m.K(x - lambda_prime) / kTwoPi;
  });
}

GridFunction DressedState::solve_density_correction(
    const FermiPoint& point) const {
  const ModelSpec m = model_;
  const double lp = point.lambda;
  return solver_->solve(
      [m, lp](double x) { return m.K_prime(x - lp) / kTwoPi; });
}

double DressedState::rho_at(double lambda) const {
  return nystrom_eval(model_, rho_, lambda);
}

double DressedState::Z_at(double lambda) const {
  return nystrom_eval(model_, zfun_, lambda);
}

double DressedState::eps_at(double lambda) const {
  return nystrom_eval(model_, eps_, lambda);
}

double DressedState::eps_prime_at(double lambda) const {
  return nystrom_eval(model_, eps_prime_, lambda);
}

double DressedState::F(double lambda, double lambda_prime) const {
  return nystrom_eval(model_, solve_shift_column(lambda_prime), lambda);
}

double DressedState::resolvent(double lambda, double lambda_prime) const {
  return nystrom_eval(model_, solve_resolvent_column(lambda_prime), lambda);
}

double DressedState::F_column_at(std::size_t q, double lambda) const {
  return nystrom_eval(model_, f_cols_[q], lambda);
}

double DressedState::resolvent_column_at(std::size_t q, double lambda) const {
  return nystrom_eval(model_, l_cols_[q], lambda);
}

Dispersion DressedState::dispersion(double lambda) const {
  const GridFunction col = solve_shift_column(lambda);
  double et = eps_at(lambda);
  double etp = eps_prime_at(lambda);
  for (std::size_t p = 0; p < fermi_.size(); ++p) {
    const double f_p = nystrom_eval(model_, col, fermi_[p].lambda);
    et -= fermi_[p].sign * fermi_[p].eps * f_p;
    // L(lambda_p | lambda) = L(lambda | lambda_p) via resolvent symmetry.
    etp += fermi_[p].sign * fermi_[p].eps * resolvent_column_at(p, lambda);
  }
  return {et, etp};
}

double DressedState::momentum(double lambda) const {
  const GridFunction col = solve_shift_column(lambda);
  const auto& x = grid_->nodes();
  const auto& w = grid_->weights();
  double acc = model_.p0(lambda);
  for (std::size_t k = 0; k < x.size(); ++k)
    acc -= w[k] * model_.p0_prime(x[k]) * col.values[k];
  return acc;
}

double DressedState::tail_dress_integral(double edge, bool to_positive_infinity,
                                         int nodes) const {
  // lambda = edge +- tan(u), u in (0, pi/2); the dressed part of the density
  // decays at least like the kernel, so the mapped integrand is bounded.
  const auto& gl = gauss_legendre(nodes);
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double u = 0.25 * kPi * (gl.nodes[k] + 1.0);
    const double wu = 0.25 * kPi * gl.weights[k];
    const double t = std::tan(u);
    const double sec2 = 1.0 + t * t;
    const double lambda = to_positive_infinity ? edge + t : edge - t;
    const double dress = rho_at(lambda) - model_.p0_prime(lambda) / kTwoPi;
    acc += wu * dress * sec2;
  }
  return acc;
}

Counts DressedState::counts() const {
  const std::size_t n = seas_.seas();
  Counts out;
  out.N.resize(n);
  out.D.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.N[i] = grid_->integrate_interval(i, rho_.values);
    const double ll = seas_.intervals()[i].left;
    const double rr = seas_.intervals()[i].right;
    // The bare-momentum part of both tails combines into
    // [p0(l_iL) + p0(l_iR)]/2pi because p0 is odd; only the dressed part
    // needs explicit tail quadrature.
    double d = (model_.p0(ll) + model_.p0(rr)) / kTwoPi;
    const double left64 = tail_dress_integral(ll, false, 64);
    const double left128 = tail_dress_integral(ll, false, 128);
    const double right64 = tail_dress_integral(rr, true, 64);
    const double right128 = tail_dress_integral(rr, true, 128);
    if (std::abs(left128 - left64) > 1e-9 || std::abs(right128 - right64) > 1e-9)
      throw TailTruncationError(
          "tail integral for D_" + std::to_string(i + 1) +
          " did not converge to 1e-9 under node doubling");
    d += left128 - right128;
    out.D[i] = d;
  }
  return out;
}

SymmetricMatrices DressedState::symmetric_matrices() const {
  const double asym = seas_.asymmetry();
  if (asym > 1e-10)
    throw SymmetryError("sea configuration asymmetric by " +
                        std::to_string(asym));
  const std::size_t n = seas_.seas();
  const auto ni = static_cast<Eigen::Index>(n);
  SymmetricMatrices out;
  out.Z.resize(ni, ni);
  out.Y.resize(ni, ni);
  out.xi.resize(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      const auto jr = static_cast<std::size_t>(2 * j + 1);
      const auto ir = static_cast<std::size_t>(2 * i + 1);
      const auto mirror_l = static_cast<std::size_t>(2 * (ni - 1 - i));
      const double f_rr = fval_(jr, ir);
      const double f_rl = fval_(jr, mirror_l);
      out.Z(i, j) = delta - f_rr + f_rl;
      out.Y(i, j) = delta - f_rr - f_rl;
    }
  // Dressed charge matrix: for each enlarged symmetric interval
  // [-lambda_iR, lambda_iR] solve the unit-type equation driven by
  // [theta(l + B_i) - theta(l - B_i)]/2pi, then evaluate at lambda_jR.
  const ModelSpec m = model_;
  for (Eigen::Index i = 0; i < ni; ++i) {
    const double b = fermi_[static_cast<std::size_t>(2 * i + 1)].lambda;
    GridFunction xi_i = solver_->solve([m, b](double x) {
      return (m.theta(x + b) - m.theta(x - b)) / kTwoPi;
    });
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      const double ljr = fermi_[static_cast<std::size_t>(2 * j + 1)].lambda;
      out.xi(i, j) = delta + nystrom_eval(model_, xi_i, ljr);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void validate_blocks(const std::vector<Interval>& blocks, double length) {
  if (blocks.empty()) throw ConfigError("no quantum-number blocks given");
  if (!(length > 0.0)) throw ConfigError("system length must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double cnt = blocks[i].right - blocks[i].left;
    if (!(cnt > 0.5) || std::abs(cnt - std::round(cnt)) > 1e-9)
      throw ConfigError("block " + std::to_string(i) +
                        " must span a positive integer number of slots");
    if (i > 0 && !(blocks[i].left > blocks[i - 1].right - 0.5))
      throw ConfigError("quantum-number blocks overlap or touch");
    total += std::round(cnt);
  }
  const long n_total = std::lround(total);
  // Edges sit halfway between slots: integer edges for even N, half-odd
  // for odd N, uniformly across all blocks.
  const double expected_frac = (n_total % 2 == 0) ? 0.0 : 0.5;
  for (const auto& b : blocks)
    for (double edge : {b.left, b.right}) {
      const double frac = std::abs(edge - std::floor(edge) - expected_frac);
      if (std::min(frac, std::abs(frac - 1.0)) > 1e-9)
        throw ConfigError("block edges must lie on the " +
                          std::string(n_total % 2 == 0 ? "integer"
                                                       : "half-odd integer") +
                          " lattice for N = " + std::to_string(n_total));
    }
}

}  // namespace

SeaConfig seas_from_blocks(const ModelSpec& model,
                           const std::vector<Interval>& blocks, double length,
                           int order) {
  validate_blocks(blocks, length);
  const std::size_t n = blocks.size();
  const std::size_t np = 2 * n;

  std::vector<double> target_k(np), sign(np);
  for (std::size_t i = 0; i < n; ++i) {
    target_k[2 * i] = kTwoPi * blocks[i].left / length;
    target_k[2 * i + 1] = kTwoPi * blocks[i].right / length;
    sign[2 * i] = -1.0;
    sign[2 * i + 1] = 1.0;
  }

  std::vector<double> x(np);
  for (std::size_t p = 0; p < np; ++p) x[p] = model.p0_inverse(target_k[p]);

  auto ordered = [&](const std::vector<double>& y) {
    for (std::size_t p = 1; p < np; ++p)
      if (!(y[p] > y[p - 1])) return false;
    return true;
  };
  if (!ordered(x))
    throw ConfigError("free-fermion image of the blocks is not ordered; "
                      "blocks too tight for this model");

  struct Eval {
    Eigen::VectorXd residual;
    std::vector<GridFunction> cols;
    std::shared_ptr<const FredholmSolver> solver;
  };
  auto evaluate = [&](const std::vector<double>& y) {
    Eval ev;
    std::vector<Interval> ivs(n);
    for (std::size_t i = 0; i < n; ++i) ivs[i] = {y[2 * i], y[2 * i + 1]};
    SeaConfig seas(ivs);
    auto grid = std::make_shared<const Grid>(seas, order);
    ev.solver = std::make_shared<const FredholmSolver>(grid, model, 1.0);
    Eigen::VectorXd p0p = grid->sample([&](double t) { return model.p0_prime(t); });
    ev.residual.resize(static_cast<Eigen::Index>(np));
    ev.cols.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
      const double lp = y[p];
      ev.cols.push_back(ev.solver->solve(
          [&model, lp](double t) { return model.theta(t - lp) / kTwoPi; }));
      double k = model.p0(lp);
      const auto& w = grid->weights();
      for (std::size_t m = 0; m < grid->size(); ++m)
        k -= w[m] * p0p[static_cast<Eigen::Index>(m)] * ev.cols[p].values[m];
      ev.residual[static_cast<Eigen::Index>(p)] = k - target_k[p];
    }
    return ev;
  };

  Eval ev = evaluate(x);
  const int max_iter = 60;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double rnorm = ev.residual.cwiseAbs().maxCoeff();
    if (rnorm <= 1e-12) {
      std::vector<Interval> ivs(n);
      for (std::size_t i = 0; i < n; ++i) ivs[i] = {x[2 * i], x[2 * i + 1]};
      return SeaConfig(ivs, BlockOrigin{blocks, length});
    }
    // Jacobian dk_p/dlambda_q = [delta_pq - s_q F(lambda_q|lambda_p)]
    //                           * 2 pi rho(lambda_q)
    const ModelSpec m = model;
    GridFunction rho = ev.solver->solve(
        [m](double t) { return m.p0_prime(t) / kTwoPi; });
    Eigen::MatrixXd jac(np, np);
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t q = 0; q < np; ++q) {
        const double delta = p == q ? 1.0 : 0.0;
        const double f_qp = nystrom_eval(model, ev.cols[p], x[q]);
        jac(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
            (delta - sign[q] * f_qp) * kTwoPi * nystrom_eval(model, rho, x[q]);
      }
    Eigen::VectorXd dx = jac.partialPivLu().solve(-ev.residual);
    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half <= 10; ++half, alpha *= 0.5) {
      std::vector<double> trial(np);
      for (std::size_t p = 0; p < np; ++p)
        trial[p] = x[p] + alpha * dx[static_cast<Eigen::Index>(p)];
      if (!ordered(trial)) continue;
      Eval trial_ev = evaluate(trial);
      if (trial_ev.residual.cwiseAbs().maxCoeff() < rnorm) {
        x = std::move(trial);
        ev = std::move(trial_ev);
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NonConvergenceError(
          "Fermi-rapidity solve stalled mapping blocks to rapidities", rnorm);
  }
  throw NonConvergenceError("Fermi-rapidity solve did not converge",
                            ev.residual.cwiseAbs().maxCoeff());
}

}  // namespace splitsea
