#include "splitsea/invariants.hpp"

#include <cmath>
#include <random>

namespace splitsea {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// 4th-order centered first derivative.
template <typename F>
double fd4(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

struct Sampler {
  std::mt19937_64 rng;
  const SeaConfig& seas;
  double inside() {
    std::uniform_int_distribution<std::size_t> pick(0, seas.seas() - 1);
    const auto& iv = seas.intervals()[pick(rng)];
    // stay away from the endpoints so finite differences remain interior
    std::uniform_real_distribution<double> u(0.05, 0.95);
    return iv.left + u(rng) * iv.length();
  }
};

}  // namespace

std::vector<InvariantResult> invariant_suite(const DressedState& dressed,
                                             const InvariantOptions& options) {
  std::vector<InvariantResult> out;
  auto add = [&out](std::string name, double residual, double tol) {
    out.push_back({std::move(name), residual, tol,
                   std::isfinite(residual) && residual <= tol});
  };

  Sampler sample{std::mt19937_64(options.seed), dressed.seas()};
  const auto& fermi = dressed.fermi();
  const std::size_t np = dressed.points();
  const double h = 2e-3;

  // Resolvent symmetry L(a|b) = L(b|a).
  {
    double worst = 0.0;
    for (int t = 0; t < options.pairs; ++t) {
      const double a = sample.inside(), b = sample.inside();
      const GridFunction ca = dressed.solve_resolvent_column(a);
      const GridFunction cb = dressed.solve_resolvent_column(b);
      worst = std::max(worst,
                       std::abs(nystrom_eval(dressed.model(), cb, a) -
                                nystrom_eval(dressed.model(), ca, b)));
    }
    add("resolvent symmetry", worst, 1e-9);
  }

  // dF/dlambda' = -L.
  {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const double a = sample.inside(), b = sample.inside();
      auto f_of_bp = [&](double bp) {
        return nystrom_eval(dressed.model(), dressed.solve_shift_column(bp), a);
      };
      const double lhs = fd4(f_of_bp, b, h);
      const double rhs = -dressed.resolvent(a, b);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    add("shift derivative in second argument", worst, 1e-8);
  }

  // dF/dlambda = L(l|l') - sum_a s_a L(l|l_a) F(l_a|l').
  {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const double a = sample.inside(), b = sample.inside();
      const GridFunction col = dressed.solve_shift_column(b);
      auto f_of_a = [&](double aa) {
        return nystrom_eval(dressed.model(), col, aa);
      };
      double rhs = dressed.resolvent(a, b);
      for (std::size_t p = 0; p < np; ++p)
        rhs -= fermi[p].sign * dressed.resolvent_column_at(p, a) *
               nystrom_eval(dressed.model(), col, fermi[p].lambda);
      worst = std::max(worst, std::abs(fd4(f_of_a, a, h) - rhs));
    }
    add("shift derivative in first argument", worst, 1e-8);
  }

  // F(a|b) + F(b|a) = sum_p s_p F(l_p|a) F(l_p|b).
  {
    double worst = 0.0;
    for (int t = 0; t < options.pairs; ++t) {
      const double a = sample.inside(), b = sample.inside();
      const GridFunction ca = dressed.solve_shift_column(a);
      const GridFunction cb = dressed.solve_shift_column(b);
      double rhs = 0.0;
      for (std::size_t p = 0; p < np; ++p)
        rhs += fermi[p].sign *
               nystrom_eval(dressed.model(), ca, fermi[p].lambda) *
               nystrom_eval(dressed.model(), cb, fermi[p].lambda);
      const double lhs = nystrom_eval(dressed.model(), cb, a) +
                         nystrom_eval(dressed.model(), ca, b);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    add("shift sum rule", worst, 1e-8);
  }

  // sum_p s_p F(a|l_p) F(b|l_p) = sum_p s_p F(l_p|a) F(l_p|b).
  {
    double worst = 0.0;
    for (int t = 0; t < options.pairs; ++t) {
      const double a = sample.inside(), b = sample.inside();
      const GridFunction ca = dressed.solve_shift_column(a);
      const GridFunction cb = dressed.solve_shift_column(b);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t p = 0; p < np; ++p) {
        lhs += fermi[p].sign * dressed.F_column_at(p, a) *
               dressed.F_column_at(p, b);
        rhs += fermi[p].sign *
               nystrom_eval(dressed.model(), ca, fermi[p].lambda) *
               nystrom_eval(dressed.model(), cb, fermi[p].lambda);
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    add("shift bilinear symmetry", worst, 1e-8);
  }

  // U U^{-1} = 1 and U^{-1} = s_p s_q U^T entrywise.
  {
    Eigen::MatrixXd u = dressed.U();
    if (options.flip_u_sign && np > 1) u(0, 1) = -u(0, 1);
    const Eigen::MatrixXd prod = u * dressed.U_inverse();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    add("matrix inverse pair", (prod - eye).cwiseAbs().maxCoeff(), 1e-8);
    const Eigen::MatrixXd numeric = u.inverse();
    add("inverse transpose relation",
        (numeric - dressed.U_inverse()).cwiseAbs().maxCoeff(), 1e-8);
  }

  // Dispersion: defining integral form and both roundtrip directions.
  {
    double worst_def = 0.0, worst_round = 0.0;
    const auto& x = dressed.grid()->nodes();
    const auto& w = dressed.grid()->weights();
    for (int t = 0; t < 6; ++t) {
      const double a = sample.inside();
      const Dispersion d = dressed.dispersion(a);
      const GridFunction col = dressed.solve_shift_column(a);
      double def = dressed.charge().eps0(a);
      for (std::size_t k = 0; k < x.size(); ++k)
        def -= w[k] * dressed.charge().eps0_prime(x[k]) * col.values[k];
      worst_def = std::max(worst_def, std::abs(def - d.eps_tilde));
      double back = d.eps_tilde;
      for (std::size_t p = 0; p < np; ++p)
        back -= fermi[p].sign * fermi[p].eps_tilde * dressed.F_column_at(p, a);
      worst_round = std::max(worst_round, std::abs(back - dressed.eps_at(a)));
    }
    add("dispersion defining form", worst_def, 1e-8);
    add("dispersion roundtrip", worst_round, 1e-8);
  }

  // eps~(l_p) and eps(l_p) exchange through the U pair.
  {
    Eigen::VectorXd ev(np), etv(np);
    for (std::size_t p = 0; p < np; ++p) {
      ev[static_cast<Eigen::Index>(p)] = fermi[p].eps;
      etv[static_cast<Eigen::Index>(p)] = fermi[p].eps_tilde;
    }
    const double r1 = (dressed.U_inverse() * ev - etv).cwiseAbs().maxCoeff();
    const double r2 = (dressed.U() * etv - ev).cwiseAbs().maxCoeff();
    add("fermi point linear system", std::max(r1, r2), 1e-8);
  }

  // k' = 2 pi rho (relative).
  {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double a = sample.inside();
      auto k_of = [&](double aa) { return dressed.momentum(aa); };
      const double lhs = fd4(k_of, a, h);
      const double rhs = kTwoPi * dressed.rho_at(a);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    add("momentum derivative vs density", worst, 1e-6);
  }

  // eps' solution vs finite difference of eps.
  {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double a = sample.inside();
      auto e_of = [&](double aa) { return dressed.eps_at(aa); };
      const double lhs = fd4(e_of, a, h);
      const double rhs = dressed.eps_prime_at(a);
      const double scale = std::max(1.0, std::abs(rhs));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    add("dressed energy derivative", worst, 1e-6);
  }

  // Density positive; for repulsive Lieb-Liniger dressing only adds.
  {
    double violation = 0.0;
    const auto& x = dressed.grid()->nodes();
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = dressed.rho().values[static_cast<Eigen::Index>(k)];
      violation = std::max(violation, -r);
      if (dressed.model().kind() == ModelKind::LiebLiniger)
        violation = std::max(
            violation, dressed.model().p0_prime(x[k]) / kTwoPi - r);
    }
    add("density lower bound", violation, 1e-10);
  }

  // Z = 2 (F - F_B), independent of the column argument.
  {
    double worst = 0.0;
    for (int t = 0; t < 2; ++t) {
      const double b = sample.inside();
      const GridFunction f = dressed.solve_shift_column(b, false);
      const GridFunction fb = dressed.solve_shift_column(b, true);
      for (int s = 0; s < 5; ++s) {
        const double a = sample.inside();
        const double z = 2.0 * (nystrom_eval(dressed.model(), f, a) -
                                nystrom_eval(dressed.model(), fb, a));
        worst = std::max(worst, std::abs(z - dressed.Z_at(a)));
      }
    }
    add("dressed charge vs bosonic shift", worst, 1e-9);
  }

  // Edge density correction equals -dL/dlambda' at the Fermi points.
  {
    double worst = 0.0;
    for (std::size_t p = 0; p < std::min<std::size_t>(np, 2); ++p) {
      const GridFunction corr = dressed.solve_density_correction(fermi[p]);
      const double a = sample.inside();
      auto l_of_bp = [&](double bp) { return dressed.resolvent(a, bp); };
      const double lhs = -fd4(l_of_bp, fermi[p].lambda, h);
      worst = std::max(worst,
                       std::abs(lhs - nystrom_eval(dressed.model(), corr, a)));
    }
    add("density correction vs resolvent derivative", worst, 1e-6);
  }

  // Symmetric configurations: F(-a|-b) = -F(a|b).
  if (dressed.seas().is_symmetric()) {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double a = sample.inside(), b = sample.inside();
      worst = std::max(worst, std::abs(dressed.F(-a, -b) + dressed.F(a, b)));
    }
    add("shift reflection antisymmetry", worst, 1e-9);
  }

  return out;
}

bool all_pass(const std::vector<InvariantResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace splitsea
