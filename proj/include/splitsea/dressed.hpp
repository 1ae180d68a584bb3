#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "splitsea/model.hpp"
#include "splitsea/quadrature.hpp"

namespace splitsea {

enum class Side { Left, Right };

// One edge of a Fermi sea with everything evaluated there. Points are
// ordered by rapidity: (sea 0 left, sea 0 right, sea 1 left, ...), so point
// index p = 2*sea + (side == Right).
struct FermiPoint {
  int sea;
  Side side;
  double sign;  // s_a: -1 for left, +1 for right edges
  double lambda;
  double k;  // dressed momentum; equals 2 pi I_ia / L for block-born seas
  double rho;
  double eps;
  double eps_prime;
  double eps_tilde;
  double eps_tilde_prime;
  double v;        // eps' / (2 pi rho): velocity in the Casimir term
  double v_tilde;  // eps_tilde' / (2 pi rho): dynamic velocity
};

struct Dispersion {
  double eps_tilde;
  double eps_tilde_prime;
};

// Per-sea particle and Umklapp numbers, per unit L.
struct Counts {
  std::vector<double> N;
  std::vector<double> D;
};

struct SymmetricMatrices {
  Eigen::MatrixXd Z;   // from shift-function values at the Fermi points
  Eigen::MatrixXd Y;   // satisfies Z Y^T = 1
  Eigen::MatrixXd xi;  // dressed charge matrix evaluated at lambda_jR
};

// All thermodynamic-limit dressed quantities on a fixed sea configuration:
// root density, dressed charge, dressed energy and its derivative, the shift
// function and resolvent columns at the Fermi points, the true dispersion,
// dressed momentum, Fermi velocities and the U matrix pair. Immutable once
// computed; cheap to copy (shared internals); safe to share across threads.
class DressedState {
public:
  static DressedState compute(const ModelSpec& model, const BareCharge& charge,
                              const SeaConfig& seas, int order = 64);

  const ModelSpec& model() const { return model_; }
  const BareCharge& charge() const { return charge_; }
  const SeaConfig& seas() const { return seas_; }
  const std::shared_ptr<const Grid>& grid() const { return grid_; }
  const FredholmSolver& solver() const { return *solver_; }
  int order() const { return grid_->order(); }

  const GridFunction& rho() const { return rho_; }
  const GridFunction& dressed_charge() const { return zfun_; }
  const GridFunction& eps() const { return eps_; }
  const GridFunction& eps_prime() const { return eps_prime_; }

  const std::vector<FermiPoint>& fermi() const { return fermi_; }
  std::size_t points() const { return fermi_.size(); }

  // U(p,q) = delta_pq - s_q F(lambda_p | lambda_q) and the independently
  // assembled inverse U^{-1}(p,q) = delta_pq - s_q F(lambda_q | lambda_p)
  // = s_p s_q U(q,p).
  const Eigen::MatrixXd& U() const { return u_; }
  const Eigen::MatrixXd& U_inverse() const { return u_inv_; }
  // F(lambda_p | lambda_q), cached
  double F_at_points(std::size_t p, std::size_t q) const { return fval_(p, q); }

  // Cached columns at the Fermi points.
  const GridFunction& shift_column_at_point(std::size_t q) const {
    return f_cols_[q];
  }
  const GridFunction& resolvent_column_at_point(std::size_t q) const {
    return l_cols_[q];
  }

  // Fresh column solves (one back-substitution on the shared factorization).
  GridFunction solve_shift_column(double lambda_prime,
                                  bool bosonic = false) const;
  GridFunction solve_resolvent_column(double lambda_prime) const;
  GridFunction solve_density_correction(const FermiPoint& point) const;

  // Nystrom evaluations, valid on the whole real line.
  double rho_at(double lambda) const;
  double Z_at(double lambda) const;
  double eps_at(double lambda) const;
  double eps_prime_at(double lambda) const;
  // F(lambda | lambda'): solves the column at lambda' and evaluates.
  double F(double lambda, double lambda_prime) const;
  double resolvent(double lambda, double lambda_prime) const;
  // F(lambda | lambda_q) from the cached Fermi-point column q.
  double F_column_at(std::size_t q, double lambda) const;
  double resolvent_column_at(std::size_t q, double lambda) const;

  // True dispersion and dressed momentum at arbitrary rapidity.
  Dispersion dispersion(double lambda) const;
  double momentum(double lambda) const;

  Counts counts() const;
  SymmetricMatrices symmetric_matrices() const;

  // sum_i int eps0 rho over the seas, and the coefficient of 1/L in the
  // boundary energy (uses eps', not the dynamic eps_tilde').
  double extensive_density() const { return e_inf_; }
  double casimir_coefficient() const { return c_cas_; }

private:
  DressedState(const ModelSpec& model, const BareCharge& charge,
               const SeaConfig& seas, int order);

  double tail_dress_integral(double edge, bool to_positive_infinity,
                             int nodes) const;

  ModelSpec model_;
  BareCharge charge_;
  SeaConfig seas_;
  std::shared_ptr<const Grid> grid_;
  std::shared_ptr<const FredholmSolver> solver_;
  GridFunction rho_, zfun_, eps_, eps_prime_;
  std::vector<GridFunction> f_cols_, l_cols_;
  std::vector<FermiPoint> fermi_;
  Eigen::MatrixXd fval_, u_, u_inv_;
  double e_inf_ = 0.0, c_cas_ = 0.0;
};

// Maps quantum-number blocks (edges I_ia, system length L) to Fermi
// rapidities by Newton iteration on k(lambda_ia) = 2 pi I_ia / L, with the
// free-fermion image as initial guess. The returned SeaConfig keeps the
// blocks as its origin so the momenta stay pinned exactly.
SeaConfig seas_from_blocks(const ModelSpec& model,
                           const std::vector<Interval>& blocks, double length,
                           int order = 64);

}  // namespace splitsea
