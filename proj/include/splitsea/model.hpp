#pragma once

#include <string>
#include <vector>

#include "splitsea/errors.hpp"

namespace splitsea {

enum class ModelKind { LiebLiniger, XXZ };

struct KernelValues {
  double p0;        // bare momentum
  double p0_prime;  // dp0/dlambda
  double theta;     // two-body scattering phase
  double K;         // theta'
  double K_prime;   // theta''
};

// Integrable-model kernel triple (p0, theta, K) with derivatives.
//
// Lieb-Liniger (repulsive, c > 0):
//   p0 = lambda, theta = 2 atan(lambda/c), K = 2c/(c^2+lambda^2).
// XXZ in the critical regime, Delta = cos(zeta), zeta in (0,pi):
//   p0 = 2 atan(tanh(lambda)/tan(zeta/2)), theta = 2 atan(tanh(lambda)/tan(zeta)),
//   K  = sin(2 zeta)/(sinh^2(lambda) + sin^2(zeta)).
//
// Immutable after construction; evaluations are pure.
class ModelSpec {
public:
  static ModelSpec lieb_liniger(double c);
  static ModelSpec xxz(double zeta);
  static ModelSpec make(ModelKind kind, double coupling);

  ModelKind kind() const { return kind_; }
  double coupling() const { return coupling_; }

  double p0(double lambda) const;
  double p0_prime(double lambda) const;
  double theta(double lambda) const;
  double K(double lambda) const;
  double K_prime(double lambda) const;
  KernelValues kernels(double lambda) const;

  // Inverse of the bare momentum (exact Bethe roots when theta == 0).
  // The argument is clamped to the open range of p0.
  double p0_inverse(double p) const;
  // sup |p0|; infinite for Lieb-Liniger, pi - zeta for XXZ.
  double p0_sup() const;

private:
  ModelSpec(ModelKind kind, double coupling);

  ModelKind kind_;
  double coupling_;
  // XXZ precomputed trig; free_fermion_ snaps theta/K to exactly zero at
  // zeta = pi/2 where cos(zeta) only underflows to ~1e-17 in floating point.
  double sin_zeta_ = 0, sin2_zeta_ = 0, cot_zeta_ = 0, tan_half_ = 0;
  bool free_fermion_ = false;
};

struct BareValues {
  double eps0;
  double eps0_prime;
};

enum class ChargeForm { Polynomial, XXZEnergy, Tabulated };

// Bare energy function eps0(lambda) with derivative. Any linear combination
// of conserved-charge eigenvalues q_n(lambda) = lambda^n is admissible, plus
// the built-in XXZ energy and tabulated custom functions.
class BareCharge {
public:
  // eps0 = sum_n beta[n] * lambda^n
  static BareCharge polynomial(std::vector<double> beta,
                               std::string description = "polynomial");
  // q_n(lambda) = lambda^n
  static BareCharge monomial(int n);
  // eps0 = -2 sin^2(zeta) / (cosh(2 lambda) - cos(zeta))
  static BareCharge xxz_energy(double zeta);
  // Natural cubic spline through (lambda_i, value_i); derivative from the
  // interpolant. Evaluation outside the table throws RangeError.
  static BareCharge tabulated(std::vector<double> lambda,
                              std::vector<double> value,
                              std::string description = "tabulated");

  BareValues eval(double lambda) const;
  double eps0(double lambda) const { return eval(lambda).eps0; }
  double eps0_prime(double lambda) const { return eval(lambda).eps0_prime; }

  ChargeForm form() const { return form_; }
  const std::string& description() const { return description_; }
  const std::vector<double>& coefficients() const { return beta_; }

private:
  BareCharge() = default;

  ChargeForm form_ = ChargeForm::Polynomial;
  std::string description_;
  std::vector<double> beta_;
  double zeta_ = 0, sin2_zeta_ = 0, cos_zeta_ = 0;
  // spline data
  std::vector<double> xs_, ys_, m2_;  // nodes, values, second derivatives
};

}  // namespace splitsea
