#include "splitsea/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace splitsea {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ModelSpec::ModelSpec(ModelKind kind, double coupling)
    : kind_(kind), coupling_(coupling) {
  if (kind_ == ModelKind::LiebLiniger) {
    if (!(coupling > 0.0))
      throw DomainError("Lieb-Liniger requires repulsive coupling c > 0");
  } else {
    if (!(coupling > 0.0 && coupling < kPi))
      throw DomainError("XXZ requires zeta strictly inside (0, pi)");
    const double cz = std::cos(coupling);
    sin_zeta_ = std::sin(coupling);
    sin2_zeta_ = std::sin(2.0 * coupling);
    tan_half_ = std::tan(0.5 * coupling);
    free_fermion_ = std::abs(cz) < 1e-14;
    cot_zeta_ = free_fermion_ ? 0.0 : cz / sin_zeta_;
    if (free_fermion_) sin2_zeta_ = 0.0;
  }
}

ModelSpec ModelSpec::lieb_liniger(double c) {
  return ModelSpec(ModelKind::LiebLiniger, c);
}

ModelSpec ModelSpec::xxz(double zeta) { return ModelSpec(ModelKind::XXZ, zeta); }

ModelSpec ModelSpec::make(ModelKind kind, double coupling) {
  return ModelSpec(kind, coupling);
}

double ModelSpec::p0(double lambda) const {
  if (kind_ == ModelKind::LiebLiniger) return lambda;
  return 2.0 * std::atan(std::tanh(lambda) / tan_half_);
}

double ModelSpec::p0_prime(double lambda) const {
  if (kind_ == ModelKind::LiebLiniger) return 1.0;
  const double sh = std::sinh(lambda);
  const double s2 = std::sin(0.5 * coupling_);
  return sin_zeta_ / (sh * sh + s2 * s2);
}

double ModelSpec::theta(double lambda) const {
  if (kind_ == ModelKind::LiebLiniger)
    return 2.0 * std::atan(lambda / coupling_);
  if (free_fermion_) return 0.0;
  return 2.0 * std::atan(std::tanh(lambda) * cot_zeta_);
}

double ModelSpec::K(double lambda) const {
  if (kind_ == ModelKind::LiebLiniger) {
    const double c = coupling_;
    return 2.0 * c / (c * c + lambda * lambda);
  }
  if (free_fermion_) return 0.0;
  const double sh = std::sinh(lambda);
  return sin2_zeta_ / (sh * sh + sin_zeta_ * sin_zeta_);
}

double ModelSpec::K_prime(double lambda) const {
  if (kind_ == ModelKind::LiebLiniger) {
    const double c = coupling_;
    const double d = c * c + lambda * lambda;
    return -4.0 * c * lambda / (d * d);
  }
  if (free_fermion_) return 0.0;
  const double sh = std::sinh(lambda);
  const double d = sh * sh + sin_zeta_ * sin_zeta_;
  return -sin2_zeta_ * std::sinh(2.0 * lambda) / (d * d);
}

KernelValues ModelSpec::kernels(double lambda) const {
  return {p0(lambda), p0_prime(lambda), theta(lambda), K(lambda),
          K_prime(lambda)};
}

double ModelSpec::p0_inverse(double p) const {
  if (kind_ == ModelKind::LiebLiniger) return p;
  const double sup = p0_sup();
  const double clamped = std::clamp(p, -sup * (1.0 - 1e-12), sup * (1.0 - 1e-12));
  const double t = std::tan(0.5 * clamped) * tan_half_;
  return std::atanh(std::clamp(t, -1.0 + 1e-15, 1.0 - 1e-15));
}

double ModelSpec::p0_sup() const {
  if (kind_ == ModelKind::LiebLiniger)
    return std::numeric_limits<double>::infinity();
  return kPi - coupling_;
}

// ---------------------------------------------------------------------------

BareCharge BareCharge::polynomial(std::vector<double> beta,
                                  std::string description) {
  BareCharge c;
  c.form_ = ChargeForm::Polynomial;
  c.beta_ = std::move(beta);
  c.description_ = std::move(description);
  return c;
}

BareCharge BareCharge::monomial(int n) {
  if (n < 0) throw DomainError("monomial degree must be >= 0");
  std::vector<double> beta(static_cast<std::size_t>(n) + 1, 0.0);
  beta.back() = 1.0;
  return polynomial(std::move(beta), "q_" + std::to_string(n));
}

BareCharge BareCharge::xxz_energy(double zeta) {
  if (!(zeta > 0.0 && zeta < kPi))
    throw DomainError("XXZ energy requires zeta strictly inside (0, pi)");
  BareCharge c;
  c.form_ = ChargeForm::XXZEnergy;
  c.description_ = "xxz energy";
  c.zeta_ = zeta;
  const double s = std::sin(zeta);
  c.sin2_zeta_ = s * s;
  c.cos_zeta_ = std::cos(zeta);
  return c;
}

BareCharge BareCharge::tabulated(std::vector<double> lambda,
                                 std::vector<double> value,
                                 std::string description) {
  if (lambda.size() != value.size() || lambda.size() < 3)
    throw ConfigError("tabulated charge needs >= 3 matching nodes");
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (!(lambda[i] > lambda[i - 1]))
      throw ConfigError("tabulated charge nodes must increase strictly");

  BareCharge c;
  c.form_ = ChargeForm::Tabulated;
  c.description_ = std::move(description);
  c.xs_ = std::move(lambda);
  c.ys_ = std::move(value);

  // Natural cubic spline: Thomas algorithm on the interior rows,
  // m2[0] = m2[n-1] = 0.
  const std::size_t n = c.xs_.size();
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = c.xs_[i + 1] - c.xs_[i];
  c.m2_.assign(n, 0.0);
  std::vector<double> a(n, 0.0), b(n, 0.0), d(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = h[i - 1];
    b[i] = 2.0 * (h[i - 1] + h[i]);
    d[i] = h[i];
    rhs[i] = 6.0 * ((c.ys_[i + 1] - c.ys_[i]) / h[i] -
                    (c.ys_[i] - c.ys_[i - 1]) / h[i - 1]);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * d[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i)
    c.m2_[i] = (rhs[i] - d[i] * c.m2_[i + 1]) / b[i];
  return c;
}

BareValues BareCharge::eval(double lambda) const {
  switch (form_) {
    case ChargeForm::Polynomial: {
      // Horner for the value and the derivative together.
      double v = 0.0, dv = 0.0;
      for (std::size_t i = beta_.size(); i-- > 0;) {
        dv = dv * lambda + v;
        v = v * lambda + beta_[i];
      }
      return {v, dv};
    }
    case ChargeForm::XXZEnergy: {
      const double den = std::cosh(2.0 * lambda) - cos_zeta_;
      const double v = -2.0 * sin2_zeta_ / den;
      const double dv = 4.0 * sin2_zeta_ * std::sinh(2.0 * lambda) / (den * den);
      return {v, dv};
    }
    case ChargeForm::Tabulated: {
      const double lo = xs_.front(), hi = xs_.back();
      const double tol = 1e-12 * (hi - lo);
      if (lambda < lo - tol || lambda > hi + tol)
        throw RangeError("tabulated charge evaluated outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
      const double x = std::clamp(lambda, lo, hi);
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      std::size_t k = it == xs_.begin() ? 0 : (it - xs_.begin() - 1);
      if (k + 1 >= xs_.size()) k = xs_.size() - 2;
      const double h = xs_[k + 1] - xs_[k];
      const double t = (x - xs_[k]) / h;
      const double s = 1.0 - t;
      const double v = s * ys_[k] + t * ys_[k + 1] +
                       (h * h / 6.0) *
                           ((s * s * s - s) * m2_[k] + (t * t * t - t) * m2_[k + 1]);
      const double dv = (ys_[k + 1] - ys_[k]) / h +
                        (h / 6.0) *
                            ((3.0 * t * t - 1.0) * m2_[k + 1] -
                             (3.0 * s * s - 1.0) * m2_[k]);
      return {v, dv};
    }
  }
  throw Error("unreachable charge form");
}

}  // namespace splitsea
