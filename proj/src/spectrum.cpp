#include "splitsea/spectrum.hpp"

#include <cmath>

namespace splitsea {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

PointBreakdown make_point_entry(const FermiPoint& pt) {
  PointBreakdown e;
  e.sea = pt.sea;
  e.side = pt.side == Side::Left ? 'L' : 'R';
  e.sign = pt.sign;
  e.lambda = pt.lambda;
  e.k = pt.k;
  e.rho = pt.rho;
  e.eps = pt.eps;
  e.eps_tilde = pt.eps_tilde;
  e.v = pt.v;
  e.v_tilde = pt.v_tilde;
  return e;
}

void check_request_shape(const DressedState& dressed,
                         const SpectrumRequest& request) {
  const std::size_t np = dressed.points();
  if (!request.added.empty() && request.added.size() != np)
    throw ConfigError("request.added must have one entry per Fermi point");
  if (!request.quanta.empty() && request.quanta.size() != np)
    throw ConfigError("request.quanta must have one entry per Fermi point");
  for (int q : request.quanta)
    if (q < 0) throw ConfigError("particle-hole quanta must be >= 0");
}

}  // namespace

BulkEnergy bulk_energy(const DressedState& dressed, double length) {
  if (!(length > 0.0)) throw ConfigError("system length must be positive");
  return {length * dressed.extensive_density(),
          dressed.casimir_coefficient() / length};
}

SpectrumReport finite_size_delta(const DressedState& dressed,
                                 const SpectrumRequest& request,
                                 double length) {
  if (!request.impurities.empty())
    throw ConfigError("finite_size_delta takes no impurities; "
                      "use impurity_delta");
  return impurity_delta(dressed, request, length);
}

ImpurityTerms impurity_terms(const DressedState& dressed,
                             const Impurity& impurity) {
  const double l0 = impurity.lambda;
  const bool particle = impurity.type == ImpurityType::Particle;
  const auto& seas = dressed.seas();
  if (particle && seas.contains(l0))
    throw PlacementError("particle impurity rapidity lies inside a sea");
  if (!particle) {
    bool interior = false;
    for (const auto& iv : seas.intervals())
      if (l0 > iv.left && l0 < iv.right) interior = true;
    if (!interior)
      throw PlacementError("hole impurity rapidity must lie inside a sea");
  }
  const double sgn = particle ? 1.0 : -1.0;

  ImpurityTerms out;
  out.rho_imp = dressed.solve_resolvent_column(l0);
  if (!particle) {
    // A hole removes density: -L(.|lambda0) solves the same equation with
    // negated driving.
    out.rho_imp.values = -out.rho_imp.values;
    auto base = out.rho_imp.driving;
    out.rho_imp.driving = [base](double x) { return -base(x); };
  }

  const std::size_t n = seas.seas();
  const std::size_t np = dressed.points();
  out.n_imp.resize(n);
  out.d_imp.resize(n);
  out.n_imp_ia.resize(np);

  // Shift-function values F(lambda0 | l_ia) from the cached point columns.
  std::vector<double> f0(np);
  for (std::size_t q = 0; q < np; ++q) f0[q] = dressed.F_column_at(q, l0);

  for (std::size_t i = 0; i < n; ++i) {
    // N_i shift by direct quadrature of the impurity density over sea i.
    out.n_imp[i] = dressed.grid()->integrate_interval(i, out.rho_imp.values);
    out.d_imp[i] = -sgn * (f0[2 * i + 1] + f0[2 * i]);
  }
  for (std::size_t q = 0; q < np; ++q)
    out.n_imp_ia[q] = -sgn * dressed.fermi()[q].sign * f0[q];

  for (std::size_t q = 0; q < np; ++q) {
    const std::size_t i = q / 2;
    const double via_counts =
        0.5 * (out.n_imp[i] + dressed.fermi()[q].sign * out.d_imp[i]);
    if (std::abs(via_counts - out.n_imp_ia[q]) > 1e-9)
      throw ConsistencyError(
          "impurity counting shifts violate n_ia = (n_i + s_a d_i)/2");
  }
  return out;
}

SpectrumReport impurity_delta(const DressedState& dressed,
                              const SpectrumRequest& request, double length) {
  if (!(length > 0.0)) throw ConfigError("system length must be positive");
  check_request_shape(dressed, request);

  const std::size_t np = dressed.points();
  const auto& fermi = dressed.fermi();
  std::vector<int> added = request.added.empty() ? std::vector<int>(np, 0)
                                                 : request.added;
  std::vector<int> quanta = request.quanta.empty() ? std::vector<int>(np, 0)
                                                   : request.quanta;

  SpectrumReport rep;
  rep.extensive = length * dressed.extensive_density();
  rep.casimir = dressed.casimir_coefficient() / length;

  // Effective additions N_ia - n_ia^imp, with shifts summed over impurities.
  std::vector<double> effective(np);
  for (std::size_t q = 0; q < np; ++q) effective[q] = added[q];
  for (const auto& imp : request.impurities) {
    ImpurityTerms terms = impurity_terms(dressed, imp);
    ImpurityBreakdown bd;
    bd.type = imp.type;
    bd.lambda = imp.lambda;
    const double sgn = imp.type == ImpurityType::Particle ? 1.0 : -1.0;
    bd.eps_tilde = sgn * dressed.dispersion(imp.lambda).eps_tilde;
    bd.n_imp = terms.n_imp;
    bd.d_imp = terms.d_imp;
    bd.n_imp_ia = terms.n_imp_ia;
    for (std::size_t q = 0; q < np; ++q) effective[q] -= terms.n_imp_ia[q];
    rep.dE1 += bd.eps_tilde;
    rep.impurities.push_back(std::move(bd));
  }

  // Quadratic-form amplitudes: B_p = sum_q W(q,p) N_q with W = U^{-1}, the
  // matrix-inverse partner with the transposed shift arguments. This is the
  // orientation fixed by the free-fermion closed forms and the finite-N
  // oracle; see the U matrix accessors on DressedState.
  const Eigen::MatrixXd& w = dressed.U_inverse();
  std::vector<double> backflow(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    double acc = 0.0;
    for (std::size_t q = 0; q < np; ++q)
      acc += w(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) *
             effective[q];
    backflow[p] = acc;
  }

  for (std::size_t p = 0; p < np; ++p) {
    PointBreakdown e = make_point_entry(fermi[p]);
    e.added = added[p];
    e.quanta = quanta[p];
    e.backflow = backflow[p];
    if (effective[p] != 0.0) {
      e.dE1 = fermi[p].eps_tilde * effective[p];
      rep.dE1 += e.dE1;
    }
    if (quanta[p] != 0 || backflow[p] != 0.0) {
      e.dE2 = (kTwoPi / length) * fermi[p].sign * fermi[p].v_tilde *
              (quanta[p] + 0.5 * backflow[p] * backflow[p]);
      rep.dE2 += e.dE2;
    }
    rep.points.push_back(e);
  }

  rep.total = rep.extensive + rep.casimir + rep.dE1 + rep.dE2;
  return rep;
}

SpectrumReport symmetric_delta(const DressedState& dressed,
                               const std::vector<int>& Ntilde,
                               const std::vector<int>& Dtilde,
                               const std::vector<int>& quanta, double length) {
  if (!(length > 0.0)) throw ConfigError("system length must be positive");
  const std::size_t n = dressed.seas().seas();
  const std::size_t np = dressed.points();
  if (Ntilde.size() != n || Dtilde.size() != n)
    throw ConfigError("Ntilde/Dtilde must have one entry per sea");
  if (!quanta.empty() && quanta.size() != np)
    throw ConfigError("quanta must have one entry per Fermi point");
  for (std::size_t i = 0; i < n; ++i)
    if ((Ntilde[i] + Dtilde[i]) % 2 != 0)
      throw ParityError("Ntilde_i + Dtilde_i must be even (both derive from "
                        "integer edge moves)");

  const SymmetricMatrices mats = dressed.symmetric_matrices();  // SymmetryError
  const auto& fermi = dressed.fermi();

  Eigen::VectorXd nt(n), dt(n);
  for (std::size_t i = 0; i < n; ++i) {
    nt[static_cast<Eigen::Index>(i)] = Ntilde[i];
    dt[static_cast<Eigen::Index>(i)] = Dtilde[i];
  }
  const Eigen::VectorXd zn = mats.Z.partialPivLu().solve(nt);
  const Eigen::VectorXd zd = mats.Z.transpose() * dt;

  SpectrumReport rep;
  rep.extensive = length * dressed.extensive_density();
  rep.casimir = dressed.casimir_coefficient() / length;
  for (std::size_t i = 0; i < n; ++i) {
    const FermiPoint& right = fermi[2 * i + 1];
    rep.dE1 += right.eps_tilde * Ntilde[i];
    rep.dE2 += (kTwoPi / length) * (right.v_tilde / 4.0) *
               (zn[static_cast<Eigen::Index>(i)] * zn[static_cast<Eigen::Index>(i)] +
                zd[static_cast<Eigen::Index>(i)] * zd[static_cast<Eigen::Index>(i)]);
  }
  if (!quanta.empty())
    for (std::size_t p = 0; p < np; ++p)
      rep.dE2 += (kTwoPi / length) * fermi[p].sign * fermi[p].v_tilde *
                 quanta[p];
  rep.total = rep.extensive + rep.casimir + rep.dE1 + rep.dE2;
  return rep;
}

}  // namespace splitsea
