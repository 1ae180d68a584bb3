#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splitsea/dressed.hpp"

namespace splitsea {

enum class ImpurityType { Particle, Hole };

struct Impurity {
  ImpurityType type;
  double lambda;
};

// Requested change of a zero-entropy state: particles added/removed at each
// Fermi point, particle-hole momentum quanta at each point, and optional
// impurities at finite distance from the seas. Point order matches
// DressedState::fermi().
struct SpectrumRequest {
  std::vector<int> added;
  std::vector<int> quanta;
  std::vector<Impurity> impurities;
};

struct PointBreakdown {
  int sea;
  char side;  // 'L' or 'R'
  double sign;
  double lambda, k, rho, eps, eps_tilde, v, v_tilde;
  int added = 0;
  int quanta = 0;
  double backflow;  // quadratic-form amplitude at this point
  double dE1 = 0.0;
  double dE2 = 0.0;
};

struct ImpurityBreakdown {
  ImpurityType type;
  double lambda;
  double eps_tilde;              // signed contribution to dE1
  std::vector<double> n_imp;     // per sea
  std::vector<double> d_imp;     // per sea
  std::vector<double> n_imp_ia;  // per Fermi point
};

struct SpectrumReport {
  double extensive = 0.0;  // L * sum_i int eps0 rho
  double casimir = 0.0;    // -(1/24L) sum s_a eps'(l_ia)/rho(l_ia)
  double dE1 = 0.0;
  double dE2 = 0.0;
  double total = 0.0;  // extensive + casimir + dE1 + dE2
  std::vector<PointBreakdown> points;
  std::vector<ImpurityBreakdown> impurities;
};

struct BulkEnergy {
  double extensive;
  double casimir;
};

// Extensive energy and the universal 1/L boundary term. The boundary
// velocity uses eps', which differs from the dynamic velocity.
BulkEnergy bulk_energy(const DressedState& dressed, double length);

// General order-1/L spectrum
//   dE = sum_ia eps~(l_ia) N_ia
//      + (2pi/L) sum_ia s_a v~_ia [ n_ia + 1/2 (sum_jb W_jb,ia N_jb)^2 ]
// where W is the matrix-inverse partner of U (rows summed), i.e.
// W(q,p) = delta_qp - s_p F(l_p | l_q).
SpectrumReport finite_size_delta(const DressedState& dressed,
                                 const SpectrumRequest& request, double length);

// Symmetric-configuration form in terms of Ntilde_i = N_iR + N_{n+1-i,L},
// Dtilde_i = N_iR - N_{n+1-i,L} and the Z matrix:
//   dE = sum_i eps~_i Ntilde_i
//      + (2pi/L) sum_i (v~_i/4) [ (Z^-1 Ntilde)_i^2 + (Z^T Dtilde)_i^2 ]
// plus the particle-hole quanta term. Agrees with finite_size_delta
// identically for even bare energies.
SpectrumReport symmetric_delta(const DressedState& dressed,
                               const std::vector<int>& Ntilde,
                               const std::vector<int>& Dtilde,
                               const std::vector<int>& quanta, double length);

// Counting shifts carried by a single impurity: density correction
// rho_imp = +-L(.|lambda0), per-sea shifts of N_i and D_i, and the per-point
// shifts n_ia = -+ s_a F(lambda0 | l_ia).
struct ImpurityTerms {
  GridFunction rho_imp;
  std::vector<double> n_imp;
  std::vector<double> d_imp;
  std::vector<double> n_imp_ia;
};

ImpurityTerms impurity_terms(const DressedState& dressed,
                             const Impurity& impurity);

// Spectrum with impurities: the impurity dispersion enters directly and its
// counting shifts subtract from the N_ia inside both dE terms. Reduces to
// finite_size_delta when the impurity list is empty.
SpectrumReport impurity_delta(const DressedState& dressed,
                              const SpectrumRequest& request, double length);

}  // namespace splitsea
