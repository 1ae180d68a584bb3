#pragma once

#include <optional>
#include <vector>

#include "splitsea/model.hpp"
#include "splitsea/quadrature.hpp"

namespace splitsea {

// One converged solution of the Bethe equations
//   L p0(lambda_j) + sum_k theta(lambda_j - lambda_k) = 2 pi I_j.
struct FiniteState {
  double length;
  std::vector<double> I;       // sorted quantum numbers
  std::vector<double> lambda;  // sorted rapidities, matched one-to-one
  double residual;             // final max |Bethe residual|
  int iterations;
  std::vector<double> residual_history;
};

// Filled quantum numbers of a block state: for each block the numbers
// I_L + 1/2, I_L + 3/2, ..., I_R - 1/2. Edges must all sit on the integer
// (even N) or half-odd (odd N) lattice and blocks must not overlap.
std::vector<double> quantum_numbers_from_blocks(
    const std::vector<Interval>& blocks);

// Damped Newton with the analytic Jacobian; initial guess is the
// free-fermion image of the quantum numbers unless one is supplied.
FiniteState solve_bethe(const ModelSpec& model, double length,
                        std::vector<double> quantum_numbers,
                        const std::vector<double>* initial_guess = nullptr);

struct Observables {
  double P;                 // sum p0(lambda_j), checked against (2 pi/L) sum I_j
  double P_from_numbers;    // (2 pi / L) sum I_j, exact
  double E;                 // sum eps0(lambda_j), no chemical-potential term
  std::vector<double> Q;    // Q_n = sum lambda_j^n, n = 0..max_charge
};

Observables observables(const ModelSpec& model, const FiniteState& state,
                        const BareCharge& charge, int max_charge = 4);

// Finite-size realization of an excitation: edge moves N_ia per Fermi point
// (ordered sea0 L, sea0 R, sea1 L, ...), particle-hole momentum quanta per
// point (realized by moving the outermost occupied number outward by that
// many slots), and explicit impurity quantum numbers.
//
// Quantum numbers of excited states stay on the base-state lattice even when
// the particle number changes parity (fermionic convention).
struct ImpurityNumber {
  bool particle;  // true: add I outside the blocks; false: remove I inside
  double I;
};

struct ExcitationSpec {
  std::vector<int> added;   // per point; empty means all zero
  std::vector<int> quanta;  // per point, >= 0; empty means all zero
  std::vector<ImpurityNumber> impurities;
};

FiniteState excited_state(const ModelSpec& model, const FiniteState& base,
                          const std::vector<Interval>& base_blocks,
                          const ExcitationSpec& spec);

// Discrete shift function (lambda_j - lambda~_j) / (lambda_{j+1} - lambda_j)
// over the quantum numbers shared by both states.
struct DiscreteShift {
  std::vector<double> lambda;  // base rapidities where the shift is measured
  std::vector<double> value;
};

DiscreteShift discrete_shift(const FiniteState& base,
                             const FiniteState& excited);

}  // namespace splitsea
