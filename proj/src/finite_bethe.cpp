#include "splitsea/finite_bethe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace splitsea {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

bool on_half_lattice(double v) {
  return std::abs(2.0 * v - std::round(2.0 * v)) < 1e-9;
}
}  // namespace

std::vector<double> quantum_numbers_from_blocks(
    const std::vector<Interval>& blocks) {
  if (blocks.empty()) throw ConfigError("no quantum-number blocks given");
  long total = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double cnt = blocks[i].right - blocks[i].left;
    if (!(cnt > 0.5) || std::abs(cnt - std::round(cnt)) > 1e-9)
      throw ConfigError("block " + std::to_string(i) +
                        " must span a positive integer number of slots");
    if (!on_half_lattice(blocks[i].left) || !on_half_lattice(blocks[i].right))
      throw ConfigError("block edges must be integers or half-odd integers");
    if (i > 0 && !(blocks[i].left > blocks[i - 1].right + 0.5 - 1e-9))
      throw ConfigError("quantum-number blocks overlap");
    total += std::lround(cnt);
  }
  // Filled numbers are half-odd for even N and integer for odd N, which
  // puts the edges on the complementary lattice.
  const bool even = total % 2 == 0;
  for (const auto& b : blocks) {
    const double frac = b.left - std::floor(b.left);
    const bool integer_edge = std::abs(frac) < 1e-9 || std::abs(frac - 1.0) < 1e-9;
    if (integer_edge != even)
      throw ConfigError(
          "block edges mismatch the quantum-number parity: N = " +
          std::to_string(total) + " needs " +
          (even ? "integer" : "half-odd") + " edges");
  }
  std::vector<double> filled;
  filled.reserve(static_cast<std::size_t>(total));
  for (const auto& b : blocks) {
    const long cnt = std::lround(b.right - b.left);
    for (long m = 0; m < cnt; ++m) filled.push_back(b.left + 0.5 + m);
  }
  return filled;
}

namespace {

Eigen::VectorXd bethe_residual(const ModelSpec& model, double length,
                               const std::vector<double>& I,
                               const Eigen::VectorXd& lambda) {
  const auto n = lambda.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = length * model.p0(lambda[j]);
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != j) s += model.theta(lambda[j] - lambda[k]);
    r[j] = s - kTwoPi * I[static_cast<std::size_t>(j)];
  }
  return r;
}

FiniteState solve_bethe_impl(const ModelSpec& model, double length,
                             const std::vector<double>& I,
                             Eigen::VectorXd lambda) {
  const auto n = lambda.size();
  const double tol = 1e-12;
  const int max_iter = 200;

  FiniteState st;
  st.length = length;
  st.I = I;
  st.iterations = 0;

  Eigen::VectorXd r = bethe_residual(model, length, I, lambda);
  double rnorm = r.cwiseAbs().maxCoeff();
  st.residual_history.push_back(rnorm);

  Eigen::MatrixXd jac(n, n);
  for (int iter = 0; iter < max_iter && rnorm > tol; ++iter) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double diag = length * model.p0_prime(lambda[j]);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == j) continue;
        const double kk = model.K(lambda[j] - lambda[k]);
        diag += kk;
        jac(j, k) = -kk;
      }
      jac(j, j) = diag;
    }
    const Eigen::VectorXd dx = jac.partialPivLu().solve(-r);
    double alpha = 1.0;
    bool improved = false;
    for (int half = 0; half <= 10; ++half, alpha *= 0.5) {
      Eigen::VectorXd trial = lambda + alpha * dx;
      Eigen::VectorXd rt = bethe_residual(model, length, I, trial);
      const double tn = rt.cwiseAbs().maxCoeff();
      if (tn < rnorm) {
        lambda = std::move(trial);
        r = std::move(rt);
        rnorm = tn;
        improved = true;
        break;
      }
    }
    st.iterations = iter + 1;
    st.residual_history.push_back(rnorm);
    if (!improved) break;
  }

  if (rnorm > tol)
    throw NonConvergenceError("Bethe solve did not reach tolerance", rnorm);

  st.lambda.assign(lambda.data(), lambda.data() + n);
  for (Eigen::Index j = 1; j < n; ++j)
    if (!(lambda[j] > lambda[j - 1]))
      throw ConsistencyError("Bethe roots are not strictly increasing");
  st.residual = rnorm;
  return st;
}

}  // namespace

FiniteState solve_bethe(const ModelSpec& model, double length,
                        std::vector<double> quantum_numbers,
                        const std::vector<double>* initial_guess) {
  if (!(length > 0.0)) throw ConfigError("system length must be positive");
  if (quantum_numbers.empty()) throw ConfigError("empty quantum-number set");
  std::sort(quantum_numbers.begin(), quantum_numbers.end());
  for (std::size_t j = 1; j < quantum_numbers.size(); ++j)
    if (std::abs(quantum_numbers[j] - quantum_numbers[j - 1]) < 1e-9)
      throw ConfigError("quantum numbers must be distinct");

  const auto n = static_cast<Eigen::Index>(quantum_numbers.size());
  Eigen::VectorXd lambda(n);
  if (initial_guess) {
    if (initial_guess->size() != quantum_numbers.size())
      throw ConfigError("initial guess size mismatch");
    for (Eigen::Index j = 0; j < n; ++j)
      lambda[j] = (*initial_guess)[static_cast<std::size_t>(j)];
  } else {
    for (Eigen::Index j = 0; j < n; ++j)
      lambda[j] = model.p0_inverse(
          kTwoPi * quantum_numbers[static_cast<std::size_t>(j)] / length);
  }

  try {
    return solve_bethe_impl(model, length, quantum_numbers, lambda);
  } catch (const NonConvergenceError&) {
    if (model.kind() != ModelKind::LiebLiniger || initial_guess) throw;
  }
  // Continuation in the coupling from the near-free regime downward.
  const double c_target = model.coupling();
  double c = std::max(1e3, 10.0 * c_target);
  FiniteState st;
  for (Eigen::Index j = 0; j < n; ++j)
    lambda[j] = kTwoPi * quantum_numbers[static_cast<std::size_t>(j)] / length;
  while (true) {
    st = solve_bethe_impl(ModelSpec::lieb_liniger(c), length, quantum_numbers,
                          lambda);
    for (Eigen::Index j = 0; j < n; ++j)
      lambda[j] = st.lambda[static_cast<std::size_t>(j)];
    if (c == c_target) break;
    c = std::max(c_target, c / 4.0);
  }
  return st;
}

Observables observables(const ModelSpec& model, const FiniteState& state,
                        const BareCharge& charge, int max_charge) {
  Observables obs;
  obs.P_from_numbers = 0.0;
  for (double i : state.I) obs.P_from_numbers += kTwoPi * i / state.length;
  obs.P = 0.0;
  obs.E = 0.0;
  obs.Q.assign(static_cast<std::size_t>(max_charge) + 1, 0.0);
  for (double l : state.lambda) {
    obs.P += model.p0(l);
    obs.E += charge.eps0(l);
    double pw = 1.0;
    for (int nn = 0; nn <= max_charge; ++nn) {
      obs.Q[static_cast<std::size_t>(nn)] += pw;
      pw *= l;
    }
  }
  const double tol = 1e-9 * std::max<std::size_t>(state.lambda.size(), 1);
  if (std::abs(obs.P - obs.P_from_numbers) > tol)
    throw ConsistencyError("momentum from rapidities and from quantum "
                           "numbers disagree beyond tolerance");
  return obs;
}

FiniteState excited_state(const ModelSpec& model, const FiniteState& base,
                          const std::vector<Interval>& base_blocks,
                          const ExcitationSpec& spec) {
  const std::size_t n = base_blocks.size();
  const std::size_t np = 2 * n;
  std::vector<int> added = spec.added.empty() ? std::vector<int>(np, 0)
                                              : spec.added;
  std::vector<int> quanta = spec.quanta.empty() ? std::vector<int>(np, 0)
                                                : spec.quanta;
  if (added.size() != np || quanta.size() != np)
    throw ConfigError("excitation lists must have one entry per Fermi point");
  for (int q : quanta)
    if (q < 0) throw ConfigError("particle-hole quanta must be >= 0");

  std::vector<Interval> blocks = base_blocks;
  for (std::size_t i = 0; i < n; ++i) {
    blocks[i].left -= added[2 * i];
    blocks[i].right += added[2 * i + 1];
    if (!(blocks[i].right - blocks[i].left > 0.5))
      throw ConfigError("edge moves empty block " + std::to_string(i));
    if (i > 0 && !(blocks[i].left > blocks[i - 1].right + 0.5 - 1e-9))
      throw ConfigError("edge moves make blocks collide");
  }

  // Excited states keep the base lattice: build the filled set directly
  // from the shifted edges without re-checking parity.
  std::vector<double> I;
  for (const auto& b : blocks) {
    const long cnt = std::lround(b.right - b.left);
    for (long m = 0; m < cnt; ++m) I.push_back(b.left + 0.5 + m);
  }

  auto erase_number = [&I](double v, const char* what) {
    auto it = std::find_if(I.begin(), I.end(), [v](double x) {
      return std::abs(x - v) < 1e-9;
    });
    if (it == I.end())
      throw ConfigError(std::string(what) + " requires occupied number " +
                        std::to_string(v));
    I.erase(it);
  };
  auto insert_number = [&I](double v, const char* what) {
    for (double x : I)
      if (std::abs(x - v) < 1e-9)
        throw ConfigError(std::string(what) + " collides at quantum number " +
                          std::to_string(v));
    I.push_back(v);
  };

  for (std::size_t p = 0; p < np; ++p) {
    const int m = quanta[p];
    if (m == 0) continue;
    const std::size_t i = p / 2;
    if (p % 2 == 1) {
      const double top = blocks[i].right - 0.5;
      erase_number(top, "particle-hole");
      insert_number(top + m, "particle-hole");
    } else {
      const double bottom = blocks[i].left + 0.5;
      erase_number(bottom, "particle-hole");
      insert_number(bottom - m, "particle-hole");
    }
  }

  for (const auto& imp : spec.impurities) {
    bool inside = false;
    for (const auto& b : blocks)
      if (imp.I > b.left && imp.I < b.right) inside = true;
    if (imp.particle) {
      if (inside)
        throw ConfigError("particle impurity must lie outside the blocks");
      insert_number(imp.I, "particle impurity");
    } else {
      if (!inside)
        throw ConfigError("hole impurity must lie inside a block");
      erase_number(imp.I, "hole impurity");
    }
  }

  std::sort(I.begin(), I.end());

  // Warm start: keep the base rapidity for shared numbers, free-fermion
  // image for new ones.
  std::vector<double> guess(I.size());
  for (std::size_t j = 0; j < I.size(); ++j) {
    guess[j] = model.p0_inverse(kTwoPi * I[j] / base.length);
    for (std::size_t k = 0; k < base.I.size(); ++k)
      if (std::abs(base.I[k] - I[j]) < 1e-9) {
        guess[j] = base.lambda[k];
        break;
      }
  }
  return solve_bethe(model, base.length, std::move(I), &guess);
}

DiscreteShift discrete_shift(const FiniteState& base,
                             const FiniteState& excited) {
  if (std::abs(base.length - excited.length) > 1e-12)
    throw AlignmentError("states have different system lengths");

  // Pair quantum numbers by value; at most one unmatched number per side.
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::size_t only_base = 0, only_exc = 0;
  std::size_t a = 0, b = 0;
  while (a < base.I.size() && b < excited.I.size()) {
    const double d = base.I[a] - excited.I[b];
    if (std::abs(d) < 1e-9) {
      shared.emplace_back(a, b);
      ++a;
      ++b;
    } else if (d < 0) {
      ++only_base;
      ++a;
    } else {
      ++only_exc;
      ++b;
    }
  }
  only_base += base.I.size() - a;
  only_exc += excited.I.size() - b;
  if (only_base > 1 || only_exc > 1)
    throw AlignmentError(
        "states differ by more than one particle-hole or impurity");

  DiscreteShift out;
  for (const auto& [j, jj] : shared) {
    if (j + 1 >= base.lambda.size()) continue;  // no forward spacing at the top
    const double spacing = base.lambda[j + 1] - base.lambda[j];
    out.lambda.push_back(base.lambda[j]);
    out.value.push_back((base.lambda[j] - excited.lambda[jj]) / spacing);
  }
  return out;
}

}  // namespace splitsea
