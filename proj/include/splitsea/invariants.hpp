#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitsea/dressed.hpp"

namespace splitsea {

struct InvariantResult {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

struct InvariantOptions {
  std::uint64_t seed = 20160902;
  int pairs = 20;  // random sample pairs for the two-argument identities
  // Test hook: mis-signs one off-diagonal U entry before the
  // matrix-inverse checks, to prove the suite can fail.
  bool flip_u_sign = false;
};

// Runs the full identity suite for a dressed state: resolvent symmetry,
// shift-function derivative and sum-rule identities, the U matrix-inverse
// pair, dispersion roundtrips, k' = 2 pi rho, and the dressed-charge
// cross-checks. Deterministic for a fixed seed.
std::vector<InvariantResult> invariant_suite(
    const DressedState& dressed, const InvariantOptions& options = {});

bool all_pass(const std::vector<InvariantResult>& results);

}  // namespace splitsea
