#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "splitsea/dressed.hpp"
#include "splitsea/finite_bethe.hpp"
#include "splitsea/invariants.hpp"
#include "splitsea/spectrum.hpp"

namespace splitsea {

struct StudySpec {
  std::vector<double> L_values;
  SpectrumRequest request;
};

// One JSON config drives every subcommand; flags only pick the subcommand.
// Exactly one of `intervals` / `blocks` describes the seas.
struct RunConfig {
  ModelSpec model = ModelSpec::lieb_liniger(1.0);
  BareCharge charge = BareCharge::monomial(2);
  std::optional<std::vector<Interval>> intervals;
  std::optional<BlockOrigin> blocks;
  std::optional<double> length;  // blocks carry it; optional for intervals
  int quadrature_order = 64;
  std::vector<SpectrumRequest> requests;
  std::optional<StudySpec> study;
  std::string output_format = "json";
  std::string output_path;  // empty: stdout
  bool fault_flip_u = false;
  int jobs = 0;  // 0: hardware concurrency
  nlohmann::ordered_json resolved;
};

RunConfig parse_config(const nlohmann::json& input);
RunConfig load_config_file(const std::string& path);

// Builds the sea configuration (mapping blocks to rapidities if needed) and
// the dressed state for a config.
DressedState dressed_from_config(const RunConfig& cfg);

// compute: per-point data, matrices, counts, and one report per request;
// runs the invariant suite as an in-process gate before returning.
nlohmann::ordered_json run_compute(const RunConfig& cfg);

struct VerifyOutcome {
  std::vector<InvariantResult> checks;
  bool pass;
  nlohmann::ordered_json report;
};
VerifyOutcome run_verify(const RunConfig& cfg);

// scaling: finite-N Bethe energies against the order-1/L prediction across
// study.L_values (block edges scale with L so the seas stay fixed). Rows run
// concurrently up to `jobs`; output rows are ordered by L.
std::string run_scaling(const RunConfig& cfg);

// Serialization with fixed field order and %.12e floats: identical configs
// produce byte-identical reports.
std::string dump_report(const nlohmann::ordered_json& j);

nlohmann::ordered_json report_json(const SpectrumReport& report);

}  // namespace splitsea
