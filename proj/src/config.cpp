#include "splitsea/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace splitsea {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    fail(path + "/" + key, "missing required key");
  return j.at(key);
}

double require_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

std::vector<Interval> parse_interval_list(const json& v,
                                          const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<Interval> out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      fail(path, "each entry must be a [left, right] pair");
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

SpectrumRequest parse_request(const json& v, const std::string& path) {
  SpectrumRequest req;
  if (!v.is_object()) fail(path, "expected an object");
  if (v.contains("N")) {
    for (const auto& e : v.at("N")) req.added.push_back(e.get<int>());
  }
  if (v.contains("n")) {
    for (const auto& e : v.at("n")) req.quanta.push_back(e.get<int>());
  }
  if (v.contains("impurities")) {
    for (const auto& e : v.at("impurities")) {
      const std::string type = e.at("type").get<std::string>();
      if (type != "particle" && type != "hole")
        fail(path + "/impurities", "type must be 'particle' or 'hole'");
      req.impurities.push_back({type == "particle" ? ImpurityType::Particle
                                                   : ImpurityType::Hole,
                                e.at("lambda").get<double>()});
    }
  }
  return req;
}

ojson request_echo(const SpectrumRequest& req) {
  ojson v;
  v["N"] = req.added;
  v["n"] = req.quanta;
  ojson imps = ojson::array();
  for (const auto& imp : req.impurities) {
    ojson e;
    e["type"] = imp.type == ImpurityType::Particle ? "particle" : "hole";
    e["lambda"] = imp.lambda;
    imps.push_back(e);
  }
  v["impurities"] = imps;
  return v;
}

ojson matrix_json(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

RunConfig parse_config(const json& input) {
  // A previously written report embeds its resolved config; accept both.
  const json& j =
      input.is_object() && input.contains("config") && input.contains("results")
          ? input.at("config")
          : input;

  RunConfig cfg;
  const json& model = require(j, "model", "");
  const std::string kind =
      require(model, "kind", "/model").get<std::string>();
  if (kind == "lieb_liniger") {
    cfg.model = ModelSpec::lieb_liniger(require_number(model, "c", "/model"));
  } else if (kind == "xxz") {
    cfg.model = ModelSpec::xxz(require_number(model, "zeta", "/model"));
  } else {
    fail("/model/kind", "unknown model kind '" + kind + "'");
  }

  if (j.contains("charge")) {
    const json& charge = j.at("charge");
    const std::string form =
        require(charge, "form", "/charge").get<std::string>();
    if (form == "polynomial") {
      std::vector<double> beta;
      for (const auto& e : require(charge, "beta", "/charge"))
        beta.push_back(e.get<double>());
      cfg.charge = BareCharge::polynomial(beta);
    } else if (form == "xxz_energy") {
      const double zeta = charge.contains("zeta")
                              ? charge.at("zeta").get<double>()
                              : (cfg.model.kind() == ModelKind::XXZ
                                     ? cfg.model.coupling()
                                     : 0.0);
      cfg.charge = BareCharge::xxz_energy(zeta);
    } else if (form == "tabulated") {
      std::vector<double> xs, ys;
      for (const auto& e : require(charge, "lambda", "/charge"))
        xs.push_back(e.get<double>());
      for (const auto& e : require(charge, "value", "/charge"))
        ys.push_back(e.get<double>());
      cfg.charge = BareCharge::tabulated(xs, ys);
    } else {
      fail("/charge/form", "unknown charge form '" + form + "'");
    }
  }

  const json& seas = require(j, "seas", "");
  const bool has_intervals = seas.contains("intervals");
  const bool has_blocks = seas.contains("blocks");
  if (has_intervals == has_blocks)
    fail("/seas", "exactly one of 'intervals' or 'blocks' must be given");
  if (has_intervals) {
    cfg.intervals = parse_interval_list(seas.at("intervals"), "/seas/intervals");
    if (j.contains("L")) cfg.length = j.at("L").get<double>();
  } else {
    BlockOrigin origin;
    origin.blocks = parse_interval_list(seas.at("blocks"), "/seas/blocks");
    origin.length = require_number(seas, "L", "/seas");
    cfg.length = origin.length;
    cfg.blocks = std::move(origin);
  }

  if (j.contains("quadrature_order")) {
    cfg.quadrature_order = j.at("quadrature_order").get<int>();
    if (cfg.quadrature_order < 2)
      fail("/quadrature_order", "must be >= 2");
  }

  if (j.contains("requests")) {
    const json& reqs = j.at("requests");
    if (!reqs.is_array()) fail("/requests", "expected an array");
    for (std::size_t i = 0; i < reqs.size(); ++i)
      cfg.requests.push_back(
          parse_request(reqs[i], "/requests/" + std::to_string(i)));
  }

  if (j.contains("study")) {
    const json& st = j.at("study");
    StudySpec study;
    for (const auto& e : require(st, "L_values", "/study"))
      study.L_values.push_back(e.get<double>());
    if (study.L_values.size() < 3)
      fail("/study/L_values", "need at least 3 lengths");
    for (std::size_t i = 1; i < study.L_values.size(); ++i)
      if (!(study.L_values[i] > study.L_values[i - 1]))
        fail("/study/L_values", "lengths must increase strictly");
    study.request = parse_request(require(st, "spec", "/study"), "/study/spec");
    cfg.study = std::move(study);
  }

  if (j.contains("output")) {
    const json& out = j.at("output");
    if (out.contains("format")) {
      cfg.output_format = out.at("format").get<std::string>();
      if (cfg.output_format != "json" && cfg.output_format != "csv")
        fail("/output/format", "must be 'json' or 'csv'");
    }
    if (out.contains("path"))
      cfg.output_path = out.at("path").get<std::string>();
  }

  if (j.contains("fault_injection"))
    cfg.fault_flip_u = j.at("fault_injection").get<std::string>() ==
                       "flip_u_sign";
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();

  // Canonical echo with defaults resolved.
  ojson echo;
  echo["model"] = ojson::object();
  echo["model"]["kind"] = kind;
  if (cfg.model.kind() == ModelKind::LiebLiniger)
    echo["model"]["c"] = cfg.model.coupling();
  else
    echo["model"]["zeta"] = cfg.model.coupling();
  ojson charge_echo;
  switch (cfg.charge.form()) {
    case ChargeForm::Polynomial:
      charge_echo["form"] = "polynomial";
      charge_echo["beta"] = cfg.charge.coefficients();
      break;
    case ChargeForm::XXZEnergy:
      charge_echo["form"] = "xxz_energy";
      break;
    case ChargeForm::Tabulated:
      charge_echo["form"] = "tabulated";
      if (j.contains("charge")) {
        charge_echo["lambda"] = j.at("charge").at("lambda");
        charge_echo["value"] = j.at("charge").at("value");
      }
      break;
  }
  echo["charge"] = charge_echo;
  ojson seas_echo;
  if (cfg.intervals) {
    ojson ivs = ojson::array();
    for (const auto& iv : *cfg.intervals)
      ivs.push_back(ojson::array({iv.left, iv.right}));
    seas_echo["intervals"] = ivs;
  } else {
    ojson bls = ojson::array();
    for (const auto& b : cfg.blocks->blocks)
      bls.push_back(ojson::array({b.left, b.right}));
    seas_echo["blocks"] = bls;
    seas_echo["L"] = cfg.blocks->length;
  }
  echo["seas"] = seas_echo;
  if (cfg.length && cfg.intervals) echo["L"] = *cfg.length;
  echo["quadrature_order"] = cfg.quadrature_order;
  ojson req_echo = ojson::array();
  for (const auto& r : cfg.requests) req_echo.push_back(request_echo(r));
  echo["requests"] = req_echo;
  if (cfg.study) {
    ojson st;
    st["L_values"] = cfg.study->L_values;
    st["spec"] = request_echo(cfg.study->request);
    echo["study"] = st;
  }
  ojson out_echo;
  out_echo["format"] = cfg.output_format;
  out_echo["path"] = cfg.output_path;
  echo["output"] = out_echo;
  if (cfg.fault_flip_u) echo["fault_injection"] = "flip_u_sign";
  cfg.resolved = std::move(echo);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

DressedState dressed_from_config(const RunConfig& cfg) {
  SeaConfig seas = cfg.blocks
                       ? seas_from_blocks(cfg.model, cfg.blocks->blocks,
                                          cfg.blocks->length,
                                          cfg.quadrature_order)
                       : SeaConfig(*cfg.intervals);
  return DressedState::compute(cfg.model, cfg.charge, seas,
                               cfg.quadrature_order);
}

// ---------------------------------------------------------------------------

namespace {

ojson fermi_json(const DressedState& dressed) {
  ojson pts = ojson::array();
  for (const auto& pt : dressed.fermi()) {
    ojson e;
    e["sea"] = pt.sea;
    e["side"] = pt.side == Side::Left ? "L" : "R";
    e["s"] = static_cast<int>(pt.sign);
    e["lambda"] = pt.lambda;
    e["k"] = pt.k;
    e["rho"] = pt.rho;
    e["eps"] = pt.eps;
    e["eps_prime"] = pt.eps_prime;
    e["eps_tilde"] = pt.eps_tilde;
    e["eps_tilde_prime"] = pt.eps_tilde_prime;
    e["v"] = pt.v;
    e["v_tilde"] = pt.v_tilde;
    pts.push_back(e);
  }
  return pts;
}

}  // namespace

ojson report_json(const SpectrumReport& report) {
  ojson r;
  r["extensive"] = report.extensive;
  r["casimir"] = report.casimir;
  r["dE1"] = report.dE1;
  r["dE2"] = report.dE2;
  r["total"] = report.total;
  ojson pts = ojson::array();
  for (const auto& p : report.points) {
    ojson e;
    e["sea"] = p.sea;
    e["side"] = std::string(1, p.side);
    e["lambda"] = p.lambda;
    e["eps_tilde"] = p.eps_tilde;
    e["v_tilde"] = p.v_tilde;
    e["N"] = p.added;
    e["n"] = p.quanta;
    e["backflow"] = p.backflow;
    e["dE1"] = p.dE1;
    e["dE2"] = p.dE2;
    pts.push_back(e);
  }
  r["per_point"] = pts;
  if (!report.impurities.empty()) {
    ojson imps = ojson::array();
    for (const auto& imp : report.impurities) {
      ojson e;
      e["type"] = imp.type == ImpurityType::Particle ? "particle" : "hole";
      e["lambda"] = imp.lambda;
      e["eps_tilde"] = imp.eps_tilde;
      e["n_imp"] = imp.n_imp;
      e["d_imp"] = imp.d_imp;
      e["n_imp_ia"] = imp.n_imp_ia;
      imps.push_back(e);
    }
    r["impurity"] = imps;
  }
  return r;
}

ojson run_compute(const RunConfig& cfg) {
  DressedState dressed = dressed_from_config(cfg);

  // Internal oracle gate: the report is only written if the identity suite
  // holds at this state.
  InvariantOptions opts;
  opts.pairs = 6;
  const auto checks = invariant_suite(dressed, opts);
  double worst_margin = 0.0;
  for (const auto& c : checks)
    worst_margin = std::max(worst_margin, c.residual / c.tolerance);
  if (!all_pass(checks))
    throw ConsistencyError(
        "invariant gate failed; refusing to write a compute report");

  ojson out;
  out["config"] = cfg.resolved;
  ojson res;
  res["fermi_points"] = fermi_json(dressed);
  ojson bulk;
  bulk["energy_density"] = dressed.extensive_density();
  bulk["casimir_coefficient"] = dressed.casimir_coefficient();
  if (cfg.length) {
    const BulkEnergy be = bulk_energy(dressed, *cfg.length);
    bulk["extensive"] = be.extensive;
    bulk["casimir"] = be.casimir;
  }
  res["bulk"] = bulk;

  const Counts counts = dressed.counts();
  ojson cj;
  cj["N_per_L"] = counts.N;
  cj["D_per_L"] = counts.D;
  if (cfg.length) {
    std::vector<double> nl, dl;
    for (double v : counts.N) nl.push_back(v * *cfg.length);
    for (double v : counts.D) dl.push_back(v * *cfg.length);
    cj["N"] = nl;
    cj["D"] = dl;
  }
  res["counts"] = cj;

  ojson mats;
  mats["U"] = matrix_json(dressed.U());
  mats["U_inverse"] = matrix_json(dressed.U_inverse());
  if (dressed.seas().is_symmetric()) {
    const SymmetricMatrices sm = dressed.symmetric_matrices();
    mats["Z"] = matrix_json(sm.Z);
    mats["Y"] = matrix_json(sm.Y);
    mats["xi"] = matrix_json(sm.xi);
  }
  res["matrices"] = mats;

  ojson gate;
  gate["pass"] = true;
  gate["worst_residual_over_tolerance"] = worst_margin;
  res["invariant_gate"] = gate;

  if (!cfg.requests.empty()) {
    if (!cfg.length)
      throw ConfigError("spectrum requests need a system length 'L'");
    ojson reqs = ojson::array();
    for (const auto& r : cfg.requests) {
      ojson e;
      e["request"] = request_echo(r);
      e["report"] = report_json(impurity_delta(dressed, r, *cfg.length));
      reqs.push_back(e);
    }
    res["requests"] = reqs;
  }
  out["results"] = res;
  return out;
}

VerifyOutcome run_verify(const RunConfig& cfg) {
  DressedState dressed = dressed_from_config(cfg);
  InvariantOptions opts;
  opts.flip_u_sign = cfg.fault_flip_u;
  VerifyOutcome out;
  out.checks = invariant_suite(dressed, opts);
  out.pass = all_pass(out.checks);
  ojson rep;
  rep["config"] = cfg.resolved;
  ojson rows = ojson::array();
  for (const auto& c : out.checks) {
    ojson e;
    e["name"] = c.name;
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    rows.push_back(e);
  }
  rep["results"] = ojson::object();
  rep["results"]["invariants"] = rows;
  rep["results"]["pass"] = out.pass;
  out.report = std::move(rep);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ScalingRow {
  double length = 0.0;
  double e_finite = 0.0;
  double e_pred = 0.0;
  double residual = 0.0;
  bool ok = false;
  std::string error;
};

double lattice_round(double x, bool half_odd) {
  return half_odd ? std::round(x - 0.5) + 0.5 : std::round(x);
}

// Invert the dressed momentum with Newton (k' = 2 pi rho).
double rapidity_from_momentum(const DressedState& dressed, double k_target,
                              double guess) {
  double x = guess;
  for (int it = 0; it < 100; ++it) {
    const double r = dressed.momentum(x) - k_target;
    if (std::abs(r) < 1e-12) return x;
    x -= r / (kTwoPi * dressed.rho_at(x));
  }
  throw NonConvergenceError("momentum inversion did not converge", 0.0);
}

ScalingRow scaling_row(const RunConfig& cfg, const DressedState& dressed,
                       double length) {
  ScalingRow row;
  row.length = length;
  const double factor = length / cfg.blocks->length;
  std::vector<Interval> blocks = cfg.blocks->blocks;
  for (auto& b : blocks) {
    b.left *= factor;
    b.right *= factor;
    if (std::abs(2.0 * b.left - std::round(2.0 * b.left)) > 1e-9 ||
        std::abs(2.0 * b.right - std::round(2.0 * b.right)) > 1e-9)
      throw ConfigError("scaled blocks leave the quantum-number lattice at L=" +
                        std::to_string(length));
  }

  const auto base_numbers = quantum_numbers_from_blocks(blocks);
  const bool half_odd_lattice =
      std::abs(base_numbers.front() - std::floor(base_numbers.front()) - 0.5) <
      1e-9;
  FiniteState base = solve_bethe(cfg.model, length, base_numbers);

  const SpectrumRequest& req = cfg.study->request;
  SpectrumRequest pred_req = req;
  ExcitationSpec spec;
  spec.added = req.added;
  spec.quanta = req.quanta;
  for (std::size_t i = 0; i < req.impurities.size(); ++i) {
    const auto& imp = req.impurities[i];
    const double k = dressed.momentum(imp.lambda);
    double number = lattice_round(length * k / kTwoPi, half_odd_lattice);
    spec.impurities.push_back(
        {imp.type == ImpurityType::Particle, number});
    // Re-anchor the predicted impurity rapidity on the realized lattice slot.
    pred_req.impurities[i].lambda = rapidity_from_momentum(
        dressed, kTwoPi * number / length, imp.lambda);
  }

  const bool excited_differs = !spec.impurities.empty() ||
                               std::any_of(req.added.begin(), req.added.end(),
                                           [](int v) { return v != 0; }) ||
                               std::any_of(req.quanta.begin(),
                                           req.quanta.end(),
                                           [](int v) { return v != 0; });

  double e_finite;
  if (excited_differs) {
    FiniteState exc = excited_state(cfg.model, base, blocks, spec);
    e_finite = observables(cfg.model, exc, cfg.charge).E;
  } else {
    e_finite = observables(cfg.model, base, cfg.charge).E;
  }

  const BulkEnergy bulk = bulk_energy(dressed, length);
  const SpectrumReport delta = impurity_delta(dressed, pred_req, length);
  row.e_pred = bulk.extensive + bulk.casimir + delta.dE1 + delta.dE2;
  row.e_finite = e_finite;
  row.residual = e_finite - row.e_pred;
  row.ok = true;
  return row;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

}  // namespace

std::string run_scaling(const RunConfig& cfg) {
  if (!cfg.blocks)
    throw ConfigError("scaling study requires a blocks-form sea spec");
  if (!cfg.study) throw ConfigError("scaling study requires a 'study' entry");

  const DressedState dressed = dressed_from_config(cfg);

  const auto& lengths = cfg.study->L_values;
  const int jobs = cfg.jobs > 0
                       ? cfg.jobs
                       : std::max(1u, std::thread::hardware_concurrency());
  std::vector<ScalingRow> rows(lengths.size());
  std::size_t next = 0;
  while (next < lengths.size()) {
    const std::size_t batch =
        std::min<std::size_t>(jobs, lengths.size() - next);
    std::vector<std::future<ScalingRow>> futures;
    for (std::size_t b = 0; b < batch; ++b) {
      const double length = lengths[next + b];
      futures.push_back(std::async(std::launch::async, [&, length]() {
        return scaling_row(cfg, dressed, length);
      }));
    }
    for (std::size_t b = 0; b < batch; ++b) {
      try {
        rows[next + b] = futures[b].get();
      } catch (const Error& e) {
        rows[next + b].length = lengths[next + b];
        rows[next + b].ok = false;
        rows[next + b].error = e.what();
      }
    }
    next += batch;
  }

  std::ostringstream csv;
  csv << "L,E_finite,E_pred,residual,residual_L,residual_L2\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      csv << format_double(row.length) << ",error,error,error,error,error\n";
      continue;
    }
    csv << format_double(row.length) << ',' << format_double(row.e_finite)
        << ',' << format_double(row.e_pred) << ','
        << format_double(row.residual) << ','
        << format_double(row.residual * row.length) << ','
        << format_double(row.residual * row.length * row.length) << '\n';
  }

  // Log-log slope of |residual| vs L over the completed rows.
  std::vector<double> lx, ly;
  bool floor_hit = false;
  for (const auto& row : rows)
    if (row.ok) {
      if (std::abs(row.residual) < 1e-13) {
        floor_hit = true;
        continue;
      }
      lx.push_back(std::log(row.length));
      ly.push_back(std::log(std::abs(row.residual)));
    }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    csv << "# fitted_loglog_slope = " << format_double(num / den) << '\n';
  } else {
    csv << "# fitted_loglog_slope = n/a"
        << (floor_hit ? " (residuals at rounding floor)" : "") << '\n';
  }
  for (const auto& row : rows)
    if (!row.ok) csv << "# incomplete row L=" << row.length << ": " << row.error
                     << '\n';
  return csv.str();
}

// ---------------------------------------------------------------------------

namespace {

void dump_value(const ojson& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in + '"' + it.key() + "\": ";
        dump_value(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_value(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + ']';
      return;
    }
    case ojson::value_t::number_float: {
      out += format_double(j.get<double>());
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_report(const ojson& j) {
  std::string out;
  dump_value(j, out, 2, 0);
  out += '\n';
  return out;
}

}  // namespace splitsea
