#pragma once

// JSON files: pulse schedules, channel reports, run configurations and
// density-matrix dumps.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fmosim/channels.hpp"
#include "fmosim/circuit_text.hpp"
#include "fmosim/dynamics.hpp"
#include "fmosim/hamiltonians.hpp"
#include "fmosim/nmr_compiler.hpp"

namespace fmosim {

using json = nlohmann::json;

inline constexpr int kScheduleSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

namespace detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

inline const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(where + ": missing key '" + key + "'");
  return *it;
}

inline double get_finite(const json& j, const std::string& where) {
  if (!j.is_number()) throw std::invalid_argument(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw std::invalid_argument(where + ": must be finite");
  return v;
}

inline int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw std::invalid_argument(where + ": expected an integer");
  return j.get<int>();
}

inline std::vector<double> get_reals(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_finite(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<int> get_ints(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw std::invalid_argument(where + ": expected a string");
  return j.get<std::string>();
}

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Frame parse_frame(const std::string& s) {
  if (s == "z") return Frame::z;
  if (s == "x") return Frame::x;
  if (s == "y") return Frame::y;
  throw std::invalid_argument("schedule: unknown frame '" + s + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pulse schedules
// ---------------------------------------------------------------------------

namespace detail {

inline bool uniform_durations(const PulseSchedule& s) {
  return std::all_of(s.durations.begin(), s.durations.end(), [&](double d) { return d == s.durations.front(); });
}

/// interval_duration/intervals when uniform, else an explicit durations list.
inline void put_segment(json& j, const PulseSchedule& s) {
  if (!s.durations.empty() && uniform_durations(s)) {
    j["interval_duration"] = s.durations.front();
    j["intervals"] = s.durations.size();
  } else {
    j["durations"] = s.durations;
  }
  j["pulse_layers"] = s.pulse_layers;
}

inline PulseSchedule get_segment(const json& j, int n_qubits, const std::string& where) {
  PulseSchedule s;
  s.n_qubits = n_qubits;
  if (j.contains("durations")) {
    if (j.contains("interval_duration") || j.contains("intervals")) {
      throw std::invalid_argument(where + ": give either durations or interval_duration/intervals");
    }
    s.durations = get_reals(j["durations"], where + ".durations");
  } else {
    const double d = get_finite(require(j, "interval_duration", where), where + ".interval_duration");
    const int m = get_int(require(j, "intervals", where), where + ".intervals");
    if (m < 0) throw std::invalid_argument(where + ".intervals must be >= 0");
    s.durations.assign(static_cast<std::size_t>(m), d);
  }
  const json& layers = require(j, "pulse_layers", where);
  if (!layers.is_array()) throw std::invalid_argument(where + ".pulse_layers: expected an array");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    s.pulse_layers.push_back(get_ints(layers[k], where + ".pulse_layers[" + std::to_string(k) + "]"));
  }
  if (s.pulse_layers.size() != s.durations.size() + 1) {
    throw std::invalid_argument(where + ": pulse_layers must have one more entry than the intervals");
  }
  for (double d : s.durations) {
    if (d < 0.0) throw std::invalid_argument(where + ": negative duration");
  }
  for (const auto& layer : s.pulse_layers) {
    for (int q : layer) check_qubit(q, n_qubits);
  }
  return s;
}

}  // namespace detail

/// Single z-frame schedules are written flat:
///   {n_qubits, target, tau, coefficient, interval_duration, intervals, pulse_layers}
/// Multi-segment schedules (xy targets) carry a "segments" list, each entry
/// adding its frame and the qubits that receive the basis change.
inline json schedule_to_json(const CompiledSchedule& c) {
  json j;
  j["schema_version"] = kScheduleSchemaVersion;
  j["n_qubits"] = c.n_qubits;
  j["target"] = c.target.label();
  j["tau"] = c.target.tau;
  j["coefficient"] = c.target.coefficient;
  if (c.segments.size() == 1 && c.segments.front().frame == Frame::z) {
    detail::put_segment(j, c.segments.front());
    return j;
  }
  json segs = json::array();
  for (const auto& s : c.segments) {
    json sj;
    sj["frame"] = to_string(s.frame);
    sj["frame_qubits"] = s.frame_qubits;
    detail::put_segment(sj, s);
    segs.push_back(std::move(sj));
  }
  j["segments"] = std::move(segs);
  return j;
}

inline CompiledSchedule schedule_from_json(const json& j) {
  const std::string where = "schedule";
  detail::check_keys(j,
                     {"schema_version", "n_qubits", "target", "tau", "coefficient", "segments", "interval_duration",
                      "intervals", "durations", "pulse_layers"},
                     where);
  if (detail::get_int(detail::require(j, "schema_version", where), "schema_version") != kScheduleSchemaVersion) {
    throw std::invalid_argument("schedule: unsupported schema_version");
  }
  CompiledSchedule c;
  c.n_qubits = detail::get_int(detail::require(j, "n_qubits", where), "n_qubits");
  if (c.n_qubits < 1 || c.n_qubits > 12) throw std::invalid_argument("schedule: n_qubits out of range");
  c.target = parse_target(detail::get_string(detail::require(j, "target", where), "target"));
  c.target.tau = detail::get_finite(detail::require(j, "tau", where), "tau");
  c.target.coefficient = detail::get_finite(detail::require(j, "coefficient", where), "coefficient");
  check_qubit(c.target.first, c.n_qubits);
  if (c.target.kind != TargetKind::z) check_qubit(c.target.second, c.n_qubits);

  if (!j.contains("segments")) {
    c.segments.push_back(detail::get_segment(j, c.n_qubits, where));
    return c;
  }
  if (j.contains("pulse_layers") || j.contains("durations") || j.contains("interval_duration") || j.contains("intervals")) {
    throw std::invalid_argument("schedule: flat interval fields and segments are exclusive");
  }
  const json& segs = j["segments"];
  if (!segs.is_array() || segs.empty()) throw std::invalid_argument("schedule: segments must be a non-empty array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string sw = "segments[" + std::to_string(i) + "]";
    const json& sj = segs[i];
    detail::check_keys(sj, {"frame", "frame_qubits", "interval_duration", "intervals", "durations", "pulse_layers"}, sw);
    PulseSchedule s = detail::get_segment(sj, c.n_qubits, sw);
    s.frame = detail::parse_frame(detail::get_string(detail::require(sj, "frame", sw), sw + ".frame"));
    s.frame_qubits = detail::get_ints(detail::require(sj, "frame_qubits", sw), sw + ".frame_qubits");
    for (int q : s.frame_qubits) check_qubit(q, c.n_qubits);
    c.segments.push_back(std::move(s));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Channel reports
// ---------------------------------------------------------------------------

inline json channel_report(const KrausChannel& ch) {
  json j;
  j["provenance"] = provenance_name(ch.provenance);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, provenance::Angles>) {
          j["upsilon"] = p.upsilon;
          j["mu"] = p.mu;
        } else if constexpr (!std::is_same_v<P, provenance::Explicit>) {
          j["rate"] = p.rate;
          j["time"] = p.time;
        }
      },
      ch.provenance);
  json ops = json::array();
  for (const auto& k : ch.ops) ops.push_back(detail::matrix_json(Matrix(k)));
  j["kraus"] = std::move(ops);
  j["cptp_status"] = to_string(ch.cptp);
  j["deficit_norm"] = ch.deficit;
  if (ch.cptp == CptpStatus::verified) {
    const AffineChannel a = bloch_affine(ch);
    j["bloch_diag"] = {a.M(0, 0), a.M(1, 1), a.M(2, 2)};
    j["bloch_shift"] = {a.m(0), a.m(1), a.m(2)};
  }
  if (two_kraus_angles(ch)) {
    j["circuit"] = export_text(channel_circuit(ch));
  } else {
    j["circuit"] = nullptr;
    j["circuit_note"] = "no two-outcome circuit: the operator pair is not a realizable channel";
  }
  return j;
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct EvolutionSettings {
  double t_max = 2.0;
  double dt = 0.05;
  /// "exact", "trotter" or "both".
  std::string method = "trotter";
  std::string initial_state = "site:1";
  StepLowering lowering = StepLowering::dense_blocks;

  friend bool operator==(const EvolutionSettings&, const EvolutionSettings&) = default;
};

struct OutputSettings {
  std::string csv;
  /// Full density matrices per sample, written when non-empty.
  std::string states;

  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct RunConfig {
  std::string description;
  FmoParameters fmo;
  NoiseParameters noise;
  std::optional<NmrParameters> nmr;
  EvolutionSettings evolution;
  OutputSettings output;

  void validate() const {
    fmo.validate();
    noise.validate(fmo.n_sites);
    if (nmr) {
      nmr->validate();
      if (nmr->n_qubits != fmo.n_sites) throw std::invalid_argument("config: nmr register size != fmo.n_sites");
    }
    if (!(evolution.dt > 0.0) || !std::isfinite(evolution.dt)) throw std::invalid_argument("config: evolution.dt must be > 0");
    if (!(evolution.t_max >= 0.0) || !std::isfinite(evolution.t_max)) {
      throw std::invalid_argument("config: evolution.t_max must be >= 0");
    }
    if (evolution.method != "exact" && evolution.method != "trotter" && evolution.method != "both") {
      throw std::invalid_argument("config: evolution.method must be exact, trotter or both");
    }
    initial_state(evolution.initial_state, fmo.n_sites);
  }

  /// NMR resource parameters for compilation: the configured ones, else
  /// those matching the FMO step.
  NmrParameters nmr_or_default() const { return nmr ? *nmr : NmrParameters::from_fmo(fmo); }
};

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  auto nmr_eq = [](const std::optional<NmrParameters>& x, const std::optional<NmrParameters>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->n_qubits == y->n_qubits && x->omega == y->omega && x->J == y->J);
  };
  return a.description == b.description && a.fmo.n_sites == b.fmo.n_sites && a.fmo.epsilon == b.fmo.epsilon &&
         a.fmo.nu == b.fmo.nu && a.noise.Gamma == b.noise.Gamma && a.noise.gamma == b.noise.gamma &&
         nmr_eq(a.nmr, b.nmr) && a.evolution == b.evolution && a.output == b.output;
}

inline json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["description"] = c.description;
  json nu = json::array();
  for (Eigen::Index r = 0; r < c.fmo.nu.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index k = 0; k < c.fmo.nu.cols(); ++k) row.push_back(c.fmo.nu(r, k));
    nu.push_back(std::move(row));
  }
  j["fmo"] = {{"n_sites", c.fmo.n_sites}, {"epsilon", c.fmo.epsilon}, {"nu", std::move(nu)}};
  j["noise"] = {{"Gamma", c.noise.Gamma}, {"gamma", c.noise.gamma}};
  if (c.nmr) j["nmr"] = {{"omega", c.nmr->omega}, {"J", c.nmr->J}};
  j["evolution"] = {{"t_max", c.evolution.t_max},
                    {"dt", c.evolution.dt},
                    {"method", c.evolution.method},
                    {"initial_state", c.evolution.initial_state},
                    {"lowering", to_string(c.evolution.lowering)}};
  j["output"] = {{"csv", c.output.csv}, {"states", c.output.states}};
  return j;
}

inline RunConfig config_from_json(const json& j) {
  const std::string where = "config";
  detail::check_keys(j, {"schema_version", "description", "fmo", "noise", "nmr", "evolution", "output"}, where);
  if (detail::get_int(detail::require(j, "schema_version", where), "config.schema_version") != kConfigSchemaVersion) {
    throw std::invalid_argument("config: unsupported schema_version");
  }
  RunConfig c;
  if (j.contains("description")) c.description = detail::get_string(j["description"], "config.description");

  const json& f = detail::require(j, "fmo", where);
  detail::check_keys(f, {"n_sites", "epsilon", "nu"}, "config.fmo");
  c.fmo.n_sites = detail::get_int(detail::require(f, "n_sites", "config.fmo"), "config.fmo.n_sites");
  if (c.fmo.n_sites < 1 || c.fmo.n_sites > 12) throw std::invalid_argument("config.fmo.n_sites must be 1..12");
  c.fmo.epsilon = detail::get_reals(detail::require(f, "epsilon", "config.fmo"), "config.fmo.epsilon");
  const json& nu = detail::require(f, "nu", "config.fmo");
  if (!nu.is_array() || static_cast<int>(nu.size()) != c.fmo.n_sites) {
    throw std::invalid_argument("config.fmo.nu must be an n_sites x n_sites array");
  }
  c.fmo.nu = Eigen::MatrixXd::Zero(c.fmo.n_sites, c.fmo.n_sites);
  for (int r = 0; r < c.fmo.n_sites; ++r) {
    auto row = detail::get_reals(nu[static_cast<std::size_t>(r)], "config.fmo.nu[" + std::to_string(r) + "]");
    if (static_cast<int>(row.size()) != c.fmo.n_sites) throw std::invalid_argument("config.fmo.nu must be square");
    for (int k = 0; k < c.fmo.n_sites; ++k) c.fmo.nu(r, k) = row[static_cast<std::size_t>(k)];
  }

  const json& nz = detail::require(j, "noise", where);
  detail::check_keys(nz, {"Gamma", "gamma"}, "config.noise");
  c.noise.Gamma = detail::get_reals(detail::require(nz, "Gamma", "config.noise"), "config.noise.Gamma");
  c.noise.gamma = detail::get_reals(detail::require(nz, "gamma", "config.noise"), "config.noise.gamma");

  if (j.contains("nmr")) {
    const json& nm = j["nmr"];
    detail::check_keys(nm, {"omega", "J"}, "config.nmr");
    NmrParameters p;
    p.omega = detail::get_reals(detail::require(nm, "omega", "config.nmr"), "config.nmr.omega");
    p.J = detail::get_reals(detail::require(nm, "J", "config.nmr"), "config.nmr.J");
    p.n_qubits = static_cast<int>(p.omega.size());
    c.nmr = std::move(p);
  }

  if (j.contains("evolution")) {
    const json& e = j["evolution"];
    const std::string ew = "config.evolution";
    detail::check_keys(e, {"t_max", "dt", "method", "initial_state", "lowering"}, ew);
    if (e.contains("t_max")) c.evolution.t_max = detail::get_finite(e["t_max"], ew + ".t_max");
    if (e.contains("dt")) c.evolution.dt = detail::get_finite(e["dt"], ew + ".dt");
    if (e.contains("method")) c.evolution.method = detail::get_string(e["method"], ew + ".method");
    if (e.contains("initial_state")) c.evolution.initial_state = detail::get_string(e["initial_state"], ew + ".initial_state");
    if (e.contains("lowering")) c.evolution.lowering = parse_step_lowering(detail::get_string(e["lowering"], ew + ".lowering"));
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    detail::check_keys(o, {"csv", "states"}, "config.output");
    if (o.contains("csv")) c.output.csv = detail::get_string(o["csv"], "config.output.csv");
    if (o.contains("states")) c.output.states = detail::get_string(o["states"], "config.output.states");
  }

  c.validate();
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline RunConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// State dumps
// ---------------------------------------------------------------------------

/// {"times": [...], "states": [[[re, im], ...] row-major per state]}
inline json trajectory_states_json(const Trajectory& t) {
  json j;
  j["method"] = to_string(t.method);
  j["times"] = t.times;
  json states = json::array();
  for (const auto& s : t.states) {
    const Matrix& m = s.matrix();
    json flat = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(detail::complex_json(m(r, c)));
    }
    states.push_back(std::move(flat));
  }
  j["dim"] = t.states.empty() ? 0 : t.states.front().dim();
  j["states"] = std::move(states);
  return j;
}

}  // namespace fmosim
