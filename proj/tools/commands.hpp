#pragma once

// Subcommands of the fmosim executable. Each returns the process exit code:
// 0 success, 2 usage or configuration error, 3 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fmosim/fmosim.hpp"

namespace fmosim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerify = 3;

/// Resource parameters used when no configuration is given.
inline NmrParameters default_nmr() { return NmrParameters::uniform(7, 1.0, 1.0); }

inline NmrParameters nmr_from(const std::optional<std::string>& config_path) {
  if (!config_path) return default_nmr();
  return load_config(*config_path).nmr_or_default();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

struct CompileOptions {
  std::string target;
  double tau = 1.0;
  std::optional<std::string> config;
  /// Schedule JSON destination; stdout when empty.
  std::optional<std::string> out;
  std::optional<std::string> circuit;
  /// "gates" or "blocks".
  std::string lowering = "gates";
};

inline int cmd_compile(const CompileOptions& o, std::ostream& out, std::ostream& err) {
  CompiledSchedule sched;
  NmrParameters nmr;
  Lowering lowering = Lowering::gates;
  try {
    if (o.lowering == "blocks") {
      lowering = Lowering::blocks;
    } else if (o.lowering != "gates") {
      throw std::invalid_argument("--lowering must be gates or blocks");
    }
    if (!std::isfinite(o.tau)) throw std::invalid_argument("--tau must be finite");
    nmr = nmr_from(o.config);
    sched = compile_target(parse_target(o.target), o.tau, nmr);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerify;
  }

  const auto report = verify_schedule(sched, target_unitary(sched.target, sched.n_qubits), nmr);
  const std::string js = schedule_to_json(sched).dump(2) + "\n";
  try {
    if (o.out) {
      write_text(*o.out, js);
    } else {
      out << js;
    }
    if (o.circuit) write_text(*o.circuit, export_text(to_program(sched, nmr, lowering)));
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "norm_error " << format_real(report.norm_error) << " fidelity " << format_real(report.fidelity)
      << (report.pass ? " pass" : " FAIL") << '\n';
  return report.pass ? kExitOk : kExitVerify;
}

struct VerifyOptions {
  std::string schedule;
  std::optional<std::string> config;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  CompiledSchedule sched;
  NmrParameters nmr;
  try {
    sched = schedule_from_json(read_json_file(o.schedule));
    nmr = nmr_from(o.config);
    if (nmr.n_qubits != sched.n_qubits) throw std::invalid_argument("schedule and parameters disagree on register size");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const Target& t = sched.target;
  const double configured = t.kind == TargetKind::z ? nmr.omega[static_cast<std::size_t>(t.first - 1)]
                                                     : nmr.J[static_cast<std::size_t>(std::min(t.first, t.second) - 1)];
  VerifyReport report;
  try {
    report = verify_schedule(sched, target_unitary(t, sched.n_qubits), nmr);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << "target " << t.label() << " tau " << format_real(t.tau) << '\n';
  out << "norm_error " << format_real(report.norm_error) << '\n';
  out << "fidelity " << format_real(report.fidelity) << '\n';
  if (configured != t.coefficient) {
    out << "target mismatch: schedule was compiled for coefficient " << format_real(t.coefficient)
        << " but the parameters give " << format_real(configured) << '\n';
  }
  out << (report.pass ? "pass" : "fail") << '\n';
  return report.pass ? kExitOk : kExitVerify;
}

struct EvolveOptions {
  std::string config;
  std::optional<std::string> method;
  std::optional<double> dt;
  std::optional<double> t_max;
  /// CSV destination; overrides output.csv. stdout when neither is set.
  std::optional<std::string> out;
  std::optional<std::string> states;
};

inline int cmd_evolve(const EvolveOptions& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(o.config);
    if (o.method) cfg.evolution.method = *o.method;
    if (o.dt) cfg.evolution.dt = *o.dt;
    if (o.t_max) cfg.evolution.t_max = *o.t_max;
    if (o.out) cfg.output.csv = *o.out;
    if (o.states) cfg.output.states = *o.states;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto& ev = cfg.evolution;
  Trajectory primary;
  std::optional<Trajectory> reference;
  try {
    const DensityMatrix rho0 = initial_state(ev.initial_state, cfg.fmo.n_sites);
    if (ev.method == "exact") {
      primary = exact_reference(rho0, cfg.fmo, cfg.noise, ev.t_max, ev.dt);
    } else {
      primary = evolve_trotter_open(rho0, cfg.fmo, cfg.noise, ev.t_max, ev.dt, ev.lowering);
      if (ev.method == "both") reference = exact_reference(rho0, cfg.fmo, cfg.noise, ev.t_max, ev.dt);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::ostringstream csv;
    write_trajectory_csv(csv, primary, reference ? &*reference : nullptr);
    if (cfg.output.csv.empty()) {
      out << csv.str();
    } else {
      write_text(cfg.output.csv, csv.str());
    }
    if (!cfg.output.states.empty()) write_text(cfg.output.states, trajectory_states_json(primary).dump() + "\n");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

struct ChannelOptions {
  /// dissipation, dephasing-paper or dephasing-corrected
  std::string kind;
  double rate = 0.0;
  double time = 0.0;
  std::optional<std::string> out;
};

inline int cmd_channel(const ChannelOptions& o, std::ostream& out, std::ostream& err) {
  KrausChannel ch;
  try {
    if (o.kind == "dissipation") {
      ch = dissipation_kraus(o.rate, o.time);
    } else if (o.kind == "dephasing-paper") {
      ch = dephasing_kraus_paper(o.rate, o.time);
    } else if (o.kind == "dephasing-corrected") {
      ch = dephasing_kraus_corrected(o.rate, o.time);
    } else {
      throw std::invalid_argument("--kind must be dissipation, dephasing-paper or dephasing-corrected");
    }
    const std::string js = channel_report(ch).dump(2) + "\n";
    if (o.out) {
      write_text(*o.out, js);
    } else {
      out << js;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace fmosim::cli
