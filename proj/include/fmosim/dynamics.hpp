#pragma once

// Open-system evolution of the FMO register.
//
//   d rho/dt = -i[H, rho] + L_diss(rho) + L_deph(rho)
//   L_diss   = sum_j Gamma_j (-{s+_j s-_j, rho} + 2 s-_j rho s+_j),  s-_j = 2|0><1|_j
//   L_deph   = sum_j gamma_j (-{n_j, rho} + 2 n_j rho n_j),          n_j = |1><1|_j
//
// With these operators the generator matches the single-qubit channels in
// fmosim/channels.hpp exactly: dissipation_kraus(Gamma, t) and
// dephasing_kraus_corrected(gamma, t) are its per-site propagators.

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fmosim/channels.hpp"
#include "fmosim/circuit.hpp"
#include "fmosim/circuit_text.hpp"
#include "fmosim/hamiltonians.hpp"
#include "fmosim/nmr_compiler.hpp"
#include "fmosim/qcore.hpp"

namespace fmosim {

struct NoiseParameters {
  /// Dissipation rates, one per site.
  std::vector<double> Gamma;
  /// Dephasing rates, one per site.
  std::vector<double> gamma;

  static NoiseParameters none(int n) {
    return {std::vector<double>(static_cast<std::size_t>(n), 0.0), std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  }
  static NoiseParameters uniform(int n, double dissipation, double dephasing) {
    return {std::vector<double>(static_cast<std::size_t>(n), dissipation),
            std::vector<double>(static_cast<std::size_t>(n), dephasing)};
  }

  void validate(int n_sites) const {
    if (static_cast<int>(Gamma.size()) != n_sites) throw std::invalid_argument("Gamma length != n_sites");
    if (static_cast<int>(gamma.size()) != n_sites) throw std::invalid_argument("gamma length != n_sites");
    for (double r : Gamma) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("Gamma rates must be finite and >= 0");
    }
    for (double r : gamma) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("gamma rates must be finite and >= 0");
    }
  }

  double max_rate() const {
    double m = 0.0;
    for (double r : Gamma) m = std::max(m, 8.0 * r);
    for (double r : gamma) m = std::max(m, r);
    return m;
  }
};

enum class Method { exact, trotter };

inline std::string to_string(Method m) { return m == Method::exact ? "exact" : "trotter"; }

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  Method method = Method::exact;
  /// Step size of the integrator (exact) or of the Trotter splitting.
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
};

/// The Lindblad generator with a sparse Hamiltonian and bitwise dissipators.
class LindbladGenerator {
 public:
  LindbladGenerator(const FmoParameters& fmo, const NoiseParameters& noise)
      : n_(fmo.n_sites), h_(build_fmo_h_sparse(fmo)), h_adj_(h_.adjoint()), noise_(noise) {
    noise.validate(fmo.n_sites);
  }

  int n_sites() const { return n_; }

  Matrix operator()(const Matrix& rho) const {
    const Eigen::Index d = Eigen::Index{1} << n_;
    if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("lindblad_rhs: state dimension mismatch");
    // rho H = (H^dagger rho^dagger)^dagger keeps both products sparse x dense.
    Matrix out = Complex{0.0, -1.0} * (h_ * rho);
    out += Complex{0.0, 1.0} * Matrix(h_adj_ * rho.adjoint()).adjoint();

    for (int j = 1; j <= n_; ++j) {
      const double g_diss = 4.0 * noise_.Gamma[static_cast<std::size_t>(j - 1)];
      const double g_deph = noise_.gamma[static_cast<std::size_t>(j - 1)];
      if (g_diss == 0.0 && g_deph == 0.0) continue;
      const auto m = static_cast<Eigen::Index>(qubit_mask(j, n_));
      for (Eigen::Index c = 0; c < d; ++c) {
        const int nc = (c & m) ? 1 : 0;
        for (Eigen::Index r = 0; r < d; ++r) {
          const int nr = (r & m) ? 1 : 0;
          const double occ = nr + nc;
          Complex v = -(g_diss + g_deph) * occ * rho(r, c);
          if (nr && nc) v += 2.0 * g_deph * rho(r, c);
          if (!nr && !nc) v += 2.0 * g_diss * rho(r | m, c | m);
          out(r, c) += v;
        }
      }
    }
    return out;
  }

 private:
  int n_;
  Eigen::SparseMatrix<Complex> h_;
  Eigen::SparseMatrix<Complex> h_adj_;
  NoiseParameters noise_;
};

inline Matrix lindblad_rhs(const DensityMatrix& rho, const FmoParameters& fmo, const NoiseParameters& noise) {
  return LindbladGenerator(fmo, noise)(rho.matrix());
}

namespace detail {

inline void check_evolution_args(const DensityMatrix& rho0, const FmoParameters& fmo, double t_max, double dt) {
  fmo.validate();
  if (rho0.n_qubits() != fmo.n_sites) throw std::invalid_argument("initial state dimension != 2^n_sites");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be >= 0");
}

/// Number of steps of size dt covering t_max, the last one possibly short.
inline long step_count(double t_max, double dt) {
  const double ratio = t_max / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<long>(rounded);
  return static_cast<long>(std::ceil(ratio));
}

inline double step_time(long k, long steps, double t_max, double dt) {
  return k == steps ? t_max : static_cast<double>(k) * dt;
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta with fixed step dt. Records the state
/// every `sample_stride` steps and always at t_max.
inline Trajectory integrate_exact(const DensityMatrix& rho0, const FmoParameters& fmo, const NoiseParameters& noise,
                                  double t_max, double dt, int sample_stride = 1) {
  detail::check_evolution_args(rho0, fmo, t_max, dt);
  if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
  const LindbladGenerator L(fmo, noise);

  Trajectory traj;
  traj.method = Method::exact;
  traj.dt = dt;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  const long steps = detail::step_count(t_max, dt);
  Matrix rho = rho0.matrix();
  for (long k = 1; k <= steps; ++k) {
    const double h = detail::step_time(k, steps, t_max, dt) - detail::step_time(k - 1, steps, t_max, dt);
    const Matrix k1 = L(rho);
    const Matrix k2 = L(rho + (0.5 * h) * k1);
    const Matrix k3 = L(rho + (0.5 * h) * k2);
    const Matrix k4 = L(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k % sample_stride == 0 || k == steps) {
      traj.times.push_back(detail::step_time(k, steps, t_max, dt));
      traj.states.emplace_back(rho);
    }
  }
  return traj;
}

/// Integrator substeps per interval of length `interval` so that the RK4
/// step stays below 0.01 / (fastest rate in the generator).
inline int exact_substeps(double interval, const FmoParameters& fmo, const NoiseParameters& noise) {
  double scale = 1.0;
  double h_bound = 0.0;
  for (double e : fmo.epsilon) h_bound += std::abs(e);
  for (auto [j, l] : fmo.coupled_pairs()) h_bound += 4.0 * std::abs(fmo.nu(j - 1, l - 1));
  scale = std::max({scale, h_bound, noise.max_rate()});
  return std::max(1, static_cast<int>(std::ceil(interval * scale / 0.01)));
}

enum class StepLowering {
  /// Exact RZ rotations and 4x4 XY blocks.
  dense_blocks,
  /// Pulse schedules from the NMR compiler, lowered to gates.
  compiled_pulses,
};

inline std::string to_string(StepLowering l) {
  return l == StepLowering::dense_blocks ? "dense-blocks" : "compiled-pulses";
}

inline StepLowering parse_step_lowering(const std::string& s) {
  if (s == "dense-blocks") return StepLowering::dense_blocks;
  if (s == "compiled-pulses") return StepLowering::compiled_pulses;
  throw std::invalid_argument("unknown lowering '" + s + "' (expected dense-blocks or compiled-pulses)");
}

/// The unitary factor of one Trotter step, e^{-i H_0 dt} followed by one XY
/// factor per coupled pair, built as a circuit.
inline Program trotter_step_circuit(const FmoParameters& fmo, double dt, StepLowering lowering) {
  if (lowering == StepLowering::dense_blocks) return trotter_step_program(fmo, dt);
  if (!fmo.nearest_neighbour_only()) {
    throw std::invalid_argument("compiled-pulses lowering supports nearest-neighbour hopping only");
  }
  const NmrParameters nmr = NmrParameters::from_fmo(fmo);
  Program p(fmo.n_sites);
  for (int l = 1; l <= fmo.n_sites; ++l) {
    if (fmo.epsilon[static_cast<std::size_t>(l - 1)] == 0.0) continue;
    p.append(to_program(compile_single_z(l, dt, nmr), nmr, Lowering::gates));
  }
  for (auto [j, l] : fmo.coupled_pairs()) {
    p.append(to_program(compile_xy(j, l, dt, nmr), nmr, Lowering::gates));
  }
  return p;
}

/// First-order splitting: per step the unitary factor, then per-site
/// dissipation, then per-site dephasing, each as an exact Kraus channel.
inline Trajectory evolve_trotter_open(const DensityMatrix& rho0, const FmoParameters& fmo, const NoiseParameters& noise,
                                      double t_max, double dt, StepLowering lowering = StepLowering::dense_blocks) {
  detail::check_evolution_args(rho0, fmo, t_max, dt);
  noise.validate(fmo.n_sites);
  const int n = fmo.n_sites;
  if (lowering == StepLowering::compiled_pulses && !fmo.nearest_neighbour_only()) {
    throw std::invalid_argument("compiled-pulses lowering supports nearest-neighbour hopping only");
  }

  std::map<double, Matrix> unitaries;
  auto step_unitary = [&](double h) -> const Matrix& {
    auto it = unitaries.find(h);
    if (it == unitaries.end()) it = unitaries.emplace(h, unitary_of(trotter_step_circuit(fmo, h, lowering))).first;
    return it->second;
  };

  Trajectory traj;
  traj.method = Method::trotter;
  traj.dt = dt;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  const long steps = detail::step_count(t_max, dt);
  Matrix rho = rho0.matrix();
  for (long k = 1; k <= steps; ++k) {
    const double h = detail::step_time(k, steps, t_max, dt) - detail::step_time(k - 1, steps, t_max, dt);
    const Matrix& u = step_unitary(h);
    rho = u * rho * u.adjoint();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 1; j <= n; ++j) {
        const double rate = pass == 0 ? noise.Gamma[static_cast<std::size_t>(j - 1)] : noise.gamma[static_cast<std::size_t>(j - 1)];
        if (rate == 0.0) continue;
        const KrausChannel ch = pass == 0 ? dissipation_kraus(rate, h) : dephasing_kraus_corrected(rate, h);
        const int q[] = {j};
        const auto shifts = detail::shifts_for(q, n);
        Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto& op : ch.ops) acc += detail::conjugate(rho, Matrix(op), shifts);
        rho = std::move(acc);
      }
    }
    traj.times.push_back(detail::step_time(k, steps, t_max, dt));
    traj.states.emplace_back(rho);
  }
  return traj;
}

/// p_j = tr(rho n_j), the excited-state population of each site.
inline std::vector<double> site_populations(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  const Matrix& m = rho.matrix();
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index b = 0; b < m.rows(); ++b) {
    const double diag = m(b, b).real();
    for (int j = 1; j <= n; ++j) {
      if (static_cast<std::size_t>(b) & qubit_mask(j, n)) p[static_cast<std::size_t>(j - 1)] += diag;
    }
  }
  return p;
}

/// Population left the register: 1 - sum_j p_j.
inline double population_loss(const DensityMatrix& rho) {
  double total = 0.0;
  for (double p : site_populations(rho)) total += p;
  return 1.0 - total;
}

/// Single excitation on `site` (1-based), all other sites in |0>.
inline DensityMatrix single_excitation(int n_sites, int site) {
  check_qubit(site, n_sites);
  std::string bits(static_cast<std::size_t>(n_sites), '0');
  bits[static_cast<std::size_t>(site - 1)] = '1';
  return DensityMatrix::basis(bits);
}

/// "site:j", "ground" or "basis:<bits>".
inline DensityMatrix initial_state(const std::string& label, int n_sites) {
  if (label == "ground") return DensityMatrix::basis(std::string(static_cast<std::size_t>(n_sites), '0'));
  if (label.rfind("site:", 0) == 0) {
    std::size_t used = 0;
    int site = 0;
    try {
      site = std::stoi(label.substr(5), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad initial state '" + label + "'");
    }
    if (used != label.size() - 5) throw std::invalid_argument("bad initial state '" + label + "'");
    return single_excitation(n_sites, site);
  }
  if (label.rfind("basis:", 0) == 0) {
    const std::string bits = label.substr(6);
    if (static_cast<int>(bits.size()) != n_sites) throw std::invalid_argument("basis label length != n_sites");
    return DensityMatrix::basis(bits);
  }
  throw std::invalid_argument("bad initial state '" + label + "' (expected site:j, ground or basis:bits)");
}

struct InvariantReport {
  double max_trace_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_hermitian_error = 0.0;
};

inline InvariantReport check_invariants(const Trajectory& t) {
  InvariantReport r;
  for (const auto& s : t.states) {
    r.max_trace_error = std::max(r.max_trace_error, std::abs(s.trace() - 1.0));
    r.min_eigenvalue = std::min(r.min_eigenvalue, s.min_eigenvalue());
    r.max_hermitian_error = std::max(r.max_hermitian_error, max_abs(s.matrix() - s.matrix().adjoint()));
  }
  return r;
}

/// Exact trajectory sampled on the time grid of a Trotter run: the RK4 step
/// subdivides dt by exact_substeps.
inline Trajectory exact_reference(const DensityMatrix& rho0, const FmoParameters& fmo, const NoiseParameters& noise,
                                  double t_max, double dt) {
  const int sub = exact_substeps(dt, fmo, noise);
  const long steps = detail::step_count(t_max, dt);
  const bool partial = std::abs(static_cast<double>(steps) * dt - t_max) > 1e-9 * std::max(1.0, t_max);
  if (!partial) {
    Trajectory t = integrate_exact(rho0, fmo, noise, t_max, dt / sub, sub);
    t.dt = dt / sub;
    return t;
  }
  // A short final interval: integrate the full steps, then the remainder.
  const double t_full = static_cast<double>(steps - 1) * dt;
  Trajectory t = steps > 1 ? integrate_exact(rho0, fmo, noise, t_full, dt / sub, sub)
                           : Trajectory{{0.0}, {rho0}, Method::exact, dt / sub};
  const double rest = t_max - t_full;
  const int sub_rest = exact_substeps(rest, fmo, noise);
  Trajectory tail = integrate_exact(t.states.back(), fmo, noise, rest, rest / sub_rest, sub_rest);
  t.times.push_back(t_max);
  t.states.push_back(tail.states.back());
  return t;
}

/// CSV with header t,p1..pn,loss,trace,purity. With a reference trajectory on
/// the same time grid a trace_distance column is appended.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Trajectory* reference = nullptr) {
  if (traj.states.empty()) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  if (reference && reference->size() != traj.size()) {
    throw std::invalid_argument("write_trajectory_csv: reference has a different time grid");
  }
  const int n = traj.states.front().n_qubits();
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",p" << j;
  out << ",loss,trace,purity";
  if (reference) out << ",trace_distance";
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    out << format_real(traj.times[k]);
    double total = 0.0;
    for (double p : site_populations(s)) {
      out << ',' << format_real(p);
      total += p;
    }
    out << ',' << format_real(1.0 - total) << ',' << format_real(s.trace().real()) << ',' << format_real(s.purity());
    if (reference) {
      if (std::abs(reference->times[k] - traj.times[k]) > 1e-9) {
        throw std::invalid_argument("write_trajectory_csv: reference time grid differs");
      }
      out << ',' << format_real(trace_distance(s, reference->states[k]));
    }
    out << '\n';
  }
}

}  // namespace fmosim
