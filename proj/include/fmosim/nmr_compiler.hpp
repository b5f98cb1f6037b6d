#pragma once

// Re/decoupling compiler for the always-on longitudinal Ising Hamiltonian.
//
// A sign matrix S (rows = qubits, columns = equal-length intervals) describes
// a pulse sequence: during interval k qubit j sits in a frame flipped by X
// whenever S[j][k] = -1. Conjugating the diagonal H_NMR by X_j flips the sign
// of every term containing Z_j, so over the whole sequence the evolution is
// exp(-i H_eff) with
//
//   coefficient of Z_l          = (omega_l / 2) * dt * sum_k S[l][k]
//   coefficient of Z_l Z_{l+1}  = J_l * dt * sum_k S[l][k] S[l+1][k]
//
// Rows of a Sylvester Hadamard matrix are mutually orthogonal and, apart from
// the first, balanced, which is what cancels the unwanted terms.

#include <algorithm>
#include <bit>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fmosim/circuit.hpp"
#include "fmosim/hamiltonians.hpp"
#include "fmosim/qcore.hpp"

namespace fmosim {

class SignMatrix {
 public:
  SignMatrix() = default;
  SignMatrix(int rows, int cols, std::vector<int> entries) : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("sign matrix must be non-empty");
    if (static_cast<int>(e_.size()) != rows * cols) throw std::invalid_argument("sign matrix entry count mismatch");
    for (int v : e_) {
      if (v != 1 && v != -1) throw std::invalid_argument("sign matrix entries must be +1 or -1");
    }
  }
  static SignMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw std::invalid_argument("sign matrix must be non-empty");
    std::vector<int> e;
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw std::invalid_argument("ragged sign matrix");
      e.insert(e.end(), r.begin(), r.end());
    }
    return SignMatrix(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), std::move(e));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// 0-based row (qubit label - 1) and column.
  int operator()(int r, int c) const { return e_[static_cast<std::size_t>(r * cols_ + c)]; }

  std::vector<int> row(int r) const {
    return {e_.begin() + r * cols_, e_.begin() + (r + 1) * cols_};
  }
  int row_sum(int r) const {
    int s = 0;
    for (int c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
  }
  int dot(int r1, int r2) const {
    int s = 0;
    for (int c = 0; c < cols_; ++c) s += (*this)(r1, c) * (*this)(r2, c);
    return s;
  }

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> e_;
};

inline std::string to_string(const SignMatrix& s) {
  std::ostringstream out;
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) out << (s(r, c) > 0 ? '+' : '-');
    out << '\n';
  }
  return out.str();
}

/// Sylvester Hadamard matrix of order 2^k: H[i][j] = (-1)^popcount(i & j).
inline SignMatrix hadamard_matrix(int k) {
  if (k < 0) throw std::invalid_argument("hadamard_matrix: negative order");
  if (k > 6) throw std::invalid_argument("hadamard_matrix: orders above 64 are not supported");
  const int m = 1 << k;
  std::vector<int> e(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) e[static_cast<std::size_t>(i * m + j)] = (std::popcount(unsigned(i & j)) % 2) ? -1 : 1;
  }
  return SignMatrix(m, m, std::move(e));
}

namespace detail {
inline int hadamard_order_for(int n) { return std::countr_zero(std::bit_ceil(static_cast<unsigned>(n))); }

inline SignMatrix assemble_rows(const SignMatrix& h, const std::vector<int>& row_of_qubit) {
  std::vector<std::vector<int>> rows;
  for (int r : row_of_qubit) rows.push_back(h.row(r));
  return SignMatrix::from_rows(rows);
}
}  // namespace detail

/// Keeps only `target`'s single-qubit term: the target takes the all-plus
/// first row of H(2^k), the other qubits take rows 2, 3, ... in order.
inline SignMatrix decoupling_sign_matrix(int n, int target) {
  if (n < 1 || n > 8) throw std::invalid_argument("decoupling_sign_matrix: supports 1..8 qubits");
  check_qubit(target, n);
  const SignMatrix h = hadamard_matrix(detail::hadamard_order_for(n));
  std::vector<int> rows;
  int next = 1;
  for (int q = 1; q <= n; ++q) rows.push_back(q == target ? 0 : next++);
  return detail::assemble_rows(h, rows);
}

/// Keeps only the Z_i Z_j coupling: both qubits take the second row of the
/// normalized H(2^k); the remaining qubits take rows 3, 4, ... in ascending
/// qubit order.
inline SignMatrix recoupling_sign_matrix(int n, int i, int j) {
  if (n < 2 || n > 8) throw std::invalid_argument("recoupling_sign_matrix: supports 2..8 qubits");
  check_qubit(i, n);
  check_qubit(j, n);
  if (i >= j) throw std::invalid_argument("recoupling_sign_matrix: need i < j");
  const SignMatrix h = hadamard_matrix(detail::hadamard_order_for(n));
  std::vector<int> rows;
  int next = 2;
  for (int q = 1; q <= n; ++q) rows.push_back((q == i || q == j) ? 1 : next++);
  return detail::assemble_rows(h, rows);
}

/// Four-interval decoupling sequence [U T_l U T'_l]^2 with T_l flipping every
/// qubit except l and T'_l flipping the qubits j != l with j = l (mod 2).
/// Rows: l -> ++++, same parity as l -> +-+-, other parity -> +--+.
inline SignMatrix single_z_sign_matrix(int n, int target) {
  if (n < 1) throw std::invalid_argument("single_z_sign_matrix: empty register");
  check_qubit(target, n);
  std::vector<std::vector<int>> rows;
  for (int q = 1; q <= n; ++q) {
    if (q == target) {
      rows.push_back({1, 1, 1, 1});
    } else if ((q - target) % 2 == 0) {
      rows.push_back({1, -1, 1, -1});
    } else {
      rows.push_back({1, -1, -1, 1});
    }
  }
  return SignMatrix::from_rows(rows);
}

/// Empty when S cancels every term of a nearest-neighbour Ising chain except
/// Z_target (with the target row all +1).
inline std::vector<std::string> decoupling_violations(const SignMatrix& s, int target) {
  std::vector<std::string> out;
  if (target < 1 || target > s.rows()) return {"target outside matrix"};
  for (int c = 0; c < s.cols(); ++c) {
    if (s(target - 1, c) != 1) {
      out.push_back("target row is not all +1");
      break;
    }
  }
  for (int r = 0; r < s.rows(); ++r) {
    if (r != target - 1 && s.row_sum(r) != 0) out.push_back("row " + std::to_string(r + 1) + " unbalanced");
  }
  for (int r = 0; r + 1 < s.rows(); ++r) {
    if (s.dot(r, r + 1) != 0) {
      out.push_back("rows " + std::to_string(r + 1) + "," + std::to_string(r + 2) + " not orthogonal");
    }
  }
  return out;
}

/// Empty when S keeps exactly the Z_i Z_j coupling: rows i and j equal,
/// every row balanced, every other neighbouring pair orthogonal.
inline std::vector<std::string> recoupling_violations(const SignMatrix& s, int i, int j) {
  std::vector<std::string> out;
  if (i < 1 || j > s.rows() || i >= j) return {"pair outside matrix"};
  if (s.row(i - 1) != s.row(j - 1)) out.push_back("paired rows differ");
  for (int r = 0; r < s.rows(); ++r) {
    if (s.row_sum(r) != 0) out.push_back("row " + std::to_string(r + 1) + " unbalanced");
  }
  for (int r = 0; r + 1 < s.rows(); ++r) {
    if (r == i - 1 && r + 1 == j - 1) continue;
    if (s.dot(r, r + 1) != 0) {
      out.push_back("rows " + std::to_string(r + 1) + "," + std::to_string(r + 2) + " not orthogonal");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

/// Basis the pulse-compiled Z-type evolution is rotated into.
enum class Frame { z, x, y };

inline std::string to_string(Frame f) {
  switch (f) {
    case Frame::z: return "z";
    case Frame::x: return "x";
    case Frame::y: return "y";
  }
  return "z";
}

/// Free-evolution intervals of H_NMR separated by layers of X pulses.
/// pulse_layers[0] precedes the first interval, pulse_layers.back() follows
/// the last one.
struct PulseSchedule {
  int n_qubits = 1;
  std::vector<double> durations;
  std::vector<std::vector<int>> pulse_layers;
  Frame frame = Frame::z;
  /// Qubits receiving the basis change when frame != z.
  std::vector<int> frame_qubits;

  double total_time() const {
    double t = 0.0;
    for (double d : durations) t += d;
    return t;
  }
  std::size_t pulse_count() const {
    std::size_t c = 0;
    for (const auto& l : pulse_layers) c += l.size();
    return c;
  }

  friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

/// Literal sequence: every interval wrapped as X_P U X_P, adjacent pulse
/// layers concatenated without cancellation.
inline PulseSchedule raw_schedule(const SignMatrix& s, double tau) {
  PulseSchedule out;
  out.n_qubits = s.rows();
  const double dt = tau / s.cols();
  out.durations.assign(static_cast<std::size_t>(s.cols()), dt);
  out.pulse_layers.assign(static_cast<std::size_t>(s.cols()) + 1, {});
  for (int c = 0; c < s.cols(); ++c) {
    for (int r = 0; r < s.rows(); ++r) {
      if (s(r, c) < 0) {
        out.pulse_layers[static_cast<std::size_t>(c)].push_back(r + 1);
        out.pulse_layers[static_cast<std::size_t>(c) + 1].push_back(r + 1);
      }
    }
  }
  for (auto& l : out.pulse_layers) std::sort(l.begin(), l.end());
  return out;
}

/// Cancels paired X pulses within each layer and merges intervals that are no
/// longer separated by any pulse.
inline PulseSchedule compress(const PulseSchedule& s) {
  PulseSchedule out = s;
  out.durations.clear();
  out.pulse_layers.clear();
  auto cancel = [](const std::vector<int>& layer) {
    std::map<int, int> count;
    for (int q : layer) ++count[q];
    std::vector<int> kept;
    for (auto [q, c] : count) {
      if (c % 2) kept.push_back(q);
    }
    return kept;
  };
  out.pulse_layers.push_back(cancel(s.pulse_layers.front()));
  for (std::size_t k = 0; k < s.durations.size(); ++k) {
    auto next = cancel(s.pulse_layers[k + 1]);
    if (!out.durations.empty() && out.pulse_layers.back().empty() && out.pulse_layers.size() > 1) {
      // previous interval ended on an empty layer: extend it
      out.pulse_layers.pop_back();
      out.durations.back() += s.durations[k];
    } else {
      out.durations.push_back(s.durations[k]);
    }
    out.pulse_layers.push_back(std::move(next));
  }
  return out;
}

/// Pulse layers from the column sign changes, with both boundaries in the
/// identity frame, then compressed.
inline PulseSchedule schedule_from_sign_matrix(const SignMatrix& s, double tau) {
  return compress(raw_schedule(s, tau));
}

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

enum class TargetKind { z, zz, xy };

/// Intended evolution: exp(-i tau/2 c Z_l), exp(-i tau c Z_l Z_m) or
/// exp(-i tau c (X_l X_m + Y_l Y_m)), with c the coefficient (omega_l or J_l)
/// recorded at compile time.
struct Target {
  TargetKind kind = TargetKind::z;
  int first = 1;
  int second = 0;
  double tau = 0.0;
  double coefficient = 0.0;

  std::string label() const {
    switch (kind) {
      case TargetKind::z: return "z:" + std::to_string(first);
      case TargetKind::zz: return "zz:" + std::to_string(first) + "," + std::to_string(second);
      case TargetKind::xy: return "xy:" + std::to_string(first) + "," + std::to_string(second);
    }
    return "?";
  }

  friend bool operator==(const Target&, const Target&) = default;
};

/// Parses "z:<l>", "zz:<l>,<m>" or "xy:<l>,<m>"; tau and coefficient are left 0.
inline Target parse_target(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("target must look like z:1, zz:3,4 or xy:3,4");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad qubit index in target '" + spec + "'");
    }
    if (used != s.size()) throw std::invalid_argument("bad qubit index in target '" + spec + "'");
    return v;
  };
  Target t;
  if (kind == "z") {
    t.kind = TargetKind::z;
    t.first = to_int(args);
    return t;
  }
  if (kind != "zz" && kind != "xy") throw std::invalid_argument("unknown target kind '" + kind + "'");
  const auto comma = args.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("two-qubit target needs 'a,b'");
  t.kind = kind == "zz" ? TargetKind::zz : TargetKind::xy;
  t.first = to_int(args.substr(0, comma));
  t.second = to_int(args.substr(comma + 1));
  return t;
}

inline Matrix target_hamiltonian(const Target& t, int n) {
  switch (t.kind) {
    case TargetKind::z: return 0.5 * t.coefficient * pauli_embed(Pauli::Z, t.first, n);
    case TargetKind::zz:
      return t.coefficient * pauli_embed(Pauli::Z, t.first, n) * pauli_embed(Pauli::Z, t.second, n);
    case TargetKind::xy:
      return t.coefficient * (pauli_embed(Pauli::X, t.first, n) * pauli_embed(Pauli::X, t.second, n) +
                              pauli_embed(Pauli::Y, t.first, n) * pauli_embed(Pauli::Y, t.second, n));
  }
  return {};
}

inline Matrix target_unitary(const Target& t, int n) {
  return matexp_hermitian(target_hamiltonian(t, n), Complex{0.0, -t.tau});
}

struct CompiledSchedule {
  int n_qubits = 1;
  Target target;
  /// Applied in order; each segment is one pulse schedule in its frame.
  std::vector<PulseSchedule> segments;

  friend bool operator==(const CompiledSchedule&, const CompiledSchedule&) = default;
};

// ---------------------------------------------------------------------------
// Lowering to circuits
// ---------------------------------------------------------------------------

enum class Lowering {
  /// RZ singles and CNOT-RZ-CNOT per bond for every interval.
  gates,
  /// One opaque UNITARY block exp(-i dt H_NMR) per interval.
  blocks,
};

inline Program segment_program(const PulseSchedule& s, const NmrParameters& params, Lowering mode) {
  params.validate();
  if (params.n_qubits != s.n_qubits) throw std::invalid_argument("schedule and parameters disagree on register size");
  if (s.pulse_layers.size() != s.durations.size() + 1) throw std::invalid_argument("schedule needs intervals + 1 pulse layers");
  const int n = s.n_qubits;
  Program p(n);

  auto basis_in = [&] {
    for (int q : s.frame_qubits) {
      if (s.frame == Frame::x) p.add(Gate::h(q));
      if (s.frame == Frame::y) p.add(Gate::rx(-std::numbers::pi / 2, q));
    }
  };
  auto basis_out = [&] {
    for (int q : s.frame_qubits) {
      if (s.frame == Frame::x) p.add(Gate::h(q));
      if (s.frame == Frame::y) p.add(Gate::rx(std::numbers::pi / 2, q));
    }
  };
  auto pulses = [&](const std::vector<int>& layer) {
    for (int q : layer) p.add(Gate::x(q));
  };

  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  const Matrix h_nmr = mode == Lowering::blocks ? build_nmr_h(params) : Matrix{};

  basis_in();
  pulses(s.pulse_layers.front());
  for (std::size_t k = 0; k < s.durations.size(); ++k) {
    const double dt = s.durations[k];
    if (mode == Lowering::blocks) {
      p.add(Gate::unitary(matexp_hermitian(h_nmr, Complex{0.0, -dt}), all));
    } else {
      for (int l = 1; l <= n; ++l) {
        const double w = params.omega[static_cast<std::size_t>(l - 1)];
        if (w != 0.0) p.add(Gate::rz(w * dt, l));
      }
      for (int l = 1; l < n; ++l) {
        const double j = params.J[static_cast<std::size_t>(l - 1)];
        if (j == 0.0) continue;
        p.add(Gate::cnot(l, l + 1));
        p.add(Gate::rz(2.0 * j * dt, l + 1));
        p.add(Gate::cnot(l, l + 1));
      }
    }
    pulses(s.pulse_layers[k + 1]);
  }
  basis_out();
  return p;
}

inline Program to_program(const CompiledSchedule& c, const NmrParameters& params, Lowering mode = Lowering::gates) {
  Program p(c.n_qubits);
  for (const auto& seg : c.segments) p.append(segment_program(seg, params, mode));
  return p;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Multiplies `u` by the phase that makes its entry at the position of the
/// largest-magnitude entry of `reference` share that entry's phase.
inline Matrix phase_align(const Matrix& u, const Matrix& reference) {
  Eigen::Index r = 0, c = 0;
  reference.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(u(r, c)) == 0.0) return u;
  const Complex rel = reference(r, c) / u(r, c);
  return u * (rel / std::abs(rel));
}

struct VerifyReport {
  double norm_error = 0.0;
  double fidelity = 0.0;
  bool pass = false;
};

inline VerifyReport compare_unitaries(const Matrix& compiled, const Matrix& target, double tolerance = tol::schedule) {
  if (compiled.rows() != target.rows()) throw std::invalid_argument("verify: dimension mismatch");
  VerifyReport r;
  const Matrix aligned = phase_align(compiled, target);
  r.norm_error = operator_norm(aligned - target);
  r.fidelity = std::abs((target.adjoint() * compiled).trace()) / static_cast<double>(target.rows());
  r.pass = r.norm_error <= tolerance;
  return r;
}

inline VerifyReport verify_schedule(const CompiledSchedule& s, const Matrix& target, const NmrParameters& params,
                                    Lowering mode = Lowering::blocks) {
  if (s.n_qubits > 10) throw std::invalid_argument("verify_schedule: register above 10 qubits");
  return compare_unitaries(unitary_of(to_program(s, params, mode)), target);
}

inline VerifyReport verify_schedule(const PulseSchedule& s, const Matrix& target, const NmrParameters& params,
                                    Lowering mode = Lowering::blocks) {
  if (s.n_qubits > 10) throw std::invalid_argument("verify_schedule: register above 10 qubits");
  return compare_unitaries(unitary_of(segment_program(s, params, mode)), target);
}

// ---------------------------------------------------------------------------
// Effective Hamiltonian predictor
// ---------------------------------------------------------------------------

struct EffectiveCoefficients {
  /// Phase coefficient of Z_l, l = 1..n.
  std::vector<double> z;
  /// Phase coefficient of Z_l Z_{l+1}, l = 1..n-1.
  std::vector<double> zz;
};

inline EffectiveCoefficients effective_coefficients(const SignMatrix& s, double interval_duration,
                                                    const NmrParameters& params) {
  params.validate();
  if (s.rows() != params.n_qubits) throw std::invalid_argument("sign matrix rows != register size");
  EffectiveCoefficients out;
  for (int l = 0; l < s.rows(); ++l) {
    out.z.push_back(0.5 * params.omega[static_cast<std::size_t>(l)] * interval_duration * s.row_sum(l));
  }
  for (int l = 0; l + 1 < s.rows(); ++l) {
    out.zz.push_back(params.J[static_cast<std::size_t>(l)] * interval_duration * s.dot(l, l + 1));
  }
  return out;
}

/// exp(-i (sum_l z_l Z_l + sum_l zz_l Z_l Z_{l+1})), built entrywise.
inline Matrix effective_unitary(const EffectiveCoefficients& c) {
  const int n = static_cast<int>(c.z.size());
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    auto z = [&](int q) { return (static_cast<std::size_t>(b) & qubit_mask(q, n)) ? -1.0 : 1.0; };
    double phase = 0.0;
    for (int l = 1; l <= n; ++l) phase += c.z[static_cast<std::size_t>(l - 1)] * z(l);
    for (int l = 1; l < n; ++l) phase += c.zz[static_cast<std::size_t>(l - 1)] * z(l) * z(l + 1);
    u(b, b) = std::exp(Complex{0.0, -phase});
  }
  return u;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace detail {
inline void guard(const CompiledSchedule& c, const NmrParameters& params) {
  if (c.n_qubits > 10) return;
  const auto report = verify_schedule(c, target_unitary(c.target, c.n_qubits), params, Lowering::blocks);
  if (!report.pass) {
    throw std::logic_error("compiler produced a schedule for " + c.target.label() +
                           " that misses its target (error " + std::to_string(report.norm_error) + ")");
  }
}

inline void check_bond(int l, int m, int n) {
  check_qubit(l, n);
  check_qubit(m, n);
  if (m != l + 1) {
    throw std::invalid_argument("only nearest-neighbour pairs (l, l+1) can be recoupled; got (" +
                                std::to_string(l) + ", " + std::to_string(m) + ")");
  }
}
}  // namespace detail

/// u^z_l(tau) = exp(-i tau/2 omega_l Z_l) from four H_NMR intervals.
inline CompiledSchedule compile_single_z(int l, double tau, const NmrParameters& params) {
  params.validate();
  const int n = params.n_qubits;
  check_qubit(l, n);
  CompiledSchedule c;
  c.n_qubits = n;
  c.target = {TargetKind::z, l, 0, tau, params.omega[static_cast<std::size_t>(l - 1)]};
  c.segments.push_back(schedule_from_sign_matrix(single_z_sign_matrix(n, l), tau));
  detail::guard(c, params);
  return c;
}

inline PulseSchedule zz_segment(int l, int m, double tau, int n) {
  return schedule_from_sign_matrix(recoupling_sign_matrix(n, l, m), tau);
}

/// U^zz_{l,l+1}(tau) = exp(-i tau J_l Z_l Z_{l+1}).
inline CompiledSchedule compile_zz(int l, int m, double tau, const NmrParameters& params) {
  params.validate();
  const int n = params.n_qubits;
  detail::check_bond(l, m, n);
  CompiledSchedule c;
  c.n_qubits = n;
  c.target = {TargetKind::zz, l, m, tau, params.J[static_cast<std::size_t>(l - 1)]};
  c.segments.push_back(zz_segment(l, m, tau, n));
  detail::guard(c, params);
  return c;
}

/// U^{xx+yy}_{l,l+1}(tau) = exp(-i tau J_l (X X + Y Y)) as a ZZ segment in
/// the X frame followed by one in the Y frame (XX and YY commute).
inline CompiledSchedule compile_xy(int l, int m, double tau, const NmrParameters& params) {
  params.validate();
  const int n = params.n_qubits;
  detail::check_bond(l, m, n);
  CompiledSchedule c;
  c.n_qubits = n;
  c.target = {TargetKind::xy, l, m, tau, params.J[static_cast<std::size_t>(l - 1)]};
  PulseSchedule xs = zz_segment(l, m, tau, n);
  xs.frame = Frame::x;
  xs.frame_qubits = {l, m};
  PulseSchedule ys = zz_segment(l, m, tau, n);
  ys.frame = Frame::y;
  ys.frame_qubits = {l, m};
  c.segments = {std::move(xs), std::move(ys)};
  detail::guard(c, params);
  return c;
}

inline CompiledSchedule compile_target(const Target& t, double tau, const NmrParameters& params) {
  switch (t.kind) {
    case TargetKind::z: return compile_single_z(t.first, tau, params);
    case TargetKind::zz: return compile_zz(t.first, t.second, tau, params);
    case TargetKind::xy: return compile_xy(t.first, t.second, tau, params);
  }
  throw std::invalid_argument("unknown target kind");
}

}  // namespace fmosim
