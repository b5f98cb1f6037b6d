#pragma once

// Gate-level circuit IR, statevector and density-matrix simulators.

#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fmosim/kraus.hpp"
#include "fmosim/qcore.hpp"

namespace fmosim {

enum class GateKind { X, H, RX, RY, RZ, CZ, CNOT, CPHASE, UNITARY };

inline std::string gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CPHASE: return "CPHASE";
    case GateKind::UNITARY: return "UNITARY";
  }
  return "?";
}

inline bool gate_has_angle(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::CPHASE;
}

struct Gate {
  GateKind kind = GateKind::X;
  /// 1-based labels; for CNOT the control comes first.
  std::vector<int> qubits;
  double angle = 0.0;
  /// Only used by UNITARY; qubits[0] is the most significant local bit.
  Matrix matrix;

  static Gate x(int q) { return {GateKind::X, {q}, 0.0, {}}; }
  static Gate h(int q) { return {GateKind::H, {q}, 0.0, {}}; }
  static Gate rx(double theta, int q) { return {GateKind::RX, {q}, theta, {}}; }
  static Gate ry(double theta, int q) { return {GateKind::RY, {q}, theta, {}}; }
  static Gate rz(double theta, int q) { return {GateKind::RZ, {q}, theta, {}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0, {}}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0, {}}; }
  static Gate cphase(double theta, int a, int b) { return {GateKind::CPHASE, {a, b}, theta, {}}; }
  static Gate unitary(Matrix u, std::vector<int> qubits) {
    return {GateKind::UNITARY, std::move(qubits), 0.0, std::move(u)};
  }

  std::size_t arity() const {
    switch (kind) {
      case GateKind::CZ:
      case GateKind::CNOT:
      case GateKind::CPHASE: return 2;
      case GateKind::UNITARY: return qubits.size();
      default: return 1;
    }
  }

  /// Matrix on the gate's own qubits.
  Matrix local_matrix() const {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    Matrix m;
    switch (kind) {
      case GateKind::X: m = pauli_matrix(Pauli::X); break;
      case GateKind::H:
        m = Matrix(2, 2);
        m << 1, 1, 1, -1;
        m /= std::sqrt(2.0);
        break;
      case GateKind::RX:
        m = Matrix(2, 2);
        m << c, -kI * s, -kI * s, c;
        break;
      case GateKind::RY:
        m = Matrix(2, 2);
        m << c, -s, s, c;
        break;
      case GateKind::RZ:
        m = Matrix::Zero(2, 2);
        m(0, 0) = std::exp(-kI * (angle / 2.0));
        m(1, 1) = std::exp(kI * (angle / 2.0));
        break;
      case GateKind::CZ:
        m = Matrix::Identity(4, 4);
        m(3, 3) = -1.0;
        break;
      case GateKind::CNOT:
        m = Matrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = 1.0;
        m(2, 3) = m(3, 2) = 1.0;
        break;
      case GateKind::CPHASE:
        m = Matrix::Identity(4, 4);
        m(3, 3) = std::exp(kI * angle);
        break;
      case GateKind::UNITARY: m = matrix; break;
    }
    return m;
  }

  Gate adjoint() const {
    Gate g = *this;
    if (gate_has_angle(kind)) g.angle = -angle;
    if (kind == GateKind::UNITARY) g.matrix = matrix.adjoint();
    return g;
  }

  friend bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.qubits != b.qubits || a.angle != b.angle) return false;
    if (a.kind != GateKind::UNITARY) return true;
    return a.matrix.rows() == b.matrix.rows() && a.matrix.cols() == b.matrix.cols() &&
           a.matrix == b.matrix;
  }
};

struct KrausApply {
  KrausChannel channel;
  int qubit = 1;
};

/// Dephases the qubit in the computational basis and traces it out.
struct MeasureAndDiscard {
  int qubit = 1;
};

using Instruction = std::variant<Gate, KrausApply, MeasureAndDiscard>;

class Program {
 public:
  explicit Program(int n_qubits = 1) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("program needs at least one qubit");
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::size_t size() const { return instructions_.size(); }

  Program& add(Gate g) {
    if (g.qubits.size() != g.arity() || g.qubits.empty()) {
      throw std::invalid_argument(gate_name(g.kind) + ": wrong number of qubits");
    }
    for (int q : g.qubits) check_qubit(q, n_qubits_);
    std::vector<int> sorted = g.qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument(gate_name(g.kind) + ": repeated qubit");
    }
    if (g.kind == GateKind::UNITARY) {
      const Eigen::Index d = Eigen::Index{1} << g.qubits.size();
      if (g.matrix.rows() != d || g.matrix.cols() != d) {
        throw std::invalid_argument("UNITARY: matrix dimension does not match qubit count");
      }
      if (!is_unitary(g.matrix)) throw std::invalid_argument("UNITARY: matrix is not unitary");
    }
    instructions_.emplace_back(std::move(g));
    return *this;
  }

  Program& add(KrausApply k) {
    check_qubit(k.qubit, n_qubits_);
    for (const auto& op : k.channel.ops) {
      if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("Kraus operator not 2x2");
    }
    if (k.channel.ops.empty()) throw std::invalid_argument("Kraus channel without operators");
    instructions_.emplace_back(std::move(k));
    return *this;
  }

  Program& add(MeasureAndDiscard m) {
    check_qubit(m.qubit, n_qubits_);
    instructions_.emplace_back(m);
    return *this;
  }

  Program& append(const Program& other) {
    if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("append: register size mismatch");
    for (const auto& ins : other.instructions_) instructions_.push_back(ins);
    return *this;
  }

  bool is_unitary_only() const {
    return std::all_of(instructions_.begin(), instructions_.end(),
                       [](const Instruction& i) { return std::holds_alternative<Gate>(i); });
  }

 private:
  int n_qubits_;
  std::vector<Instruction> instructions_;
};

inline bool same_instruction(const Instruction& a, const Instruction& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ga = std::get_if<Gate>(&a)) return *ga == std::get<Gate>(b);
  if (const auto* ka = std::get_if<KrausApply>(&a)) {
    const auto& kb = std::get<KrausApply>(b);
    if (ka->qubit != kb.qubit || ka->channel.ops.size() != kb.channel.ops.size()) return false;
    for (std::size_t i = 0; i < ka->channel.ops.size(); ++i) {
      if (ka->channel.ops[i] != kb.channel.ops[i]) return false;
    }
    return true;
  }
  return std::get<MeasureAndDiscard>(a).qubit == std::get<MeasureAndDiscard>(b).qubit;
}

inline bool operator==(const Program& a, const Program& b) {
  if (a.n_qubits() != b.n_qubits() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_instruction(a.instructions()[i], b.instructions()[i])) return false;
  }
  return true;
}

/// Inverse of a unitary-only program: gates reversed and adjointed.
inline Program adjoint(const Program& p) {
  if (!p.is_unitary_only()) throw std::invalid_argument("adjoint: program has non-unitary instructions");
  Program out(p.n_qubits());
  const auto& ins = p.instructions();
  for (auto it = ins.rbegin(); it != ins.rend(); ++it) out.add(std::get<Gate>(*it).adjoint());
  return out;
}

namespace detail {

/// Applies `local` (on `positions`, given as bit shifts, first = most
/// significant local bit) to every column of `cols`.
inline void apply_local(Eigen::Ref<Matrix> cols, const Matrix& local, std::span<const int> shifts) {
  const std::size_t k = shifts.size();
  const std::size_t local_dim = std::size_t{1} << k;
  const auto dim = static_cast<std::size_t>(cols.rows());
  std::size_t target_mask = 0;
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t a = 0; a < local_dim; ++a) {
    for (std::size_t i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1U) offsets[a] |= std::size_t{1} << shifts[i];
    }
  }
  for (int s : shifts) target_mask |= std::size_t{1} << s;

  std::vector<Complex> in(local_dim);
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & target_mask) continue;
      for (std::size_t a = 0; a < local_dim; ++a) in[a] = cols(static_cast<Eigen::Index>(base | offsets[a]), c);
      for (std::size_t r = 0; r < local_dim; ++r) {
        Complex acc = 0.0;
        for (std::size_t a = 0; a < local_dim; ++a) {
          acc += local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) * in[a];
        }
        cols(static_cast<Eigen::Index>(base | offsets[r]), c) = acc;
      }
    }
  }
}

/// rho -> A rho A^dagger, valid for any square `local` (unitary or Kraus).
inline Matrix conjugate(const Matrix& rho, const Matrix& local, std::span<const int> shifts) {
  Matrix a = rho;
  apply_local(a, local, shifts);
  Matrix b = a.adjoint();
  apply_local(b, local, shifts);
  return b.adjoint();
}

inline std::vector<int> shifts_for(std::span<const int> qubits, int n_qubits) {
  std::vector<int> s;
  s.reserve(qubits.size());
  for (int q : qubits) s.push_back(n_qubits - q);
  return s;
}

}  // namespace detail

/// Embeds a gate into the full 2^n x 2^n operator.
inline Matrix gate_operator(const Gate& g, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Matrix u = Matrix::Identity(d, d);
  auto shifts = detail::shifts_for(g.qubits, n_qubits);
  detail::apply_local(u, g.local_matrix(), shifts);
  return u;
}

inline Vector run_statevector(const Program& p, const Vector& init) {
  const Eigen::Index d = Eigen::Index{1} << p.n_qubits();
  if (init.size() != d) throw std::invalid_argument("run_statevector: initial state has wrong dimension");
  if (!p.is_unitary_only()) {
    throw std::invalid_argument(
        "run_statevector: program contains Kraus or measurement instructions; use run_density");
  }
  const double nrm = init.norm();
  if (nrm == 0.0) throw std::invalid_argument("run_statevector: zero initial state");
  Vector psi = init / nrm;
  for (const auto& ins : p.instructions()) {
    const auto& g = std::get<Gate>(ins);
    auto shifts = detail::shifts_for(g.qubits, p.n_qubits());
    detail::apply_local(psi, g.local_matrix(), shifts);
  }
  return psi;
}

/// Computational basis vector from a bit string, qubit 1 first.
inline Vector basis_vector(std::string_view bits) {
  if (bits.empty()) throw std::invalid_argument("empty basis label");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis label must be 0/1 characters");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  Vector v = Vector::Zero(Eigen::Index{1} << bits.size());
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

inline Vector run_statevector(const Program& p, std::string_view basis_label) {
  if (static_cast<int>(basis_label.size()) != p.n_qubits()) {
    throw std::invalid_argument("run_statevector: basis label length differs from register size");
  }
  return run_statevector(p, basis_vector(basis_label));
}

inline Matrix unitary_of(const Program& p) {
  if (!p.is_unitary_only()) throw std::invalid_argument("unitary_of: program has non-unitary instructions");
  if (p.n_qubits() > 12) throw std::invalid_argument("unitary_of: register too large for dense reconstruction");
  const Eigen::Index d = Eigen::Index{1} << p.n_qubits();
  Matrix u = Matrix::Identity(d, d);
  for (const auto& ins : p.instructions()) {
    const auto& g = std::get<Gate>(ins);
    auto shifts = detail::shifts_for(g.qubits, p.n_qubits());
    detail::apply_local(u, g.local_matrix(), shifts);
  }
  return u;
}

/// Reduced state on `keep` (1-based labels of an n-qubit register), kept
/// qubits ordered by ascending label.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const int n = rho.n_qubits();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int q : keep) check_qubit(q, n);

  const std::size_t dim = std::size_t{1} << n;
  const std::size_t k = keep.size();
  std::vector<std::size_t> kept_masks;
  std::size_t kept_mask = 0;
  for (int q : keep) {
    kept_masks.push_back(qubit_mask(q, n));
    kept_mask |= kept_masks.back();
  }
  auto compress = [&](std::size_t idx) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < k; ++i) out = (out << 1) | ((idx & kept_masks[i]) ? 1U : 0U);
    return out;
  };
  std::vector<std::size_t> expand(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a < expand.size(); ++a) {
    for (std::size_t i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1U) expand[a] |= kept_masks[i];
    }
  }

  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t traced = r & ~kept_mask;
    const std::size_t rk = compress(r);
    for (std::size_t ck = 0; ck < expand.size(); ++ck) {
      out(static_cast<Eigen::Index>(rk), static_cast<Eigen::Index>(ck)) +=
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(traced | expand[ck]));
    }
  }
  return DensityMatrix(std::move(out));
}

struct DensityRunOptions {
  /// Permit Kraus instructions whose channel failed the CPTP audit.
  bool allow_non_cptp = false;
};

/// Runs a program on a density matrix. Measured qubits are removed from the
/// register; the returned state covers the surviving qubits in label order.
inline DensityMatrix run_density(const Program& p, const DensityMatrix& rho0,
                                 DensityRunOptions opts = {}) {
  if (rho0.n_qubits() != p.n_qubits()) throw std::invalid_argument("run_density: dimension mismatch");
  std::vector<int> active(static_cast<std::size_t>(p.n_qubits()));
  std::iota(active.begin(), active.end(), 1);
  auto position = [&](int label) {
    auto it = std::find(active.begin(), active.end(), label);
    if (it == active.end()) {
      throw std::invalid_argument("run_density: qubit " + std::to_string(label) + " was already discarded");
    }
    return static_cast<int>(it - active.begin()) + 1;
  };

  Matrix rho = rho0.matrix();
  for (const auto& ins : p.instructions()) {
    const int n = static_cast<int>(active.size());
    if (const auto* g = std::get_if<Gate>(&ins)) {
      std::vector<int> pos;
      for (int q : g->qubits) pos.push_back(position(q));
      rho = detail::conjugate(rho, g->local_matrix(), detail::shifts_for(pos, n));
    } else if (const auto* k = std::get_if<KrausApply>(&ins)) {
      if (k->channel.cptp == CptpStatus::violated && !opts.allow_non_cptp) {
        throw std::invalid_argument("run_density: Kraus channel is not CPTP (deficit " +
                                    std::to_string(k->channel.deficit) + "); pass allow_non_cptp to override");
      }
      const int pos[] = {position(k->qubit)};
      auto shifts = detail::shifts_for(pos, n);
      Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
      for (const auto& op : k->channel.ops) acc += detail::conjugate(rho, Matrix(op), shifts);
      rho = std::move(acc);
    } else {
      const int label = std::get<MeasureAndDiscard>(ins).qubit;
      const int pos = position(label);
      if (n == 1) throw std::invalid_argument("run_density: cannot discard the last qubit");
      std::vector<int> keep;
      for (int i = 1; i <= n; ++i) {
        if (i != pos) keep.push_back(i);
      }
      rho = partial_trace(DensityMatrix(rho), keep).matrix();
      active.erase(active.begin() + (pos - 1));
    }
  }
  return DensityMatrix(std::move(rho));
}

}  // namespace fmosim
