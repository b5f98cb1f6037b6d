#pragma once

// FMO system Hamiltonian, the longitudinal-Ising NMR resource Hamiltonian,
// and first-order Trotter products.
//
//   H_0   = sum_j eps_j Z_j
//   H_I   = sum_{j != l} nu_jl (X_j X_l + Y_j Y_l)      (ordered pairs)
//   H_NMR = sum_l (omega_l / 2) Z_l + sum_l J_l Z_l Z_{l+1}

#include <Eigen/Sparse>

#include <cmath>
#include <utility>
#include <vector>

#include "fmosim/circuit.hpp"
#include "fmosim/qcore.hpp"

namespace fmosim {

struct FmoParameters {
  int n_sites = 7;
  std::vector<double> epsilon;
  /// Symmetric hopping rates, zero diagonal.
  Eigen::MatrixXd nu;

  void validate() const {
    if (n_sites < 1 || n_sites > 12) throw std::invalid_argument("FMO model needs 1..12 sites");
    if (static_cast<int>(epsilon.size()) != n_sites) throw std::invalid_argument("epsilon length != n_sites");
    if (nu.rows() != n_sites || nu.cols() != n_sites) throw std::invalid_argument("nu must be n_sites x n_sites");
    for (double e : epsilon) {
      if (!std::isfinite(e)) throw std::invalid_argument("epsilon must be finite");
    }
    for (int j = 0; j < n_sites; ++j) {
      if (nu(j, j) != 0.0) throw std::invalid_argument("nu must have a zero diagonal");
      for (int l = 0; l < n_sites; ++l) {
        if (!std::isfinite(nu(j, l))) throw std::invalid_argument("nu must be finite");
        if (nu(j, l) != nu(l, j)) throw std::invalid_argument("nu must be symmetric");
      }
    }
  }

  /// Uniform site energy and nearest-neighbour hopping.
  static FmoParameters chain(int n, double eps, double hop) {
    FmoParameters p;
    p.n_sites = n;
    p.epsilon.assign(static_cast<std::size_t>(n), eps);
    p.nu = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) p.nu(j, j + 1) = p.nu(j + 1, j) = hop;
    return p;
  }

  bool nearest_neighbour_only() const {
    for (int j = 0; j < n_sites; ++j) {
      for (int l = j + 2; l < n_sites; ++l) {
        if (nu(j, l) != 0.0) return false;
      }
    }
    return true;
  }

  /// Unordered site pairs (1-based, j < l) with non-zero hopping, in
  /// lexicographic order. For a chain this is (1,2), (2,3), ...
  std::vector<std::pair<int, int>> coupled_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < n_sites; ++j) {
      for (int l = j + 1; l < n_sites; ++l) {
        if (nu(j, l) != 0.0 || nu(l, j) != 0.0) out.emplace_back(j + 1, l + 1);
      }
    }
    return out;
  }
};

struct NmrParameters {
  int n_qubits = 7;
  std::vector<double> omega;
  /// Bond l couples qubits l and l+1; length n_qubits - 1.
  std::vector<double> J;

  void validate() const {
    if (n_qubits < 1 || n_qubits > 12) throw std::invalid_argument("NMR register needs 1..12 qubits");
    if (static_cast<int>(omega.size()) != n_qubits) throw std::invalid_argument("omega length != n_qubits");
    if (static_cast<int>(J.size()) != n_qubits - 1) throw std::invalid_argument("J length != n_qubits - 1");
    for (double w : omega) {
      if (!std::isfinite(w)) throw std::invalid_argument("omega must be finite");
    }
    for (double j : J) {
      if (!std::isfinite(j)) throw std::invalid_argument("J must be finite");
    }
  }

  static NmrParameters uniform(int n, double omega_all, double j_all) {
    NmrParameters p;
    p.n_qubits = n;
    p.omega.assign(static_cast<std::size_t>(n), omega_all);
    p.J.assign(static_cast<std::size_t>(std::max(0, n - 1)), j_all);
    return p;
  }

  /// Resource parameters whose compiled targets reproduce the FMO step:
  /// u^z_l(dt) = exp(-i eps_l dt Z_l) needs omega_l = 2 eps_l, and the XY
  /// bond exp(-i dt J_l (XX+YY)) matches H_I with J_l = 2 nu_{l,l+1}.
  static NmrParameters from_fmo(const FmoParameters& f) {
    NmrParameters p;
    p.n_qubits = f.n_sites;
    for (double e : f.epsilon) p.omega.push_back(2.0 * e);
    for (int l = 0; l + 1 < f.n_sites; ++l) p.J.push_back(2.0 * f.nu(l, l + 1));
    return p;
  }
};

inline Matrix build_fmo_h0(const FmoParameters& p) {
  p.validate();
  const int n = p.n_sites;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    double e = 0.0;
    for (int j = 1; j <= n; ++j) {
      e += (static_cast<std::size_t>(b) & qubit_mask(j, n)) ? -p.epsilon[static_cast<std::size_t>(j - 1)]
                                                             : p.epsilon[static_cast<std::size_t>(j - 1)];
    }
    h(b, b) = e;
  }
  return h;
}

namespace detail {

/// (row, col, value) entries of H_I. X_j X_l + Y_j Y_l flips both bits when
/// they differ, with amplitude 2; each unordered pair collects nu_jl + nu_lj.
inline std::vector<Eigen::Triplet<Complex>> hopping_triplets(const FmoParameters& p) {
  std::vector<Eigen::Triplet<Complex>> out;
  const int n = p.n_sites;
  const std::size_t d = std::size_t{1} << n;
  for (auto [j, l] : p.coupled_pairs()) {
    const double c = 2.0 * (p.nu(j - 1, l - 1) + p.nu(l - 1, j - 1));
    const std::size_t mj = qubit_mask(j, n);
    const std::size_t ml = qubit_mask(l, n);
    for (std::size_t b = 0; b < d; ++b) {
      const bool bj = b & mj;
      const bool bl = b & ml;
      if (bj != bl) {
        out.emplace_back(static_cast<int>(b ^ (mj | ml)), static_cast<int>(b), c);
      }
    }
  }
  return out;
}

}  // namespace detail

inline Matrix build_fmo_hi(const FmoParameters& p) {
  p.validate();
  const Eigen::Index d = Eigen::Index{1} << p.n_sites;
  Matrix h = Matrix::Zero(d, d);
  for (const auto& t : detail::hopping_triplets(p)) h(t.row(), t.col()) += t.value();
  return h;
}

inline Matrix build_fmo_h(const FmoParameters& p) { return build_fmo_h0(p) + build_fmo_hi(p); }

inline Eigen::SparseMatrix<Complex> build_fmo_h_sparse(const FmoParameters& p) {
  p.validate();
  const int d = 1 << p.n_sites;
  auto trips = detail::hopping_triplets(p);
  Matrix h0 = build_fmo_h0(p);
  for (int b = 0; b < d; ++b) {
    if (h0(b, b) != 0.0) trips.emplace_back(b, b, h0(b, b));
  }
  Eigen::SparseMatrix<Complex> h(d, d);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

inline Matrix build_nmr_h(const NmrParameters& p) {
  p.validate();
  const int n = p.n_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    auto z = [&](int q) { return (static_cast<std::size_t>(b) & qubit_mask(q, n)) ? -1.0 : 1.0; };
    double e = 0.0;
    for (int l = 1; l <= n; ++l) e += 0.5 * p.omega[static_cast<std::size_t>(l - 1)] * z(l);
    for (int l = 1; l < n; ++l) e += p.J[static_cast<std::size_t>(l - 1)] * z(l) * z(l + 1);
    h(b, b) = e;
  }
  return h;
}

/// exp(-i theta (XX + YY)) on two qubits.
inline Matrix xy_exchange_block(double theta) {
  Matrix m = Matrix::Identity(4, 4);
  m(1, 1) = m(2, 2) = std::cos(2.0 * theta);
  m(1, 2) = m(2, 1) = -kI * std::sin(2.0 * theta);
  return m;
}

/// One first-order Trotter step as a circuit of exact blocks: the H_0 factor
/// first (as RZ rotations), then one XY block per coupled pair in
/// lexicographic pair order.
inline Program trotter_step_program(const FmoParameters& p, double dt) {
  p.validate();
  Program prog(p.n_sites);
  for (int j = 1; j <= p.n_sites; ++j) {
    const double eps = p.epsilon[static_cast<std::size_t>(j - 1)];
    if (eps != 0.0) prog.add(Gate::rz(2.0 * eps * dt, j));
  }
  for (auto [j, l] : p.coupled_pairs()) {
    const double coef = p.nu(j - 1, l - 1) + p.nu(l - 1, j - 1);
    prog.add(Gate::unitary(xy_exchange_block(coef * dt), {j, l}));
  }
  return prog;
}

inline Matrix trotter_unitary(const FmoParameters& p, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("trotter_unitary: steps must be >= 1");
  const Matrix step = unitary_of(trotter_step_program(p, t / steps));
  Matrix u = Matrix::Identity(step.rows(), step.cols());
  for (int k = 0; k < steps; ++k) u = step * u;
  return u;
}

inline Matrix exact_unitary(const FmoParameters& p, double t) {
  return matexp_hermitian(build_fmo_h(p), Complex{0.0, -t});
}

}  // namespace fmosim
