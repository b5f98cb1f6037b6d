#pragma once

// Dense complex linear algebra and single/multi-qubit state primitives.
//
// Basis convention (used everywhere in fmosim): qubits carry 1-based labels
// 1..n, and qubit 1 is the most significant bit of a basis index. The basis
// state |b_1 b_2 ... b_n> therefore has index sum_q b_q * 2^(n - q), and the
// string "1000000" names site 1 excited in a 7-qubit register.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fmosim/tolerances.hpp"

namespace fmosim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr Complex kI{0.0, 1.0};

enum class Pauli { I, X, Y, Z };

/// Bit mask of a 1-based qubit label inside an n-qubit register.
inline std::size_t qubit_mask(int qubit, int n_qubits) {
  return std::size_t{1} << (n_qubits - qubit);
}

inline void check_qubit(int qubit, int n_qubits) {
  if (qubit < 1 || qubit > n_qubits) {
    throw std::out_of_range("qubit " + std::to_string(qubit) +
                            " outside register of " + std::to_string(n_qubits));
  }
}

inline int qubits_for_dim(Eigen::Index dim) {
  if (dim < 1 || !std::has_single_bit(static_cast<std::size_t>(dim))) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  return std::countr_zero(static_cast<std::size_t>(dim));
}

inline Matrix2 pauli_matrix(Pauli p) {
  Matrix2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = tol::hermitian) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = tol::unitary) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// Tensor product of square factors, first factor most significant.
inline Matrix kron(std::span<const Matrix> factors) {
  if (factors.empty()) throw std::invalid_argument("kron of an empty list");
  Matrix acc = factors.front();
  if (acc.rows() != acc.cols()) throw std::invalid_argument("kron factor not square");
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const Matrix& b = factors[k];
    if (b.rows() != b.cols()) throw std::invalid_argument("kron factor not square");
    Matrix out(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
      for (Eigen::Index j = 0; j < acc.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
      }
    }
    acc = std::move(out);
  }
  return acc;
}

inline Matrix kron(std::initializer_list<Matrix> factors) {
  std::vector<Matrix> v(factors);
  return kron(std::span<const Matrix>(v));
}

/// I x ... x P x ... x I with P on the given 1-based qubit.
inline Matrix pauli_embed(Pauli p, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  std::vector<Matrix> factors(static_cast<std::size_t>(n_qubits), Matrix::Identity(2, 2));
  factors[static_cast<std::size_t>(qubit - 1)] = pauli_matrix(p);
  return kron(std::span<const Matrix>(factors));
}

/// Embeds an arbitrary 2x2 operator on one qubit.
inline Matrix embed_single(const Matrix2& op, int qubit, int n_qubits) {
  check_qubit(qubit, n_qubits);
  std::vector<Matrix> factors(static_cast<std::size_t>(n_qubits), Matrix::Identity(2, 2));
  factors[static_cast<std::size_t>(qubit - 1)] = op;
  return kron(std::span<const Matrix>(factors));
}

/// exp(scale * H) for Hermitian H, through its eigendecomposition.
/// Diagonal inputs are exponentiated entrywise.
inline Matrix matexp_hermitian(const Matrix& h, Complex scale) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matexp_hermitian: matrix not square");
  const double scale_tol = tol::hermitian * std::max(1.0, max_abs(h));
  if (!is_hermitian(h, scale_tol)) {
    throw std::invalid_argument("matexp_hermitian: matrix is not Hermitian");
  }
  const Eigen::Index d = h.rows();
  Matrix off = h;
  off.diagonal().setZero();
  if (max_abs(off) == 0.0) {
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) out(i, i) = std::exp(scale * h(i, i).real());
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) throw std::runtime_error("matexp_hermitian: eigensolver failed");
  Vector phases(d);
  for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::exp(scale * eig.eigenvalues()(i));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix not square");
    qubits_for_dim(m_.rows());
  }

  /// Throws unless Hermitian, unit trace and positive semidefinite.
  static DensityMatrix checked(Matrix m) {
    DensityMatrix rho(std::move(m));
    if (!is_hermitian(rho.m_)) throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(rho.trace() - 1.0) > tol::trace) throw std::invalid_argument("density matrix trace != 1");
    if (rho.min_eigenvalue() < -tol::positivity) throw std::invalid_argument("density matrix not positive");
    return rho;
  }

  static DensityMatrix pure(const Vector& psi) { return DensityMatrix(psi * psi.adjoint()); }

  /// Computational basis projector from a bit string such as "0100".
  static DensityMatrix basis(std::string_view bits) {
    if (bits.empty()) throw std::invalid_argument("empty basis label");
    const int n = static_cast<int>(bits.size());
    std::size_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw std::invalid_argument("basis label must be 0/1 characters");
      index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    Matrix m = Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int n_qubits() const { return qubits_for_dim(m_.rows()); }
  Complex trace() const { return m_.trace(); }
  double purity() const { return (m_ * m_).trace().real(); }

  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues().minCoeff(); }

 private:
  Matrix m_;
};

/// rho = (I + r . sigma) / 2
inline DensityMatrix bloch_to_density(const BlochVector& r) {
  Matrix2 m = 0.5 * (pauli_matrix(Pauli::I) + r.x * pauli_matrix(Pauli::X) +
                     r.y * pauli_matrix(Pauli::Y) + r.z * pauli_matrix(Pauli::Z));
  return DensityMatrix(Matrix(m));
}

/// r_a = tr(rho sigma_a). Trace is not renormalized.
inline BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("density_to_bloch requires a single-qubit state");
  const Matrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Matrix diff = a.matrix() - b.matrix();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace fmosim
