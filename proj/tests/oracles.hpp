#pragma once

// Independent reference computations for the test suite. Nothing here calls
// into the library's numerical kernels.

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <functional>
#include <random>

#include "fmosim/qcore.hpp"

namespace oracle {

using fmosim::Complex;
using fmosim::Matrix;

/// Pade-based matrix exponential from Eigen's unsupported module.
inline Matrix expm(const Matrix& a) { return a.exp(); }

/// Kronecker product by explicit index arithmetic.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Matrix sx() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix sy() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix sz() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Matrix id2() { return Matrix::Identity(2, 2); }

/// Operator `op` on qubit q (1-based, qubit 1 leftmost) of an n-qubit register.
inline Matrix on(const Matrix& op, int q, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 1; k <= n; ++k) out = kron(out, k == q ? op : id2());
  return out;
}

/// Fixed-step RK4 for d rho/dt = f(rho).
inline Matrix rk4(const std::function<Matrix(const Matrix&)>& f, Matrix rho, double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Matrix k1 = f(rho);
    const Matrix k2 = f(rho + 0.5 * h * k1);
    const Matrix k3 = f(rho + 0.5 * h * k2);
    const Matrix k4 = f(rho + h * k3);
    rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Single-qubit dissipator written with the raising and lowering operators
/// sigma^{+/-} = sigma_x +/- i sigma_y, in the basis ordering where the
/// excited state comes first (sigma_z = +1):
/// L(rho) = G(-sigma^+ sigma^- rho - rho sigma^+ sigma^- + 2 sigma^- rho sigma^+).
inline Matrix dissipator_excitation_frame(const Matrix& rho, double rate) {
  const Matrix sp = sx() + Complex(0, 1) * sy();
  const Matrix sm = sx() - Complex(0, 1) * sy();
  const Matrix n = sp * sm;
  return rate * (-(n * rho) - rho * n + 2.0 * sm * rho * sp);
}

inline Matrix bloch_density(double x, double y, double z) {
  return 0.5 * (id2() + x * sx() + y * sy() + z * sz());
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Haar-ish random pure-state mixture: rank-k density matrix of dimension d.
inline Matrix random_density(Eigen::Index d, std::mt19937_64& g, int rank = 0) {
  std::normal_distribution<double> nd;
  const Eigen::Index k = rank > 0 ? rank : d;
  Matrix a(d, k);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = Complex(nd(g), nd(g));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Matrix random_hermitian(Eigen::Index d, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(nd(g), nd(g));
  return 0.5 * (a + a.adjoint());
}

inline Matrix random_unitary(Eigen::Index d, std::mt19937_64& g) {
  return expm(Complex(0, -1) * random_hermitian(d, g));
}

/// Random point strictly inside the Bloch ball.
inline Eigen::Vector3d random_bloch(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Eigen::Vector3d r(u(g), u(g), u(g));
    if (r.norm() <= 1.0) return r;
  }
}

}  // namespace oracle
