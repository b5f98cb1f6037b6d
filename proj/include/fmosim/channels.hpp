#pragma once

// Single-qubit channels of the FMO noise model.
//
// Two frames appear here. Kraus matrices, affine Bloch maps and circuits use
// the computational frame: sigma_z |0> = +|0>, |0> is the ground state and
// |1> the excited state (the site-population convention of fmosim::dynamics).
// The damping-basis closed form is written in the excitation frame, where the
// excited state has sigma_z = +1 and the dissipator relaxes to r_z = -1. The
// two frames differ by conjugation with sigma_x:
//   r_exc = (r_x, -r_y, -r_z).
//
// Ladder operators follow sigma^- = 2 |0><1| (the unnormalized sigma_x +/-
// i sigma_y), which gives the dissipator rates 8*Gamma (population) and
// 4*Gamma (coherence). The dephasing generator uses the occupation projector
// n = |1><1| in place of sigma^+ sigma^-, the only reading under which it
// preserves trace; it damps coherences at rate gamma.

#include <cmath>
#include <numbers>
#include <optional>

#include "fmosim/circuit.hpp"
#include "fmosim/kraus.hpp"
#include "fmosim/qcore.hpp"

namespace fmosim {

/// r' = M r + m on the Bloch ball.
struct AffineChannel {
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  Eigen::Vector3d m = Eigen::Vector3d::Zero();

  BlochVector apply(const BlochVector& r) const { return BlochVector::from(M * r.vec() + m); }
};

/// The diagonal map parameterized by two angles:
/// M = diag(cos u, cos mu, cos u cos mu), m = (0, 0, sin u sin mu).
inline AffineChannel affine_from_angles(double upsilon, double mu) {
  AffineChannel a;
  a.M = Eigen::Vector3d(std::cos(upsilon), std::cos(mu), std::cos(upsilon) * std::cos(mu)).asDiagonal();
  a.m = Eigen::Vector3d(0.0, 0.0, std::sin(upsilon) * std::sin(mu));
  return a;
}

inline Matrix2 apply_kraus_ops(const Matrix2& rho, const std::vector<Matrix2>& ops) {
  Matrix2 out = Matrix2::Zero();
  for (const auto& k : ops) out += k * rho * k.adjoint();
  return out;
}

/// Affine representation of a (trace-preserving) single-qubit channel,
/// read off from its action on I/2 and on the Pauli directions.
inline AffineChannel bloch_affine(const KrausChannel& ch) {
  auto bloch = [](const Matrix2& rho) {
    return Eigen::Vector3d(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag() + 0.0, (rho(0, 0) - rho(1, 1)).real());
  };
  AffineChannel a;
  const Matrix2 half = 0.5 * Matrix2::Identity();
  a.m = bloch(apply_kraus_ops(half, ch.ops));
  const Pauli axes[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int k = 0; k < 3; ++k) {
    const Matrix2 in = half + 0.5 * pauli_matrix(axes[k]);
    a.M.col(k) = bloch(apply_kraus_ops(in, ch.ops)) - a.m;
  }
  return a;
}

/// Samples the unit sphere on a latitude/longitude grid and reports whether
/// every image stays inside the ball.
inline bool maps_ball_into_itself(const AffineChannel& a, int grid = 24) {
  for (int i = 0; i <= grid; ++i) {
    const double theta = std::numbers::pi * i / grid;
    for (int j = 0; j < 2 * grid; ++j) {
      const double phi = std::numbers::pi * j / grid;
      const Eigen::Vector3d r(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      if ((a.M * r + a.m).norm() > 1.0 + tol::bloch_contraction) return false;
    }
  }
  return true;
}

/// K1 = diag(cos b, cos a), K2 = [[0, sin a], [sin b, 0]] with
/// a = (mu + upsilon)/2, b = (mu - upsilon)/2.
inline KrausChannel kraus_from_angles(double upsilon, double mu) {
  const double a = 0.5 * (mu + upsilon);
  const double b = 0.5 * (mu - upsilon);
  Matrix2 k1, k2;
  k1 << std::cos(b), 0, 0, std::cos(a);
  k2 << 0, std::sin(a), std::sin(b), 0;
  return KrausChannel::audited({k1, k2}, provenance::Angles{upsilon, mu});
}

namespace detail {
inline void check_rate_time(double rate, double t, const char* what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument(std::string(what) + ": rate must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(what) + ": time must be >= 0");
}
}  // namespace detail

/// Amplitude damping towards |0>: K1 = diag(1, e^{-4 G t}),
/// K2 = [[0, sqrt(1 - e^{-8 G t})], [0, 0]].
inline KrausChannel dissipation_kraus(double rate, double t) {
  detail::check_rate_time(rate, t, "dissipation_kraus");
  const double c = std::exp(-4.0 * rate * t);
  const double s = std::sqrt(-std::expm1(-8.0 * rate * t));
  Matrix2 k1, k2;
  k1 << 1, 0, 0, c;
  k2 << 0, s, 0, 0;
  return KrausChannel::audited({k1, k2}, provenance::Dissipation{rate, t});
}

/// The literal two-operator dephasing pair:
/// K1 = diag(-e/2, e/2), K2 = [[0, sqrt(1 - e/2)], [sqrt(1 + e/2), 0]],
/// e = exp(-2 gamma t). It is not trace preserving; the audit records the
/// deficit.
inline KrausChannel dephasing_kraus_paper(double rate, double t) {
  detail::check_rate_time(rate, t, "dephasing_kraus_paper");
  const double e = std::exp(-2.0 * rate * t);
  Matrix2 k1, k2;
  k1 << -0.5 * e, 0, 0, 0.5 * e;
  k2 << 0, std::sqrt(1.0 - 0.5 * e), std::sqrt(1.0 + 0.5 * e), 0;
  return KrausChannel::audited({k1, k2}, provenance::DephasingPaper{rate, t});
}

/// Phase damping with coherence factor lambda = exp(-gamma t):
/// K1 = diag(1, lambda), K2 = diag(0, sqrt(1 - lambda^2)).
inline KrausChannel dephasing_kraus_corrected(double rate, double t) {
  detail::check_rate_time(rate, t, "dephasing_kraus_corrected");
  const double lambda = std::exp(-rate * t);
  Matrix2 k1, k2;
  k1 << 1, 0, 0, lambda;
  k2 << 0, 0, 0, std::sqrt(-std::expm1(-2.0 * rate * t));
  return KrausChannel::audited({k1, k2}, provenance::DephasingCorrected{rate, t});
}

struct ChannelOutput {
  DensityMatrix state;
  double trace = 1.0;
  /// Set when the channel failed its CPTP audit and the caller overrode it.
  bool non_cptp = false;
};

inline ChannelOutput apply_kraus_report(const DensityMatrix& rho, const KrausChannel& ch, bool allow_non_cptp = false) {
  if (rho.dim() != 2) throw std::invalid_argument("apply_kraus: single-qubit state required");
  if (ch.cptp == CptpStatus::violated && !allow_non_cptp) {
    throw std::invalid_argument("apply_kraus: channel is not CPTP (deficit " + std::to_string(ch.deficit) + ")");
  }
  Matrix2 out = apply_kraus_ops(rho.matrix(), ch.ops);
  ChannelOutput r{DensityMatrix(Matrix(out)), out.trace().real(), ch.cptp == CptpStatus::violated};
  return r;
}

inline DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& ch, bool allow_non_cptp = false) {
  return apply_kraus_report(rho, ch, allow_non_cptp).state;
}

// ---------------------------------------------------------------------------
// Damping basis
// ---------------------------------------------------------------------------

/// Closed-form dissipator solution on an excitation-frame Bloch vector:
/// r'_z = -1 + e^{-8 G t}(1 + r_z), r'_{x,y} = e^{-4 G t} r_{x,y}.
inline BlochVector damping_basis_bloch(double rate, const BlochVector& r_exc, double t) {
  const double l13 = std::exp(-4.0 * rate * t);
  const double l3 = std::exp(-8.0 * rate * t);
  return {l13 * r_exc.x, l13 * r_exc.y, -1.0 + l3 * (1.0 + r_exc.z)};
}

inline BlochVector to_excitation_frame(const BlochVector& r) { return {r.x, -r.y, -r.z}; }
inline BlochVector from_excitation_frame(const BlochVector& r) { return {r.x, -r.y, -r.z}; }

/// Solution of the single-qubit dissipator by damping-basis expansion,
/// rho(t) = sum_k tr(L_k rho0) e^{lambda_k t} R_k, over the dual pairs
///   (I, |g><g|, 0), (|e><e|, sigma_z^exc, -8G),
///   (|e><g|^dagger, |e><g|, -4G), (|g><e|^dagger, |g><e|, -4G),
/// with |g> = |0>, |e> = |1>, sigma_z^exc = |e><e| - |g><g|.
inline DensityMatrix damping_basis_solution(double rate, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != 2) throw std::invalid_argument("damping_basis_solution: single-qubit state required");
  detail::check_rate_time(rate, t, "damping_basis_solution");
  Matrix2 g, e, raise, lower;
  g << 1, 0, 0, 0;
  e << 0, 0, 0, 1;
  raise << 0, 0, 1, 0;  // |e><g|
  lower << 0, 1, 0, 0;  // |g><e|
  struct Mode {
    Matrix2 left, right;
    double lambda;
  };
  const Mode modes[] = {
      {Matrix2::Identity(), g, 0.0},
      {e, e - g, -8.0 * rate},
      {raise.adjoint(), raise, -4.0 * rate},
      {lower.adjoint(), lower, -4.0 * rate},
  };
  const Matrix2 rho = rho0.matrix();
  Matrix2 out = Matrix2::Zero();
  for (const auto& mode : modes) out += (mode.left * rho).trace() * std::exp(mode.lambda * t) * mode.right;
  return DensityMatrix(Matrix(out));
}

// ---------------------------------------------------------------------------
// One-ancilla circuit
// ---------------------------------------------------------------------------

/// Angles of the two-Kraus form K1 = diag(cos b, cos a),
/// K2 = F diag(sin b, sin a), with F = X (antidiagonal K2) or I (diagonal K2).
struct TwoKrausAngles {
  double alpha = 0.0;
  double beta = 0.0;
  bool flip = true;
};

inline std::optional<TwoKrausAngles> two_kraus_angles(const KrausChannel& ch) {
  struct Visitor {
    std::optional<TwoKrausAngles> operator()(const provenance::Angles& a) const {
      return TwoKrausAngles{0.5 * (a.mu + a.upsilon), 0.5 * (a.mu - a.upsilon), true};
    }
    // cos alpha = e^{-4 G t}, beta = 0
    std::optional<TwoKrausAngles> operator()(const provenance::Dissipation& d) const {
      return TwoKrausAngles{std::acos(std::exp(-4.0 * d.rate * d.time)), 0.0, true};
    }
    std::optional<TwoKrausAngles> operator()(const provenance::DephasingCorrected& d) const {
      return TwoKrausAngles{std::acos(std::exp(-d.rate * d.time)), 0.0, false};
    }
    std::optional<TwoKrausAngles> operator()(const provenance::DephasingPaper&) const { return std::nullopt; }
    std::optional<TwoKrausAngles> operator()(const provenance::Explicit&) const { return std::nullopt; }
  };
  return std::visit(Visitor{}, ch.provenance);
}

struct ChannelCircuitOptions {
  /// Optional diagonalizing unitaries on the system qubit before and after.
  std::optional<Matrix2> pre;
  std::optional<Matrix2> post;
};

/// System on qubit 1, ancilla on qubit 2 starting in |0>. The ancilla is
/// rotated by an angle conditioned on the system (RY(2 d1), CNOT via
/// H-CZ-H, RY(2 d2)), with 2 d1 = b - a + pi/2 and 2 d2 = b + a - pi/2, so
/// it reads cos b|0> + sin b|1> for system |0> and cos a|0> + sin a|1> for
/// system |1>. For antidiagonal K2 the ancilla then flips the system
/// (H-CZ-H on the system). The ancilla is measured and discarded.
inline Program channel_circuit(const KrausChannel& ch, const ChannelCircuitOptions& opts = {}) {
  const auto angles = two_kraus_angles(ch);
  if (!angles) {
    throw std::invalid_argument("channel_circuit: channel '" + provenance_name(ch.provenance) +
                                "' is not of the supported two-Kraus form");
  }
  const double two_delta1 = angles->beta - angles->alpha + std::numbers::pi / 2;
  const double two_delta2 = angles->beta + angles->alpha - std::numbers::pi / 2;
  Program p(2);
  if (opts.pre) p.add(Gate::unitary(Matrix(*opts.pre), {1}));
  p.add(Gate::ry(two_delta1, 2));
  p.add(Gate::h(2));
  p.add(Gate::cz(1, 2));
  p.add(Gate::h(2));
  p.add(Gate::ry(two_delta2, 2));
  if (angles->flip) {
    p.add(Gate::h(1));
    p.add(Gate::cz(1, 2));
    p.add(Gate::h(1));
  }
  if (opts.post) p.add(Gate::unitary(Matrix(*opts.post), {1}));
  p.add(MeasureAndDiscard{2});
  return p;
}

/// Runs the one-ancilla circuit on a single-qubit state.
inline DensityMatrix run_channel_circuit(const Program& circuit, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("run_channel_circuit: single-qubit state required");
  Matrix2 anc;
  anc << 1, 0, 0, 0;
  DensityMatrix joint(kron({rho.matrix(), Matrix(anc)}));
  return run_density(circuit, joint);
}

}  // namespace fmosim
