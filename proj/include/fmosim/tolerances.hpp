#pragma once

// Numerical tolerances used by invariant checks across the library.
// Every threshold the code compares against lives here.

namespace fmosim::tol {

/// max-norm of A - A^dagger for a matrix treated as Hermitian
inline constexpr double hermitian = 1e-12;
/// max-norm of U^dagger U - I for a matrix treated as unitary
inline constexpr double unitary = 1e-10;
/// |tr(rho) - 1| for a physical density matrix
inline constexpr double trace = 1e-10;
/// smallest eigenvalue allowed for a physical density matrix
inline constexpr double positivity = 1e-10;
/// slack on |r| <= 1 for a physical Bloch vector
inline constexpr double bloch_norm = 1e-10;
/// max-norm of sum_k K_k^dagger K_k - I for a channel to count as CPTP
inline constexpr double cptp = 1e-10;
/// slack on |M r + m| <= 1 when sampling the Bloch sphere
inline constexpr double bloch_contraction = 1e-9;
/// operator-norm error a compiled schedule must reach against its target
inline constexpr double schedule = 1e-8;
/// trace drift permitted along an exact (RK4) trajectory
inline constexpr double trajectory_trace_exact = 1e-8;
/// trace drift permitted along a Trotterized trajectory
inline constexpr double trajectory_trace_trotter = 1e-6;
/// smallest eigenvalue permitted along a trajectory
inline constexpr double trajectory_positivity = 1e-7;

}  // namespace fmosim::tol
