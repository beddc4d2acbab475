#pragma once

#include "splashwave/curve.hpp"
#include "splashwave/solvers.hpp"
#include "splashwave/types.hpp"

namespace splashwave {

/// Velocity samples on the curve nodes; the frame is the frame of the curve
/// the field was computed from.
using VelocityField = std::vector<Vec2>;

/// Principal-value Birkhoff-Rott integral
///   BR(z, omega)(alpha_i) = 1/(2 pi) PV int (z_i - z(b))^perp / |z_i - z(b)|^2 omega(b) db
/// by the alternating-node trapezoidal rule: node i sums over nodes of the
/// opposite parity with weight 2*(2 pi / n). Closed contours use the plane
/// kernel; physical_periodic curves use the cotangent-periodized kernel.
/// Throws ArcChordFailure when a non-adjacent node pair nearly coincides.
VelocityField br(const PeriodicCurve& curve, const ScalarField& omega);

/// Spectral alpha-derivative of br (components are periodic in alpha).
VelocityField br_alpha(const PeriodicCurve& curve, const ScalarField& omega);
VelocityField br_alpha_of(const VelocityField& br_values);

/// First variation of br under a velocity zdot of the curve nodes, at fixed
/// omega. Resolves the curve-motion part of d/dt BR(z, omega).
VelocityField br_position_variation(const PeriodicCurve& curve, const ScalarField& omega,
                                    const std::vector<Vec2>& zdot);

/// Water-side interface velocity u = BR + omega z_alpha / (2 |z_alpha|^2).
VelocityField interface_velocity(const PeriodicCurve& curve, const ScalarField& omega,
                                 const VelocityField* br_values = nullptr);

/// Solves (I + J) omega = 2 phi_alpha with J omega = 2 BR(z, omega).z_alpha.
/// phi_alpha must have zero mean. On return br_of_solution (if given) holds
/// BR(curve, omega), a byproduct of the a-posteriori residual check.
ScalarField omega_from_phi(const PeriodicCurve& curve, const ScalarField& phi_alpha,
                           const SolveOptions& opts = {},
                           const ScalarField* warm_start = nullptr,
                           SolveReport* report = nullptr,
                           VelocityField* br_of_solution = nullptr);

/// Boundary values of the stream function, 1/(2 pi) int log|x - z(b)| omega db,
/// evaluated with the log singularity split off and summed exactly in
/// Fourier space; the smooth remainder uses the alternating-node rule.
ScalarField psi_from_omega(const PeriodicCurve& curve, const ScalarField& omega);

/// Solves BR(z, omega).z_alpha^perp = psi_alpha for the zero-mean omega,
/// with the data projected to zero mean (the circulation is not determined
/// by normal data). psi_alpha must have zero mean.
ScalarField omega_from_psi(const PeriodicCurve& curve, const ScalarField& psi_alpha,
                           const SolveOptions& opts = {}, SolveReport* report = nullptr);

}  // namespace splashwave
