#pragma once

#include <array>

#include "splashwave/evolution.hpp"

namespace splashwave {

/// The seven additive components of the energy E(t); each is the squared
/// quantity entering the sum. When min Q^2 sigma_z <= 0 the weighted terms
/// are reported as +inf sentinels and the flag is cleared.
struct EnergySnapshot {
    double time = 0.0;
    double h3_z = 0.0;             // ||z||_{H^3}^2
    double weighted_h4 = 0.0;      // int Q^2 sigma_z / |z_a|^2 |d^4 z|^2
    double arc_chord_sq = 0.0;     // ||F(z)||_inf^2
    double h2_omega = 0.0;         // ||omega||_{H^2}^2
    double h3half_varphi = 0.0;    // ||varphi||_{H^{3+1/2}}^2
    double tangent_over_rt = 0.0;  // |z_a|^2 / m(Q^2 sigma_z)
    std::array<double, 5> inv_qdist{};  // 1 / m(q^l)
    double total = 0.0;
    double min_q2_sigma = 0.0;
    bool rayleigh_taylor_positive = false;
};

/// Per-time distance between a reference and a perturbed trajectory in the
/// stability norm, with the norms of the gauge b and residuals (f, g) of
/// the perturbed run at the same time.
struct StabilityRecord {
    double time = 0.0;
    double D_h3_sq = 0.0;        // ||z - x||_{H^3}^2
    double D_h4_weighted = 0.0;  // int Q^2 sigma_z/|z_a|^2 |d^4 D|^2
    double d_h2_sq = 0.0;        // ||omega - gamma||_{H^2}^2
    double DD_h3half_sq = 0.0;   // ||varphi - zeta||_{H^{3+1/2}}^2
    double energy = 0.0;         // the sum of the four terms
    double b_norm = 0.0, b_s_norm = 0.0, b_e_norm = 0.0;
    double f_norm = 0.0;  // ||f||_{H^{5+1/2}}
    double g_norm = 0.0;  // ||g||_{H^{3+1/2}}
    double delta = 0.0;   // (f+g)^k + (f+g)^2 with k = 2
};

/// phi = Q^2 omega / (2 |z_a|) - c |z_a|.
ScalarField varphi(const PeriodicCurve& curve, const ScalarField& omega,
                   const ScalarField& c_tilde, const DomainMap& map);

/// Three uniformly spaced snapshots; time derivatives are centered at mid.
struct TrajectoryWindow {
    const Snapshot* prev = nullptr;
    const Snapshot* mid = nullptr;
    const Snapshot* next = nullptr;
    double spacing = 0.0;
};

/// Window centered at snapshot mid_index (throws MismatchedWindow if the
/// neighbors are missing or unevenly spaced).
TrajectoryWindow window_at(const Trajectory& traj, int mid_index);
TrajectoryWindow make_window(const Snapshot& prev, const Snapshot& mid, const Snapshot& next);

/// Rayleigh-Taylor function sigma_z evaluated at the window midpoint. The
/// advective phi must match the gauge the trajectory was generated in
/// (it vanishes identically for the c = 0 potential runs).
ScalarField rayleigh_taylor_sigma(const TrajectoryWindow& window, const DomainMap& map,
                                  OmegaGauge gauge);

EnergySnapshot energy(const TrajectoryWindow& window, const DomainMap& map, OmegaGauge gauge);

struct BTerms {
    ScalarField b;    // b_s + b_e
    ScalarField b_s;  // cumulative gauge of the (Q^2 BR) integrand
    ScalarField b_e;  // cumulative gauge of the f integrand
};

BTerms b_terms(const PeriodicCurve& x, const ScalarField& gamma,
               const std::vector<Vec2>& f_field, const DomainMap& map,
               const VelocityField* br_values = nullptr);

/// Defects (f, g) of the approximate system measured on a stored trajectory,
/// with x_t, gamma_t, BR_t taken by centered differences over consecutive
/// snapshots (optionally subsampled by `stride` to widen the window).
struct ResidualSeries {
    std::vector<double> time;
    std::vector<std::vector<Vec2>> f;
    std::vector<ScalarField> g;
    std::vector<double> f_norm;  // H^{5+1/2}, components in quadrature
    std::vector<double> g_norm;  // H^{3+1/2}
    std::vector<double> delta;   // (f+g)^2 + (f+g)^k, k = 2
};

ResidualSeries residuals(const Trajectory& traj, const DomainMap& map, int stride = 1);

/// Stability energy series between a reference run (supplies the weight
/// Q^2 sigma_z / |z_a|^2) and a perturbed run on the same snapshot times.
/// A reference on a refined grid (n_ref = k n_pert) is subsampled onto the
/// shared nodes; anything else is a GridMismatch.
std::vector<StabilityRecord> stability_energy(const Trajectory& reference,
                                              const Trajectory& perturbed,
                                              const DomainMap& map);

struct GronwallFit {
    double c1 = 0.0;
    double eps2 = 0.0;
    double max_violation = 0.0;  // 0 when |dE/dt| <= c1 E + eps2 everywhere
};

/// Least C1 with |dE/dt| <= C1 E(t) + eps2 at every interior sample, where
/// eps2 = max delta; the centered-difference derivative is used.
GronwallFit gronwall_fit(const std::vector<double>& times, const std::vector<double>& energy,
                         const std::vector<double>& delta);

struct SplashDetectResult {
    double min_gap = 0.0;
    double alpha_i = 0.0;
    double alpha_j = 0.0;
    int i = 0;
    int j = 0;
};

/// Minimum node gap over pairs more than n/16 apart (mod n).
SplashDetectResult splash_detect(const PeriodicCurve& curve);

/// Decay rate of log|fhat_k| over the mid-spectrum band [n/8, 3n/8];
/// 0 when the band sits at the filter floor.
double analyticity_radius(const ScalarField& f);

}  // namespace splashwave
