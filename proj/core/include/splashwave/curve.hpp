#pragma once

#include <array>

#include "splashwave/types.hpp"

namespace splashwave {

struct BranchSpec;

/// tilde_closed stores positions directly; physical_periodic stores
/// z1(alpha) - alpha in x so that both stored components are 2pi-periodic
/// (z1(alpha + 2pi) = z1(alpha) + 2pi is then automatic).
enum class CurveKind { tilde_closed, physical_periodic };

struct PeriodicCurve {
    CurveKind kind = CurveKind::tilde_closed;
    std::vector<double> x;
    std::vector<double> y;

    int size() const { return static_cast<int>(x.size()); }
    double alpha(int j) const { return grid_alpha(size(), j); }

    Vec2 point(int j) const {
        if (kind == CurveKind::physical_periodic) return {x[j] + alpha(j), y[j]};
        return {x[j], y[j]};
    }

    /// n even and >= 16, matching component sizes, all samples finite.
    void check_valid() const;
};

/// d^order z / d alpha^order of the trigonometric interpolant (true
/// positions, so order 1 of a physical curve includes the +1 from alpha).
std::vector<Vec2> curve_derivative(const PeriodicCurve& c, int order);

ScalarField tangent_modulus(const PeriodicCurve& c);

/// Component-wise Sobolev norm of the periodic representation, combined in
/// quadrature.
double curve_sobolev_norm(const PeriodicCurve& c, double s);

double curve_diameter(const PeriodicCurve& c);

/// Chord z(alpha_i) - z(alpha_j) with the parameter difference wrapped to
/// (-pi, pi]; for physical curves the 2pi-shifted image closest in parameter
/// is used.
Vec2 periodic_chord(const PeriodicCurve& c, int i, int j);

/// Wrapped parameter distance used by the arc-chord functional.
double wrapped_param_distance(int n, int i, int j);

/// Arc-chord functional F(z): max over node pairs of |beta| / |chord|.
/// Throws SelfIntersection if some pair coincides exactly.
double arc_chord(const PeriodicCurve& c);

struct MinGapResult {
    double distance = 0.0;
    int i = 0;
    int j = 0;
};

/// Minimum chord over node pairs with circular index distance > band.
MinGapResult min_node_gap(const PeriodicCurve& c, int band);

PeriodicCurve krasny_filter(const PeriodicCurve& c, double rel_threshold = 1e-13);

PeriodicCurve resample_curve(const PeriodicCurve& c, int m);

struct UniformArclengthResult {
    PeriodicCurve curve;
    std::vector<double> source_alpha;  // alpha*(beta_j) in the original parameter
    std::vector<double> dalpha_dbeta;  // jacobian of the reparametrization
};

/// Reparametrizes a curve to uniform |z_beta|. Fields sampled on the old
/// grid transfer via eval_interpolant at source_alpha (times dalpha_dbeta
/// for densities such as the sheet strength).
UniformArclengthResult resample_uniform_arclength(const PeriodicCurve& c);

/// Splash-curve validation per-clause report.
struct ValidationReport {
    // (a) smooth 2pi-periodicity of the components
    bool periodic_smooth = false;
    double fourier_tail = 0.0;

    // (b) exactly one self-intersection pair with positive tangent moduli
    //     and arc-chord after excising a neighborhood of either point
    bool single_self_intersection = false;
    int touch_cluster_count = 0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double tangent_modulus_1 = 0.0, tangent_modulus_2 = 0.0;
    double excised_arc_chord = 0.0;
    bool excised_arc_chord_ok = false;

    // (c) tilde image closed with healthy arc-chord
    bool tilde_closed_ok = false;
    double tilde_closure_gap = 0.0;
    double tilde_arc_chord = 0.0;
    bool tilde_arc_chord_ok = false;

    // (d) distance to the excluded points q^0..q^4
    std::array<double, 5> q_distances{};
    bool q_distance_ok = false;

    // (e) the curve passes below (+-pi, 0)
    bool passes_below_pi = false;

    bool all_pass() const {
        return periodic_smooth && single_self_intersection && excised_arc_chord_ok &&
               tilde_closed_ok && tilde_arc_chord_ok && q_distance_ok && passes_below_pi;
    }
};

ValidationReport validate_splash_curve(const PeriodicCurve& c, const BranchSpec& branch);

}  // namespace splashwave
