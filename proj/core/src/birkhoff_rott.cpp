#include "splashwave/birkhoff_rott.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "splashwave/spectral.hpp"

namespace splashwave {

namespace {

// Self-intersection guard for the quadratures: non-adjacent node pairs
// closer than this fraction of the curve scale abort the evaluation.
constexpr double kCollisionFraction = 1e-12;

bool non_adjacent(int n, int i, int j) {
    int d = std::abs(i - j) % n;
    d = std::min(d, n - d);
    return d > 1;
}

double pair_distance2(const PeriodicCurve& curve, int i, int j) {
    if (curve.kind == CurveKind::tilde_closed) {
        const double dx = curve.x[i] - curve.x[j];
        const double dy = curve.y[i] - curve.y[j];
        return dx * dx + dy * dy;
    }
    return periodic_chord(curve, i, j).norm2();
}

// Alternating-node sum: each target accumulates the opposite-parity sources
// in fixed order, so the result is bit-identical for any thread count. All
// pairs (either parity) are screened for near-coincidence.
template <typename Kernel>
VelocityField alternating_sum(const PeriodicCurve& curve, const Kernel& kernel,
                              double collision_tol2) {
    const int n = curve.size();
    VelocityField out(n);
    std::atomic<bool> collided{false};
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        Vec2 acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if ((j - i) % 2 != 0) {
                double dist2 = 0.0;
                acc += kernel(i, j, dist2);
                if (dist2 < collision_tol2 && non_adjacent(n, i, j)) collided = true;
            } else if (non_adjacent(n, i, j) && pair_distance2(curve, i, j) < collision_tol2) {
                collided = true;
            }
        }
        out[i] = acc;
    }
    if (collided)
        throw Error(Errc::ArcChordFailure,
                    "non-adjacent nodes nearly coincide; the quadrature is invalid");
    return out;
}

}  // namespace

VelocityField br(const PeriodicCurve& curve, const ScalarField& omega) {
    curve.check_valid();
    const int n = curve.size();
    if (static_cast<int>(omega.size()) != n)
        throw Error(Errc::GridMismatch, "omega sample count differs from the curve");

    const double diam = curve_diameter(curve);
    const double tol2 = kCollisionFraction * kCollisionFraction * diam * diam;

    if (curve.kind == CurveKind::tilde_closed) {
        const double weight = 2.0 / static_cast<double>(n);  // (1/2pi) * 2 * (2pi/n)
        return alternating_sum(curve, [&](int i, int j, double& dist2) {
            const Vec2 d{curve.x[i] - curve.x[j], curve.y[i] - curve.y[j]};
            dist2 = d.norm2();
            return d.perp() * (weight * omega[j] / dist2);
        }, tol2);
    }

    // Periodized kernel: the 2pi image sum of the plane kernel collapses to
    // cot((zeta_i - zeta_j)/2); small separations recover the plane kernel.
    const double weight = 1.0 / static_cast<double>(n);  // (1/4pi) * 2 * (2pi/n) * 2
    return alternating_sum(curve, [&](int i, int j, double& dist2) {
        const Complex zij = to_complex(periodic_chord(curve, i, j));
        dist2 = std::norm(zij);
        const Complex half = 0.5 * zij;
        const Complex cot = std::cos(half) / std::sin(half);
        return Vec2{cot.imag(), cot.real()} * (weight * omega[j]);
    }, tol2);
}

VelocityField br_alpha_of(const VelocityField& br_values) {
    const int n = static_cast<int>(br_values.size());
    ScalarField bx(n), by(n);
    for (int j = 0; j < n; ++j) {
        bx[j] = br_values[j].x;
        by[j] = br_values[j].y;
    }
    bx = spectral::derivative(bx, 1);
    by = spectral::derivative(by, 1);
    VelocityField out(n);
    for (int j = 0; j < n; ++j) out[j] = {bx[j], by[j]};
    return out;
}

VelocityField br_alpha(const PeriodicCurve& curve, const ScalarField& omega) {
    return br_alpha_of(br(curve, omega));
}

VelocityField br_position_variation(const PeriodicCurve& curve, const ScalarField& omega,
                                    const std::vector<Vec2>& zdot) {
    curve.check_valid();
    const int n = curve.size();
    if (static_cast<int>(zdot.size()) != n)
        throw Error(Errc::GridMismatch, "zdot sample count differs from the curve");

    const double diam = curve_diameter(curve);
    const double tol2 = kCollisionFraction * kCollisionFraction * diam * diam;

    if (curve.kind == CurveKind::tilde_closed) {
        const double weight = 2.0 / static_cast<double>(n);
        return alternating_sum(curve, [&](int i, int j, double& dist2) {
            const Vec2 d{curve.x[i] - curve.x[j], curve.y[i] - curve.y[j]};
            const Vec2 dd = zdot[i] - zdot[j];
            dist2 = d.norm2();
            const Vec2 term = dd.perp() / dist2 - d.perp() * (2.0 * d.dot(dd) / (dist2 * dist2));
            return term * (weight * omega[j]);
        }, tol2);
    }

    const double weight = 1.0 / static_cast<double>(n);
    return alternating_sum(curve, [&](int i, int j, double& dist2) {
        const Complex zij = to_complex(periodic_chord(curve, i, j));
        dist2 = std::norm(zij);
        const Complex half = 0.5 * zij;
        const Complex s = std::sin(half);
        const Complex dcot = -0.5 * to_complex(zdot[i] - zdot[j]) / (s * s);
        return Vec2{dcot.imag(), dcot.real()} * (weight * omega[j]);
    }, tol2);
}

VelocityField interface_velocity(const PeriodicCurve& curve, const ScalarField& omega,
                                 const VelocityField* br_values) {
    VelocityField u = br_values ? *br_values : br(curve, omega);
    const auto z_alpha = curve_derivative(curve, 1);
    for (int j = 0; j < curve.size(); ++j) {
        const double za2 = z_alpha[j].norm2();
        if (za2 < 1e-16)
            throw Error(Errc::DegenerateTangent, "tangent vanishes at node " + std::to_string(j));
        u[j] += z_alpha[j] * (omega[j] / (2.0 * za2));
    }
    return u;
}

ScalarField omega_from_phi(const PeriodicCurve& curve, const ScalarField& phi_alpha,
                           const SolveOptions& opts, const ScalarField* warm_start,
                           SolveReport* report, VelocityField* br_of_solution) {
    curve.check_valid();
    const int n = curve.size();
    if (static_cast<int>(phi_alpha.size()) != n)
        throw Error(Errc::GridMismatch, "phi_alpha sample count differs from the curve");
    if (std::abs(mean(phi_alpha)) > 1e-10 * std::max(l2_norm(phi_alpha), 1e-300))
        throw Error(Errc::ZeroMeanViolation, "phi_alpha must have zero mean");

    const auto z_alpha = curve_derivative(curve, 1);
    auto apply = [&](const ScalarField& w) {
        const VelocityField v = br(curve, w);
        ScalarField out(n);
        for (int j = 0; j < n; ++j) out[j] = w[j] + 2.0 * v[j].dot(z_alpha[j]);
        return out;
    };

    ScalarField rhs(n);
    for (int j = 0; j < n; ++j) rhs[j] = 2.0 * phi_alpha[j];

    SolveReport local;
    ScalarField omega = solve_linear(apply, rhs, opts, warm_start, &local);

    // A-posteriori residual; its BR evaluation is what most callers need next.
    VelocityField v = br(curve, omega);
    ScalarField residual(n);
    for (int j = 0; j < n; ++j)
        residual[j] = omega[j] + 2.0 * v[j].dot(z_alpha[j]) - rhs[j];
    local.residual = l2_norm(residual);
    local.residual_history.push_back(local.residual);
    if (report) *report = local;
    if (local.residual > opts.residual_tolerance)
        throw NonConvergenceError("(I+J) solve residual " + std::to_string(local.residual),
                                  local.residual_history);
    if (br_of_solution) *br_of_solution = std::move(v);
    return omega;
}

ScalarField psi_from_omega(const PeriodicCurve& curve, const ScalarField& omega) {
    curve.check_valid();
    const int n = curve.size();
    if (static_cast<int>(omega.size()) != n)
        throw Error(Errc::GridMismatch, "omega sample count differs from the curve");

    const double diam = curve_diameter(curve);
    const double tol2 = kCollisionFraction * kCollisionFraction * diam * diam;
    const double weight = 2.0 / static_cast<double>(n);
    const bool periodic = curve.kind == CurveKind::physical_periodic;

    // Split the kernel: log|z_i - z_j| = log(ratio to the flat log kernel)
    // + log|2 sin((a_i - a_j)/2)|. The first factor is analytic and handled
    // by the alternating rule; the second is summed exactly in Fourier space.
    ScalarField psi(n, 0.0);
    std::atomic<bool> collided{false};
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = (i + 1) % 2; j < n; j += 2) {
            const double da = curve.alpha(i) - curve.alpha(j);
            const double flat = std::abs(2.0 * std::sin(0.5 * da));
            double sep;
            if (periodic) {
                const Complex zij = to_complex(periodic_chord(curve, i, j));
                sep = 2.0 * std::abs(std::sin(0.5 * zij));
                if (std::norm(zij) < tol2 && non_adjacent(n, i, j)) collided = true;
            } else {
                const Vec2 d{curve.x[i] - curve.x[j], curve.y[i] - curve.y[j]};
                sep = d.norm();
                if (d.norm2() < tol2 && non_adjacent(n, i, j)) collided = true;
            }
            acc += omega[j] * std::log(sep / flat);
        }
        psi[i] = weight * acc;
    }
    if (collided)
        throw Error(Errc::ArcChordFailure,
                    "non-adjacent nodes nearly coincide; the quadrature is invalid");

    // (1/2pi) int log|2 sin((a-b)/2)| omega(b) db = -sum_k omega_k e^{ika}/(2|k|).
    auto spec = spectral::forward(omega);
    spec[0] = 0.0;
    for (int k = 1; k <= n / 2; ++k) spec[k] *= -1.0 / (2.0 * k);
    const ScalarField exact = spectral::inverse(spec, n);
    for (int j = 0; j < n; ++j) psi[j] += exact[j];
    return psi;
}

ScalarField omega_from_psi(const PeriodicCurve& curve, const ScalarField& psi_alpha,
                           const SolveOptions& opts, SolveReport* report) {
    curve.check_valid();
    const int n = curve.size();
    if (static_cast<int>(psi_alpha.size()) != n)
        throw Error(Errc::GridMismatch, "psi_alpha sample count differs from the curve");
    if (std::abs(mean(psi_alpha)) > 1e-10 * std::max(l2_norm(psi_alpha), 1e-300))
        throw Error(Errc::ZeroMeanViolation, "psi_alpha must have zero mean");

    const auto z_alpha = curve_derivative(curve, 1);

    // The alternating rule splits the discretization into two interleaved
    // copies of the continuum equation (even targets see odd sources and
    // vice versa), so the one-dimensional kernel/cokernel appears once per
    // parity class. Gauge both: data and output are projected to zero mean
    // per parity, and the parity means of omega are pinned through identity
    // blocks.
    auto parity_project = [n](ScalarField& f) {
        double m_even = 0.0, m_odd = 0.0;
        for (int j = 0; j < n; j += 2) m_even += f[j];
        for (int j = 1; j < n; j += 2) m_odd += f[j];
        m_even /= n / 2;
        m_odd /= n / 2;
        for (int j = 0; j < n; j += 2) f[j] -= m_even;
        for (int j = 1; j < n; j += 2) f[j] -= m_odd;
    };

    auto apply = [&](const ScalarField& w) {
        const VelocityField v = br(curve, w);
        ScalarField out(n);
        for (int j = 0; j < n; ++j) out[j] = v[j].dot(z_alpha[j].perp());
        parity_project(out);
        double m_even = 0.0, m_odd = 0.0;
        for (int j = 0; j < n; j += 2) m_even += w[j];
        for (int j = 1; j < n; j += 2) m_odd += w[j];
        m_even /= n / 2;
        m_odd /= n / 2;
        for (int j = 0; j < n; j += 2) out[j] += m_even;
        for (int j = 1; j < n; j += 2) out[j] += m_odd;
        return out;
    };

    ScalarField rhs = psi_alpha;
    parity_project(rhs);

    SolveOptions krylov_opts = opts;
    // The operator is not I + small: Richardson has no contraction, and the
    // Krylov dimension may have to approach n before the spectrum is swept.
    krylov_opts.method = SolveMethod::krylov;
    krylov_opts.max_iterations = std::max(opts.max_iterations, n + 8);

    SolveReport local;
    ScalarField omega = solve_linear(apply, rhs, krylov_opts, nullptr, &local);
    parity_project(omega);

    const VelocityField v = br(curve, omega);
    ScalarField residual(n);
    for (int j = 0; j < n; ++j) residual[j] = v[j].dot(z_alpha[j].perp()) - rhs[j];
    parity_project(residual);
    local.residual = l2_norm(residual);
    local.residual_history.push_back(local.residual);
    if (report) *report = local;
    if (local.residual > opts.residual_tolerance)
        throw NonConvergenceError("normal-data solve residual " + std::to_string(local.residual),
                                  local.residual_history);
    return omega;
}

}  // namespace splashwave
