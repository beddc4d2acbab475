#include "splashwave/evolution.hpp"

#include <cmath>
#include <limits>

#include "splashwave/spectral.hpp"

namespace splashwave {

void RunConfig::check_valid() const {
    if (n < 16 || n % 2 != 0)
        throw Error(Errc::InvalidArgument, "n must be even and >= 16");
    if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
    if (t_final < 0.0) throw Error(Errc::InvalidArgument, "t_final must be nonnegative");
    if (snapshot_stride < 1) throw Error(Errc::InvalidArgument, "snapshot_stride must be >= 1");
    if (filter_threshold < 0.0)
        throw Error(Errc::InvalidArgument, "filter_threshold must be nonnegative");
}

double Trajectory::snapshot_spacing() const {
    return config.dt * static_cast<double>(config.snapshot_stride);
}

ScalarField cumulative_gauge(const ScalarField& integrand) {
    const ScalarField primitive = spectral::antiderivative(integrand);
    ScalarField c(integrand.size());
    for (size_t j = 0; j < integrand.size(); ++j) c[j] = primitive[0] - primitive[j];
    return c;
}

ScalarField tangential_c(const PeriodicCurve& curve, const ScalarField& omega,
                         const DomainMap& map, const VelocityField* br_values) {
    const int n = curve.size();
    const VelocityField brv = br_values ? *br_values : br(curve, omega);
    const auto z_alpha = curve_derivative(curve, 1);

    ScalarField gx(n), gy(n);
    for (int j = 0; j < n; ++j) {
        const double q2 = map.q_squared_at(curve.point(j));
        gx[j] = q2 * brv[j].x;
        gy[j] = q2 * brv[j].y;
    }
    gx = spectral::derivative(gx, 1);
    gy = spectral::derivative(gy, 1);

    ScalarField integrand(n);
    for (int j = 0; j < n; ++j) {
        const double za2 = z_alpha[j].norm2();
        if (za2 < 1e-16)
            throw Error(Errc::DegenerateTangent, "tangent vanishes at node " + std::to_string(j));
        integrand[j] = (gx[j] * z_alpha[j].x + gy[j] * z_alpha[j].y) / za2;
    }

    return cumulative_gauge(integrand);
}

StateDerivative rhs_bhl(const WaveState& state, const DomainMap& map,
                        const SolveOptions& opts, const ScalarField* omega_warm_start,
                        ScalarField* omega_out) {
    const PeriodicCurve& curve = state.curve;
    const int n = curve.size();
    const ScalarField phi_alpha = spectral::derivative(state.phi, 1);

    VelocityField brv;
    ScalarField omega = omega_from_phi(curve, phi_alpha, opts, omega_warm_start, nullptr, &brv);
    const VelocityField u = interface_velocity(curve, omega, &brv);

    StateDerivative d;
    d.curve_dot.resize(n);
    d.field_dot.resize(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 p = curve.point(j);
        const double q2 = map.q_squared_at(p);
        d.curve_dot[j] = u[j] * q2;
        d.field_dot[j] = 0.5 * q2 * u[j].norm2() - map.height_at(p);
    }
    if (omega_out) *omega_out = std::move(omega);
    return d;
}

StateDerivative rhs_omega_form(const WaveState& state, const DomainMap& map,
                               OmegaGauge gauge, const SolveOptions& opts,
                               const ScalarField* omega_t_warm_start,
                               ScalarField* omega_t_out) {
    const PeriodicCurve& curve = state.curve;
    const ScalarField& omega = state.omega;
    const int n = curve.size();

    const auto z_alpha = curve_derivative(curve, 1);
    const VelocityField brv = br(curve, omega);

    ScalarField q2(n), height(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 p = curve.point(j);
        q2[j] = map.q_squared_at(p);
        height[j] = map.height_at(p);
    }
    const ScalarField q2_alpha = spectral::derivative(q2, 1);

    ScalarField c(n);
    if (gauge == OmegaGauge::length_preserving) {
        c = tangential_c(curve, omega, map, &brv);
    } else {
        for (int j = 0; j < n; ++j) {
            const double za2 = z_alpha[j].norm2();
            if (za2 < 1e-16)
                throw Error(Errc::DegenerateTangent,
                            "tangent vanishes at node " + std::to_string(j));
            c[j] = 0.5 * q2[j] * omega[j] / za2;
        }
    }

    StateDerivative d;
    d.curve_dot.resize(n);
    for (int j = 0; j < n; ++j) d.curve_dot[j] = brv[j] * q2[j] + z_alpha[j] * c[j];

    // Collect the explicit part of omega_t. The curve-motion part of
    // d/dt BR contributes explicitly; the omega_t part stays on the left as
    // the same (I + J) operator inverted in omega_from_phi.
    const VelocityField dbr = br_position_variation(curve, omega, d.curve_dot);
    const VelocityField bra = br_alpha_of(brv);

    ScalarField flux(n), c_omega(n);
    for (int j = 0; j < n; ++j) {
        const double za2 = z_alpha[j].norm2();
        flux[j] = 0.25 * q2[j] * omega[j] * omega[j] / za2;
        c_omega[j] = c[j] * omega[j];
    }
    const ScalarField flux_alpha = spectral::derivative(flux, 1);
    const ScalarField c_omega_alpha = spectral::derivative(c_omega, 1);
    const ScalarField height_alpha = spectral::derivative(height, 1);

    ScalarField rhs(n);
    for (int j = 0; j < n; ++j) {
        rhs[j] = -2.0 * dbr[j].dot(z_alpha[j]) - brv[j].norm2() * q2_alpha[j] -
                 flux_alpha[j] + 2.0 * c[j] * bra[j].dot(z_alpha[j]) + c_omega_alpha[j] -
                 2.0 * height_alpha[j];
    }

    auto apply = [&](const ScalarField& w) {
        const VelocityField v = br(curve, w);
        ScalarField out(n);
        for (int j = 0; j < n; ++j) out[j] = w[j] + 2.0 * v[j].dot(z_alpha[j]);
        return out;
    };
    // The forcing carries the full scale of omega_t (it can sit orders of
    // magnitude above O(1) near the splash), so the tolerance is taken
    // relative to it.
    SolveOptions scaled = opts;
    const double forcing_scale = std::max(1.0, l2_norm(rhs));
    scaled.residual_tolerance = opts.residual_tolerance * forcing_scale;

    SolveReport report;
    ScalarField omega_t = solve_linear(apply, rhs, scaled, omega_t_warm_start, &report);
    {
        const ScalarField check = apply(omega_t);
        ScalarField residual(n);
        for (int j = 0; j < n; ++j) residual[j] = check[j] - rhs[j];
        const double res = l2_norm(residual);
        if (res > scaled.residual_tolerance) {
            report.residual_history.push_back(res);
            throw NonConvergenceError("omega_t solve residual " + std::to_string(res),
                                      report.residual_history);
        }
    }

    d.field_dot = omega_t;
    if (omega_t_out) *omega_t_out = std::move(omega_t);
    return d;
}

namespace {

WaveState advance(const WaveState& s, const StateDerivative& k, double h) {
    WaveState out = s;
    ScalarField& field = out.formulation == Formulation::bhl ? out.phi : out.omega;
    for (int j = 0; j < s.curve.size(); ++j) {
        out.curve.x[j] += h * k.curve_dot[j].x;
        out.curve.y[j] += h * k.curve_dot[j].y;
        field[j] += h * k.field_dot[j];
    }
    out.time = s.time + h;
    return out;
}

}  // namespace

WaveState rk4_step(const WaveState& state, double dt, const RhsFn& rhs) {
    const StateDerivative k1 = rhs(state);
    const StateDerivative k2 = rhs(advance(state, k1, 0.5 * dt));
    const StateDerivative k3 = rhs(advance(state, k2, 0.5 * dt));
    const StateDerivative k4 = rhs(advance(state, k3, dt));

    WaveState out = state;
    ScalarField& field = out.formulation == Formulation::bhl ? out.phi : out.omega;
    const double w = dt / 6.0;
    for (int j = 0; j < state.curve.size(); ++j) {
        out.curve.x[j] += w * (k1.curve_dot[j].x + 2.0 * k2.curve_dot[j].x +
                               2.0 * k3.curve_dot[j].x + k4.curve_dot[j].x);
        out.curve.y[j] += w * (k1.curve_dot[j].y + 2.0 * k2.curve_dot[j].y +
                               2.0 * k3.curve_dot[j].y + k4.curve_dot[j].y);
        field[j] += w * (k1.field_dot[j] + 2.0 * k2.field_dot[j] + 2.0 * k3.field_dot[j] +
                         k4.field_dot[j]);
    }
    out.time = state.time + dt;
    return out;
}

WaveState reverse_time(const WaveState& state) {
    WaveState out = state;
    for (double& v : out.phi) v = -v;
    for (double& v : out.omega) v = -v;
    return out;
}

Evolver::Evolver(const DomainMap& map, SolveOptions solver, OmegaGauge gauge,
                 double filter_threshold)
    : map_(map), solver_(solver), gauge_(gauge), filter_threshold_(filter_threshold) {}

StateDerivative Evolver::rhs(const WaveState& state) const {
    const ScalarField* warm = warm_.empty() ? nullptr : &warm_;
    if (state.formulation == Formulation::bhl)
        return rhs_bhl(state, map_, solver_, warm, &warm_);
    return rhs_omega_form(state, map_, gauge_, solver_, warm, &warm_);
}

WaveState Evolver::step(const WaveState& state, double dt) const {
    WaveState out = rk4_step(state, dt, [this](const WaveState& s) { return rhs(s); });
    out.curve = krasny_filter(out.curve, filter_threshold_);
    ScalarField& field = out.formulation == Formulation::bhl ? out.phi : out.omega;
    field = spectral::krasny_filter(field, filter_threshold_);
    if (!all_finite(out.curve.x) || !all_finite(out.curve.y) || !all_finite(field))
        throw Error(Errc::NaNDetected, "non-finite state after step");
    return out;
}

StepDiagnostics evaluate_step_diagnostics(const WaveState& state, const DomainMap& map) {
    StepDiagnostics diag;
    diag.time = state.time;
    const PeriodicCurve& curve = state.curve;
    const int n = curve.size();

    diag.fourier_tail = std::max(spectral::fourier_tail_fraction(curve.x),
                                 spectral::fourier_tail_fraction(curve.y));
    if (!state.evolved_field().empty())
        diag.fourier_tail =
            std::max(diag.fourier_tail, spectral::fourier_tail_fraction(state.evolved_field()));

    diag.arc_chord = arc_chord(curve);
    diag.min_gap = min_node_gap(curve, n / 16).distance;

    if (map.is_identity()) {
        diag.min_q_distance = std::numeric_limits<double>::infinity();
    } else {
        const SingularPointSet& qset = SingularPointSet::standard();
        double d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) d = std::min(d, qset.min_distance(curve.point(j)));
        diag.min_q_distance = d;
    }

    const PeriodicCurve physical =
        map.is_identity() ? curve : map_curve(curve, MapDirection::from_tilde);
    double margin = std::numeric_limits<double>::infinity();
    const double h = 2.0 * M_PI / static_cast<double>(n);
    for (int j = 0; j + 1 < n; ++j)
        margin = std::min(margin, physical.x[j + 1] - physical.x[j] + h);
    margin = std::min(margin, physical.x[0] - physical.x[n - 1] + h);
    diag.graph_margin = margin;
    return diag;
}

namespace {

Snapshot make_snapshot(const WaveState& state, const DomainMap& map,
                       const SolveOptions& opts, const StepDiagnostics& diag) {
    Snapshot snap;
    snap.time = state.time;
    snap.tilde = state.curve;
    snap.physical = map.is_identity() ? state.curve
                                      : map_curve(state.curve, MapDirection::from_tilde);
    snap.diag = diag;
    if (state.formulation == Formulation::bhl) {
        snap.phi = state.phi;
        snap.omega = omega_from_phi(state.curve, spectral::derivative(state.phi, 1), opts);
    } else {
        snap.omega = state.omega;
        const VelocityField v = br(state.curve, state.omega);
        const auto z_alpha = curve_derivative(state.curve, 1);
        ScalarField phi_alpha(state.curve.size());
        for (int j = 0; j < state.curve.size(); ++j)
            phi_alpha[j] = 0.5 * state.omega[j] + v[j].dot(z_alpha[j]);
        snap.phi = spectral::antiderivative(phi_alpha);
    }
    return snap;
}

}  // namespace

Trajectory run(const RunConfig& config, const WaveState& initial, const DomainMap& map) {
    config.check_valid();
    initial.curve.check_valid();

    Trajectory traj;
    traj.config = config;
    traj.gauge = config.formulation == Formulation::bhl ? OmegaGauge::bhl_c_zero
                                                        : config.omega_gauge;

    WaveState state =
        config.direction == TimeDirection::reversed ? reverse_time(initial) : initial;
    state.time = 0.0;
    state.formulation = config.formulation;

    const Evolver evolver(map, config.solver, config.omega_gauge, config.filter_threshold);
    const long total_steps = std::lround(config.t_final / config.dt);

    auto abort_run = [&](const std::string& cause) {
        traj.abort_cause = cause;
        try {
            traj.snapshots.push_back(
                make_snapshot(state, map, config.solver, evaluate_step_diagnostics(state, map)));
        } catch (const Error&) {
            // The final diagnostic snapshot is best-effort.
        }
    };

    try {
        StepDiagnostics diag = evaluate_step_diagnostics(state, map);
        traj.steps.push_back(diag);
        if (diag.min_q_distance < 1e-6) {
            abort_run("SingularPointInput: initial curve too close to a q^l point");
            return traj;
        }
        traj.snapshots.push_back(make_snapshot(state, map, config.solver, diag));

        for (long step = 1; step <= total_steps; ++step) {
            state = evolver.step(state, config.dt);
            state.time = config.dt * static_cast<double>(step);

            diag = evaluate_step_diagnostics(state, map);
            traj.steps.push_back(diag);

            if (diag.min_q_distance < 1e-6) {
                abort_run("SingularPointInput: curve drifted within 1e-6 of a q^l point");
                return traj;
            }
            if (diag.min_gap < 1e-6) {
                abort_run("SelfIntersection: non-local node gap fell below 1e-6");
                return traj;
            }

            if (step % config.snapshot_stride == 0 || step == total_steps)
                traj.snapshots.push_back(make_snapshot(state, map, config.solver, diag));
        }
    } catch (const NonConvergenceError& e) {
        abort_run(e.what());
    } catch (const Error& e) {
        abort_run(e.what());
    }
    return traj;
}

}  // namespace splashwave
