#include <doctest.h>

#include <cmath>
#include <random>

#include "splashwave/diagnostics.hpp"
#include "splashwave/presets.hpp"
#include "splashwave/spectral.hpp"
#include "test_support.hpp"

using namespace splashwave;
namespace st = splashwave::testing;

namespace {

const TildeMap kTilde;
const FlatMap kFlat;

Snapshot snapshot_of(const PeriodicCurve& curve, const ScalarField& omega, double time) {
    Snapshot s;
    s.time = time;
    s.tilde = curve;
    s.physical = curve;
    s.omega = omega;
    s.phi.assign(curve.size(), 0.0);
    return s;
}

Trajectory short_paper_run(int n, int steps, int stride, Formulation form,
                           OmegaGauge gauge = OmegaGauge::length_preserving) {
    RunConfig config;
    config.n = n;
    config.dt = 1e-6;
    config.t_final = steps * config.dt;
    config.direction = TimeDirection::reversed;
    config.formulation = form;
    config.omega_gauge = gauge;
    config.snapshot_stride = stride;
    const WaveState s0 = initial_state(preset_paper_splash(n), form, kTilde);
    Trajectory traj = run(config, s0, kTilde);
    REQUIRE(traj.completed());
    return traj;
}

// Analytic closed contour clear of the q^l points, spectrally fully resolved
// at n = 128: the residual functionals see its dynamics without spatial
// quadrature noise (the high-order Sobolev weights amplify such noise).
// dt = 1e-4 keeps the window-truncation part of the residual above the
// rounding/filter floor of those weights; the filter is off for the same
// reason.
Trajectory short_contour_run(int n, int steps, int stride) {
    RunConfig config;
    config.n = n;
    config.dt = 1e-4;
    config.t_final = steps * config.dt;
    config.direction = TimeDirection::forward;
    config.formulation = Formulation::omega_form;
    config.omega_gauge = OmegaGauge::length_preserving;
    config.snapshot_stride = stride;
    config.filter_threshold = 0.0;
    std::mt19937 rng(101);
    WaveState s;
    s.formulation = Formulation::omega_form;
    s.curve = st::random_closed_curve(n, rng, 0.5, 0.06);
    s.omega.resize(n);
    for (int j = 0; j < n; ++j)
        s.omega[j] = 0.3 * std::cos(grid_alpha(n, j)) - 0.1 * std::sin(2.0 * grid_alpha(n, j));
    Trajectory traj = run(config, s, kTilde);
    REQUIRE(traj.completed());
    return traj;
}

}  // namespace

TEST_CASE("varphi") {
    const int n = 128;
    const PeriodicCurve circle = st::unit_circle(n);

    // omega = 0, c = 0 gives zero.
    CHECK(max_abs(varphi(circle, ScalarField(n, 0.0), ScalarField(n, 0.0), kFlat)) == 0.0);

    // c = 0 leaves Q^2 omega / (2 |z_a|) pointwise.
    std::mt19937 rng(79);
    const PeriodicCurve curve = st::random_closed_curve(n, rng);
    const ScalarField omega = st::random_field(n, 8, rng);
    const ScalarField phi = varphi(curve, omega, ScalarField(n, 0.0), kTilde);
    const ScalarField speed = tangent_modulus(curve);
    for (int j = 0; j < n; ++j)
        CHECK(phi[j] == doctest::Approx(0.5 * kTilde.q_squared_at(curve.point(j)) * omega[j] /
                                        speed[j])
                            .epsilon(1e-13));

    // Q == 1, unit circle, omega == 1: the gauge integrand vanishes, so
    // phi = 1/(2*1) - 0 = 1/2 by hand.
    const ScalarField ones(n, 1.0);
    const ScalarField c = tangential_c(circle, ones, kFlat);
    CHECK(max_abs(c) < 1e-12);
    const ScalarField phi_c = varphi(circle, ones, c, kFlat);
    for (int j = 0; j < n; ++j) CHECK(phi_c[j] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rayleigh_taylor_sigma: static state") {
    const int n = 256;
    const PeriodicCurve tilde =
        map_curve(preset_paper_splash(n).curve, MapDirection::to_tilde);
    const Snapshot a = snapshot_of(tilde, ScalarField(n, 0.0), 0.0);
    const Snapshot b = snapshot_of(tilde, ScalarField(n, 0.0), 1.0);
    const Snapshot c = snapshot_of(tilde, ScalarField(n, 0.0), 2.0);
    const ScalarField sigma =
        rayleigh_taylor_sigma(make_window(a, b, c), kTilde, OmegaGauge::bhl_c_zero);
    const auto za = curve_derivative(tilde, 1);
    for (int j = 0; j < n; ++j) {
        const double expect = kTilde.grad_height_at(tilde.point(j)).dot(za[j].perp());
        CHECK(sigma[j] == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("rayleigh_taylor_sigma: positive shortly after the reversed start") {
    const Trajectory traj = short_paper_run(256, 30, 10, Formulation::bhl);
    const ScalarField sigma = rayleigh_taylor_sigma(window_at(traj, 1), kTilde, traj.gauge);
    double min_q2s = 1e300;
    const PeriodicCurve& z = traj.snapshots[1].tilde;
    for (int j = 0; j < 256; ++j)
        min_q2s = std::min(min_q2s, kTilde.q_squared_at(z.point(j)) * sigma[j]);
    CHECK(min_q2s > 0.0);
}

TEST_CASE("rayleigh_taylor_sigma: window-halving Richardson consistency") {
    const Trajectory traj = short_paper_run(128, 8, 1, Formulation::bhl);
    REQUIRE(traj.snapshots.size() >= 9);
    auto sigma_at_spacing = [&](int stride) {
        const Snapshot& prev = traj.snapshots[4 - stride];
        const Snapshot& next = traj.snapshots[4 + stride];
        return rayleigh_taylor_sigma(make_window(prev, traj.snapshots[4], next), kTilde,
                                     traj.gauge);
    };
    const ScalarField s1 = sigma_at_spacing(1);
    const ScalarField s2 = sigma_at_spacing(2);
    const ScalarField s4 = sigma_at_spacing(4);
    const double d21 = st::max_abs_diff(s2, s1);
    const double d42 = st::max_abs_diff(s4, s2);
    // Centered differences: sigma(h) = sigma + C h^2, so the defect
    // quadruples with the spacing.
    CHECK(d42 / d21 > 3.0);
    CHECK(d42 / d21 < 5.5);
}

TEST_CASE("rayleigh_taylor_sigma: near-flat gravity-dominated regime") {
    // Q == 1 on amplitude-1e-3 data: sigma = 1 + O(amplitude).
    RunConfig config;
    config.n = 128;
    config.dt = 1e-5;
    config.t_final = 2e-5;
    config.direction = TimeDirection::forward;
    config.snapshot_stride = 1;
    const WaveState s0 = initial_state(preset_flat_test(128), Formulation::bhl, kFlat);
    const Trajectory traj = run(config, s0, kFlat);
    REQUIRE(traj.completed());
    const ScalarField sigma = rayleigh_taylor_sigma(window_at(traj, 1), kFlat, traj.gauge);
    for (double v : sigma) CHECK(std::abs(v - 1.0) < 0.1);
}

TEST_CASE("energy: zero-sheet components vanish") {
    const int n = 128;
    PeriodicCurve circle;
    circle.kind = CurveKind::tilde_closed;
    for (int j = 0; j < n; ++j) {
        circle.x.push_back(0.5 * std::cos(grid_alpha(n, j)));
        circle.y.push_back(0.5 * std::sin(grid_alpha(n, j)));
    }
    const Snapshot a = snapshot_of(circle, ScalarField(n, 0.0), 0.0);
    const Snapshot b = snapshot_of(circle, ScalarField(n, 0.0), 1.0);
    const Snapshot c = snapshot_of(circle, ScalarField(n, 0.0), 2.0);
    const EnergySnapshot e = energy(make_window(a, b, c), kTilde, OmegaGauge::bhl_c_zero);
    CHECK(e.h2_omega == 0.0);
    CHECK(e.h3half_varphi < 1e-25);

    // Parseval oracle: ||z||_{H^3}^2 of (r cos, r sin) is r^2 * 2 * (1+1)^3 pi.
    CHECK(e.h3_z == doctest::Approx(0.25 * 16.0 * M_PI).epsilon(1e-12));

    // F = pi/2 for the unit circle, scaled by 1/radius under dilation.
    CHECK(e.arc_chord_sq == doctest::Approx(M_PI * M_PI).epsilon(1e-12));

    // total = sum of the components (exact bookkeeping).
    double sum = e.h3_z + e.weighted_h4 + e.arc_chord_sq + e.h2_omega + e.h3half_varphi +
                 e.tangent_over_rt;
    for (double v : e.inv_qdist) sum += v;
    CHECK(e.total == sum);
}

TEST_CASE("energy: finite components along the reversed paper run") {
    const Trajectory traj = short_paper_run(256, 30, 10, Formulation::bhl);
    const EnergySnapshot e = energy(window_at(traj, 1), kTilde, traj.gauge);
    CHECK(e.rayleigh_taylor_positive);
    CHECK(std::isfinite(e.total));
    for (double v : e.inv_qdist) {
        CHECK(std::isfinite(v));
        CHECK(v < 1e6);
    }
}

TEST_CASE("b_terms") {
    const int n = 128;
    std::mt19937 rng(83);
    const PeriodicCurve x = st::random_closed_curve(n, rng);
    const ScalarField gamma = st::random_field(n, 8, rng);

    const BTerms no_f = b_terms(x, gamma, std::vector<Vec2>(n), kTilde);
    CHECK(max_abs(no_f.b_e) == 0.0);
    CHECK(st::max_abs_diff(no_f.b, no_f.b_s) == 0.0);

    const ScalarField c = tangential_c(x, gamma, kTilde);
    CHECK(st::max_abs_diff(no_f.b_s, c) < 1e-15);

    std::vector<Vec2> f(n);
    for (int j = 0; j < n; ++j)
        f[j] = {0.01 * std::sin(grid_alpha(n, j)), 0.02 * std::cos(2.0 * grid_alpha(n, j))};
    const BTerms with_f = b_terms(x, gamma, f, kTilde);
    CHECK(std::abs(with_f.b[0]) < 1e-15);  // b(-pi) = 0
    CHECK(max_abs(with_f.b_e) > 0.0);
}

TEST_CASE("residuals: self-residual scales as the window spacing squared") {
    const Trajectory traj = short_contour_run(128, 40, 10);
    const ResidualSeries fine = residuals(traj, kTilde, 1);   // h = 1e-3
    const ResidualSeries wide = residuals(traj, kTilde, 2);   // h = 2e-3
    REQUIRE(fine.time.size() >= 3);
    REQUIRE(wide.time.size() >= 1);
    // Common center: fine index 1 and wide index 0 share their time.
    CHECK(fine.time[1] == doctest::Approx(wide.time[0]));
    const double rf = fine.f_norm[1] + fine.g_norm[1];
    const double rw = wide.f_norm[0] + wide.g_norm[0];
    CHECK(rw / rf > 3.0);
    CHECK(rw / rf < 5.5);
    // delta = 2 (f+g)^2 bookkeeping.
    CHECK(fine.delta[1] == doctest::Approx(2.0 * rf * rf).epsilon(1e-12));
}

TEST_CASE("residuals: hand-planted perturbation spikes f by eps/(2h)") {
    Trajectory traj = short_contour_run(128, 60, 10);
    REQUIRE(traj.snapshots.size() == 7);
    const ResidualSeries base = residuals(traj, kTilde, 1);

    const double eps = 1e-4;
    const int k = 3;  // perturbed snapshot; spikes the windows centered k-1, k+1
    for (int j = 0; j < 128; ++j)
        traj.snapshots[k].tilde.x[j] += eps * std::sin(grid_alpha(128, j));
    const ResidualSeries pert = residuals(traj, kTilde, 1);

    const double h = traj.snapshot_spacing();
    const double expected = eps / (2.0 * h) * std::sqrt(32.0 * M_PI + M_PI);  // ||sin||_{H^{5.5}}
    const int spiked = k;       // series index k = window centered at snapshot k+1
    const int untouched = k - 3;  // window centered at snapshot k-2
    CHECK(pert.f_norm[spiked] > 10.0 * base.f_norm[spiked]);
    CHECK(pert.f_norm[spiked] == doctest::Approx(expected).epsilon(0.25));
    CHECK(pert.f_norm[untouched] == doctest::Approx(base.f_norm[untouched]).epsilon(1e-9));
}

TEST_CASE("residuals: static manufactured solution with the forcing subtracted") {
    const int n = 128;
    std::mt19937 rng(89);
    const PeriodicCurve x = st::random_closed_curve(n, rng);
    const ScalarField gamma = st::random_field(n, 8, rng);
    Trajectory traj;
    traj.gauge = OmegaGauge::length_preserving;
    traj.config.dt = 1.0;
    traj.config.snapshot_stride = 1;
    for (int k = 0; k < 3; ++k) traj.snapshots.push_back(snapshot_of(x, gamma, k));

    const ResidualSeries series = residuals(traj, kTilde, 1);
    REQUIRE(series.f.size() == 1);

    // Manufactured forcing for the static solution, assembled independently:
    // f_mms = -(Q^2 BR + b x_a); subtracting it must cancel f exactly.
    const VelocityField v = br(x, gamma);
    const BTerms b = b_terms(x, gamma, series.f[0], kTilde, &v);
    const auto xa = curve_derivative(x, 1);
    for (int j = 0; j < n; ++j) {
        const Vec2 f_mms =
            -(v[j] * kTilde.q_squared_at(x.point(j)) + xa[j] * b.b[j]);
        CHECK((series.f[0][j] - f_mms).norm() < 1e-13);
    }
}

TEST_CASE("stability_energy: identical runs give zero") {
    const Trajectory traj = short_paper_run(128, 30, 10, Formulation::omega_form);
    const auto records = stability_energy(traj, traj, kTilde);
    REQUIRE(!records.empty());
    for (const StabilityRecord& r : records) {
        CHECK(r.energy == 0.0);
        CHECK(r.D_h3_sq == 0.0);
        CHECK(r.d_h2_sq == 0.0);
        CHECK(r.DD_h3half_sq == 0.0);
    }
}

TEST_CASE("stability_energy: quadratic scaling in the sheet perturbation") {
    const int n = 128;
    RunConfig config;
    config.n = n;
    config.dt = 1e-6;
    config.t_final = 4e-6;
    config.direction = TimeDirection::forward;
    config.formulation = Formulation::omega_form;
    config.snapshot_stride = 1;

    std::mt19937 rng(97);
    PeriodicCurve contour = st::random_closed_curve(n, rng, 0.5, 0.06);
    WaveState base;
    base.formulation = Formulation::omega_form;
    base.curve = contour;
    base.omega.resize(n);
    for (int j = 0; j < n; ++j) base.omega[j] = 0.3 * std::cos(grid_alpha(n, j));
    const Trajectory reference = run(config, base, kTilde);
    REQUIRE(reference.completed());

    auto energy_at = [&](double eps) {
        WaveState p = base;
        for (int j = 0; j < n; ++j) p.omega[j] += eps * std::cos(grid_alpha(n, j));
        const Trajectory pert = run(config, p, kTilde);
        REQUIRE(pert.completed());
        const auto records = stability_energy(reference, pert, kTilde);
        REQUIRE(!records.empty());
        return records.front().energy;
    };
    const double e5 = energy_at(1e-5);
    const double e4 = energy_at(1e-4);
    CHECK(e4 / e5 == doctest::Approx(100.0).epsilon(0.2));
}

TEST_CASE("stability_energy: grid handling") {
    const Trajectory a = short_paper_run(128, 20, 10, Formulation::omega_form);
    const Trajectory b = short_paper_run(192, 20, 10, Formulation::omega_form);
    CHECK_THROWS_AS(stability_energy(a, b, kTilde), Error);

    // A refined reference restricts onto the shared nodes.
    const Trajectory fine = short_paper_run(256, 20, 10, Formulation::omega_form);
    const auto records = stability_energy(fine, a, kTilde);
    REQUIRE(!records.empty());
    for (const StabilityRecord& r : records) CHECK(std::isfinite(r.energy));
}

TEST_CASE("gronwall_fit") {
    // Exact exponential: C1 = 2 up to the centered-difference defect.
    std::vector<double> t, e, d;
    const double h = 0.01;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i * h);
        e.push_back(std::exp(2.0 * i * h));
        d.push_back(0.0);
    }
    const GronwallFit fit = gronwall_fit(t, e, d);
    CHECK(fit.c1 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(fit.c1 >= 2.0);
    CHECK(fit.max_violation == 0.0);
    CHECK(fit.eps2 == 0.0);

    // Identically zero energy: C1 = 0 and eps2 = max delta.
    std::vector<double> zero(t.size(), 0.0), dd(t.size(), 0.0);
    dd[3] = 0.125;
    const GronwallFit flat = gronwall_fit(t, zero, dd);
    CHECK(flat.c1 == 0.0);
    CHECK(flat.eps2 == 0.125);

    // An energy spike out of nothing admits no finite C1.
    std::vector<double> spike(t.size(), 0.0);
    spike[50] = 1.0;
    const GronwallFit bad = gronwall_fit(t, spike, dd);
    CHECK(bad.max_violation > 0.0);

    CHECK_THROWS_AS(gronwall_fit({0.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}), Error);
}

TEST_CASE("splash_detect") {
    // Circle: the band excludes index distances <= n/16, so the minimum is
    // the chord at distance n/16 + 1.
    const int n = 256;
    const SplashDetectResult circle = splash_detect(st::unit_circle(n));
    CHECK(circle.min_gap == doctest::Approx(2.0 * std::sin(17.0 * M_PI / 256.0)).epsilon(1e-12));

    const SplashDetectResult paper = splash_detect(preset_paper_splash(512).curve);
    CHECK(paper.min_gap < 1e-6);
    CHECK(std::abs(std::abs(paper.alpha_i) - M_PI_2) < 1e-12);
    CHECK(std::abs(std::abs(paper.alpha_j) - M_PI_2) < 1e-12);
}

TEST_CASE("analyticity_radius") {
    // n = 128 keeps the fit band [n/8, 3n/8] of the e^{-k/2} spectrum above
    // the relative floor of the detector.
    const int n = 128;
    ScalarField f(n, 0.0);
    for (int k = 1; k <= n / 2; ++k) {
        const double amp = std::exp(-0.5 * k);
        for (int j = 0; j < n; ++j) f[j] += amp * std::cos(k * grid_alpha(n, j));
    }
    CHECK(analyticity_radius(f) == doctest::Approx(0.5).epsilon(0.04));

    // Band-limited field: the mid-band sits at the floor, nothing to fit.
    ScalarField band(n, 0.0);
    for (int j = 0; j < n; ++j)
        band[j] = std::cos(3.0 * grid_alpha(n, j)) + 0.5 * std::sin(7.0 * grid_alpha(n, j));
    CHECK(analyticity_radius(band) == 0.0);
}

TEST_CASE("window_at: spacing checks") {
    Trajectory traj;
    PeriodicCurve c = st::unit_circle(32);
    traj.snapshots.push_back(snapshot_of(c, ScalarField(32, 0.0), 0.0));
    traj.snapshots.push_back(snapshot_of(c, ScalarField(32, 0.0), 1.0));
    traj.snapshots.push_back(snapshot_of(c, ScalarField(32, 0.0), 2.5));
    CHECK_THROWS_AS(window_at(traj, 1), Error);
    CHECK_THROWS_AS(window_at(traj, 0), Error);
}
