#include <doctest.h>

#include <cmath>
#include <random>

#include "splashwave/conformal.hpp"
#include "splashwave/curve.hpp"
#include "splashwave/presets.hpp"
#include "splashwave/spectral.hpp"
#include "test_support.hpp"

using namespace splashwave;
namespace st = splashwave::testing;

namespace {

ScalarField sampled(int n, double (*f)(double)) {
    ScalarField out(n);
    for (int j = 0; j < n; ++j) out[j] = f(grid_alpha(n, j));
    return out;
}

}  // namespace

TEST_CASE("spectral derivative: trigonometric eigenfunctions") {
    const int n = 64;
    const ScalarField sin1 = sampled(n, [](double a) { return std::sin(a); });
    const ScalarField cos1 = sampled(n, [](double a) { return std::cos(a); });
    CHECK(st::max_abs_diff(spectral::derivative(sin1, 1), cos1) < 1e-12);

    // n = 32 keeps the k^4 amplification of the rounding floor below 1e-10.
    const ScalarField sin3 = sampled(32, [](double a) { return std::sin(3.0 * a); });
    ScalarField expected(32);
    for (int j = 0; j < 32; ++j) expected[j] = 81.0 * sin3[j];
    CHECK(st::max_abs_diff(spectral::derivative(sin3, 4), expected) < 1e-10);
}

TEST_CASE("spectral derivative: splash height component closed form") {
    const int n = 256;
    const PresetData data = preset_paper_splash(n);
    const ScalarField dz2 = spectral::derivative(data.curve.y, 1);
    // d/da of cos(a)/10 - 3 cos(2a)/10 + cos(3a)/10, by hand.
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        const double hand = -0.1 * std::sin(a) + 0.6 * std::sin(2.0 * a) - 0.3 * std::sin(3.0 * a);
        CHECK(dz2[j] == doctest::Approx(hand).epsilon(1e-12));
    }
    CHECK(std::abs(dz2[n / 2]) < 1e-13);  // alpha = 0
}

TEST_CASE("hilbert transform") {
    const int n = 128;
    CHECK(st::max_abs_diff(spectral::hilbert(sampled(n, [](double a) { return std::cos(a); })),
                           sampled(n, [](double a) { return std::sin(a); })) < 1e-13);

    const ScalarField constant(n, 2.5);
    CHECK(max_abs(spectral::hilbert(constant)) < 1e-14);

    std::mt19937 rng(11);
    const ScalarField f = st::random_field(n, n / 4, rng, 0.8, /*zero_mean=*/false);
    const ScalarField hh = spectral::hilbert(spectral::hilbert(f));
    const double m = mean(f);
    for (int j = 0; j < n; ++j) CHECK(hh[j] == doctest::Approx(-(f[j] - m)).epsilon(1e-12));
}

TEST_CASE("lambda_half") {
    const int n = 128;
    const ScalarField cos2 = sampled(n, [](double a) { return std::cos(2.0 * a); });
    ScalarField expect(n);
    for (int j = 0; j < n; ++j) expect[j] = M_SQRT2 * cos2[j];
    CHECK(st::max_abs_diff(spectral::lambda_half(cos2), expect) < 1e-13);

    CHECK(max_abs(spectral::lambda_half(ScalarField(n, 3.0))) < 1e-14);

    // Parseval oracle: ||Lambda^{1/2} f||_L2^2 = 2 pi sum_k |k| |f_k|^2 with
    // coefficients read off the cos/sin construction.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(9), b(9);
    ScalarField f(n, 0.0);
    for (int k = 1; k <= 8; ++k) {
        a[k] = u(rng);
        b[k] = u(rng);
        for (int j = 0; j < n; ++j) {
            const double al = grid_alpha(n, j);
            f[j] += a[k] * std::cos(k * al) + b[k] * std::sin(k * al);
        }
    }
    double expected_sq = 0.0;
    for (int k = 1; k <= 8; ++k) expected_sq += 2.0 * M_PI * k * 0.5 * (a[k] * a[k] + b[k] * b[k]);
    const double got = l2_norm(spectral::lambda_half(f));
    CHECK(got * got == doctest::Approx(expected_sq).epsilon(1e-12));
}

TEST_CASE("sobolev norms") {
    const int n = 64;
    const ScalarField sin1 = sampled(n, [](double a) { return std::sin(a); });
    CHECK(spectral::sobolev_norm(sin1, 0.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(spectral::sobolev_norm(sin1, 3.0) ==
          doctest::Approx(std::sqrt(8.0 * M_PI)).epsilon(1e-13));
    CHECK(spectral::sobolev_norm(ScalarField(n, -1.7), 2.5) ==
          doctest::Approx(1.7 * std::sqrt(2.0 * M_PI)).epsilon(1e-13));

    std::mt19937 rng(17);
    const ScalarField f = st::random_field(n, n / 4, rng, 0.7, false);
    CHECK(spectral::sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
}

TEST_CASE("arc_chord functional") {
    // Unit circle: |beta| / (2 sin(|beta|/2)) peaks at antipodes.
    CHECK(arc_chord(st::unit_circle(128)) == doctest::Approx(M_PI_2).epsilon(1e-12));

    // Flat graph: ratio is identically 1 (the wrapped chord equals beta).
    CHECK(arc_chord(st::flat_line(64, -0.3)) == doctest::Approx(1.0).epsilon(1e-12));

    // The splash curve carries coincident nodes at +-pi/2.
    const PeriodicCurve splash = preset_paper_splash(256).curve;
    bool threw = false;
    double value = 0.0;
    try {
        value = arc_chord(splash);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SelfIntersection);
        threw = true;
    }
    if (!threw) CHECK(value > 1e6);

    // Rigid-motion invariance and inverse scaling under dilation.
    std::mt19937 rng(19);
    PeriodicCurve c = st::random_closed_curve(128, rng);
    const double base = arc_chord(c);
    PeriodicCurve moved = c, scaled = c;
    const double phi = 0.77;
    for (int j = 0; j < c.size(); ++j) {
        const Vec2 p = c.point(j);
        moved.x[j] = std::cos(phi) * p.x - std::sin(phi) * p.y + 3.1;
        moved.y[j] = std::sin(phi) * p.x + std::cos(phi) * p.y - 1.2;
        scaled.x[j] = 2.5 * p.x;
        scaled.y[j] = 2.5 * p.y;
    }
    CHECK(arc_chord(moved) == doctest::Approx(base).epsilon(1e-12));
    CHECK(arc_chord(scaled) == doctest::Approx(base / 2.5).epsilon(1e-12));
}

TEST_CASE("krasny filter") {
    const int n = 128;
    std::mt19937 rng(23);
    const ScalarField f = st::random_field(n, n / 4, rng, 0.8);

    CHECK(st::max_abs_diff(spectral::krasny_filter(f), f) < 1e-14);

    ScalarField noisy = f;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : noisy) v += 1e-15 * u(rng);
    CHECK(st::max_abs_diff(spectral::krasny_filter(noisy), f) < 1e-14);

    // threshold 0 is the identity, bit for bit.
    const ScalarField same = spectral::krasny_filter(noisy, 0.0);
    for (int j = 0; j < n; ++j) CHECK(same[j] == noisy[j]);

    // Idempotence at a fixed threshold.
    const ScalarField once = spectral::krasny_filter(noisy, 1e-10);
    const ScalarField twice = spectral::krasny_filter(once, 1e-10);
    CHECK(st::max_abs_diff(once, twice) < 1e-15);
}

TEST_CASE("multiplier operators commute with the derivative") {
    const int n = 128;
    std::mt19937 rng(29);
    const ScalarField f = st::random_field(n, n / 4, rng);
    CHECK(st::max_abs_diff(spectral::derivative(spectral::hilbert(f), 1),
                           spectral::hilbert(spectral::derivative(f, 1))) < 1e-12);
    CHECK(st::max_abs_diff(spectral::derivative(spectral::lambda_half(f), 1),
                           spectral::lambda_half(spectral::derivative(f, 1))) < 1e-12);
}

TEST_CASE("curve derivative and resampling") {
    const auto flat = st::flat_line(64, -0.4);
    const auto tangent = curve_derivative(flat, 1);
    for (const Vec2& t : tangent) {
        CHECK(t.x == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(t.y) < 1e-14);
    }

    std::mt19937 rng(31);
    const PeriodicCurve c = st::random_closed_curve(64, rng);
    const PeriodicCurve fine = resample_curve(c, 128);
    for (int j = 0; j < 64; ++j)
        CHECK((fine.point(2 * j) - c.point(j)).norm() < 1e-12);
}

TEST_CASE("uniform arclength resampling") {
    std::mt19937 rng(37);
    const PeriodicCurve c = st::random_closed_curve(256, rng);
    const auto res = resample_uniform_arclength(c);

    const ScalarField speed = tangent_modulus(res.curve);
    const double m = mean(speed);
    double dev = 0.0;
    for (double s : speed) dev = std::max(dev, std::abs(s - m));
    CHECK(dev / m < 1e-10);

    // Total length is that of the original curve.
    CHECK(2.0 * M_PI * m ==
          doctest::Approx(2.0 * M_PI * mean(tangent_modulus(c))).epsilon(1e-10));
}

TEST_CASE("validate_splash_curve: paper initial data passes") {
    const PeriodicCurve splash = preset_paper_splash(512).curve;
    const ValidationReport rep = validate_splash_curve(splash, BranchSpec::canonical());
    CHECK(rep.periodic_smooth);
    CHECK(rep.single_self_intersection);
    CHECK(rep.touch_cluster_count == 1);
    CHECK(std::abs(rep.alpha1 + M_PI_2) < 1e-12);
    CHECK(std::abs(rep.alpha2 - M_PI_2) < 1e-12);
    CHECK(rep.tangent_modulus_1 > 0.0);
    CHECK(rep.tangent_modulus_2 > 0.0);
    CHECK(rep.excised_arc_chord_ok);
    CHECK(rep.tilde_closed_ok);
    CHECK(rep.tilde_arc_chord_ok);
    CHECK(rep.q_distance_ok);
    CHECK(rep.passes_below_pi);
    CHECK(rep.all_pass());
}

TEST_CASE("validate_splash_curve: failure modes") {
    // A graph has no self-intersection: clause (b) fails.
    const ValidationReport flat = validate_splash_curve(st::flat_line(64, -0.5),
                                                        BranchSpec::canonical());
    CHECK_FALSE(flat.single_self_intersection);
    CHECK(flat.touch_cluster_count == 0);
    CHECK_FALSE(flat.all_pass());
    CHECK(flat.passes_below_pi);

    // Two touching pairs: z1 odd with roots at +-pi/3 and +-2pi/3 touches
    // twice on the axis; clause (b) uniqueness fails.
    const int n = 384;
    PeriodicCurve two_touch;
    two_touch.kind = CurveKind::physical_periodic;
    const double a1 = -M_PI / std::sqrt(3.0);
    const double a2 = M_PI / (3.0 * std::sqrt(3.0));
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        two_touch.x.push_back(a1 * std::sin(a) + a2 * std::sin(2.0 * a));
        two_touch.y.push_back(0.1 * std::cos(a) - 0.3 * std::cos(2.0 * a) +
                              0.1 * std::cos(3.0 * a));
    }
    const ValidationReport rep = validate_splash_curve(two_touch, BranchSpec::canonical());
    CHECK(rep.touch_cluster_count >= 2);
    CHECK_FALSE(rep.single_self_intersection);
}
