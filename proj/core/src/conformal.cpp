#include "splashwave/conformal.hpp"

#include <cmath>
#include <limits>

namespace splashwave {

namespace {

const Complex kI(0.0, 1.0);

// Sign of the square root with the cut along arg(tau) = pi/2. Values on the
// cut belong to the Re tau < 0 side, so the splash node w = 0.3i lands on
// the +(0.2728.., 0.2728..) image of fig. 3.
Vec2 canonical_root(Complex tau) {
    if (tau == Complex(0.0, 0.0)) return {0.0, 0.0};
    const double theta = std::atan2(tau.imag(), tau.real());
    const Complex s = std::sqrt(tau);
    return theta >= M_PI / 2.0 ? to_vec2(s) : to_vec2(-s);
}

Vec2 negate(Vec2 v) { return {-v.x, -v.y}; }

int resolve_sign(const BranchSpec& branch) {
    const Vec2 ref = canonical_root(tan_half(to_complex(branch.reference_point)));
    const double d_plus = (branch.anchor_value - ref).norm();
    const double d_minus = (branch.anchor_value + ref).norm();
    const double scale = std::max(1.0, ref.norm());
    if (std::min(d_plus, d_minus) > 1e-6 * scale)
        throw Error(Errc::BranchAmbiguity,
                    "anchor_value does not match either root at the reference point");
    return d_plus <= d_minus ? 1 : -1;
}

}  // namespace

BranchSpec BranchSpec::canonical() {
    BranchSpec spec;
    spec.reference_point = {0.0, -2.0};
    spec.anchor_value = canonical_root(tan_half(to_complex(spec.reference_point)));
    return spec;
}

const SingularPointSet& SingularPointSet::standard() {
    static const SingularPointSet set{{Vec2{0.0, 0.0},
                                       Vec2{M_SQRT1_2, M_SQRT1_2},
                                       Vec2{-M_SQRT1_2, M_SQRT1_2},
                                       Vec2{-M_SQRT1_2, -M_SQRT1_2},
                                       Vec2{M_SQRT1_2, -M_SQRT1_2}}};
    return set;
}

double SingularPointSet::min_distance(Vec2 z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& q : points) d = std::min(d, (z - q).norm());
    return d;
}

Complex tan_half(Complex w) {
    // (1 - e^{-iw}) / (1 + e^{-iw}) keeps the exponential bounded in the
    // half-plane being evaluated; poles sit at w = pi mod 2pi on the axis.
    Complex q = w.imag() <= 0.0 ? std::exp(-kI * w) : std::exp(kI * w);
    Complex den = 1.0 + q;
    if (std::abs(den) < 1e-14)
        throw Error(Errc::PoleInput, "tan(w/2) is infinite at w = pi mod 2pi");
    Complex r = (1.0 - q) / den;
    return w.imag() <= 0.0 ? -kI * r : kI * r;
}

Vec2 map_to_tilde(Complex w, const BranchSpec& branch) {
    const int sign = resolve_sign(branch);
    const Vec2 v = canonical_root(tan_half(w));
    return sign > 0 ? v : negate(v);
}

Complex map_from_tilde(Vec2 z) {
    if (SingularPointSet::standard().min_distance(z) < kSingularTol)
        throw Error(Errc::SingularPointInput, "inverse map evaluated at a q^l point");
    const Complex zc = to_complex(z);
    Complex w = 2.0 * std::atan(zc * zc);
    double re = w.real();
    re -= 2.0 * M_PI * std::floor((re + M_PI) / (2.0 * M_PI));
    return {re, w.imag()};
}

double q_squared(Vec2 z) {
    const Complex zc = to_complex(z);
    if (std::abs(zc) < kSingularTol)
        throw Error(Errc::SingularPointInput, "Q^2 has a pole at q^0");
    const Complex z4 = zc * zc * zc * zc;
    return std::norm((1.0 + z4) / zc) / 16.0;
}

double p2_inverse(Vec2 z) {
    const SingularPointSet& q = SingularPointSet::standard();
    for (int l = 1; l <= 4; ++l)
        if ((z - q.points[l]).norm() < kSingularTol)
            throw Error(Errc::SingularPointInput, "P2^{-1} is log-singular at q^1..q^4");
    const Complex z2 = to_complex(z) * to_complex(z);
    return std::log(std::abs((kI + z2) / (kI - z2)));
}

Vec2 grad_q(Vec2 z) {
    if (SingularPointSet::standard().min_distance(z) < kSingularTol)
        throw Error(Errc::SingularPointInput, "grad Q singular at the q^l points");
    const Complex zc = to_complex(z);
    const Complex z4 = zc * zc * zc * zc;
    const Complex g = (1.0 + z4) / zc;
    const Complex gp = (3.0 * z4 - 1.0) / (zc * zc);
    // For holomorphic g, grad |g| = (Re(conj(g) g'), -Im(conj(g) g')) / |g|.
    const Complex a = std::conj(g) * gp / std::abs(g);
    return Vec2{a.real(), -a.imag()} * 0.25;
}

Vec2 grad_p2_inverse(Vec2 z) {
    const SingularPointSet& q = SingularPointSet::standard();
    for (int l = 1; l <= 4; ++l)
        if ((z - q.points[l]).norm() < kSingularTol)
            throw Error(Errc::SingularPointInput, "grad P2^{-1} singular at q^1..q^4");
    const Complex zc = to_complex(z);
    const Complex z4 = zc * zc * zc * zc;
    // d/dz log((i+z^2)/(i-z^2)) = -4iz / (1 + z^4)
    const Complex a = -4.0 * kI * zc / (1.0 + z4);
    return {a.real(), -a.imag()};
}

namespace {

PeriodicCurve curve_to_tilde(const PeriodicCurve& curve, const BranchSpec& branch) {
    const int n = curve.size();
    const int sign = resolve_sign(branch);
    const SingularPointSet& qset = SingularPointSet::standard();

    PeriodicCurve out;
    out.kind = CurveKind::tilde_closed;
    out.x.resize(n);
    out.y.resize(n);

    Vec2 prev;
    Vec2 first;
    for (int j = 0; j < n; ++j) {
        const Complex tau = tan_half(to_complex(curve.point(j)));
        const Complex s = std::sqrt(tau);
        if (std::abs(s) < kSingularTol)
            throw Error(Errc::SingularPointInput, "curve passes through q^0");

        Vec2 v;
        if (j == 0) {
            v = canonical_root(tau);
            if (sign < 0) v = negate(v);
            first = v;
        } else {
            const Vec2 plus = to_vec2(s);
            const double d_plus = (plus - prev).norm();
            const double d_minus = (negate(plus) - prev).norm();
            if (std::min(d_plus, d_minus) > 0.75 * std::max(d_plus, d_minus))
                throw Error(Errc::BranchTrackingFailure,
                            "consecutive nodes too far apart to continue the branch at node " +
                                std::to_string(j));
            v = d_plus <= d_minus ? plus : negate(plus);
        }

        for (int l = 1; l <= 4; ++l)
            if ((v - qset.points[l]).norm() < kSingularTol)
                throw Error(Errc::SingularPointInput, "curve passes through q^" + std::to_string(l));

        out.x[j] = v.x;
        out.y[j] = v.y;
        prev = v;
    }

    // Branch sign must come back to itself around the loop, otherwise the
    // image is not a closed contour.
    const double d_keep = (first - prev).norm();
    const double d_flip = (negate(first) - prev).norm();
    if (d_flip < d_keep)
        throw Error(Errc::BranchTrackingFailure,
                    "branch sign is not single-valued around the curve");
    return out;
}

PeriodicCurve curve_from_tilde(const PeriodicCurve& curve) {
    const int n = curve.size();
    PeriodicCurve out;
    out.kind = CurveKind::physical_periodic;
    out.x.resize(n);
    out.y.resize(n);

    double prev_re = 0.0;
    for (int j = 0; j < n; ++j) {
        Complex w = map_from_tilde(curve.point(j));
        double re = w.real();
        if (j == 0) {
            re += 2.0 * M_PI * std::round((curve.alpha(0) - re) / (2.0 * M_PI));
        } else {
            re += 2.0 * M_PI * std::round((prev_re - re) / (2.0 * M_PI));
        }
        out.x[j] = re - curve.alpha(j);
        out.y[j] = w.imag();
        prev_re = re;
    }
    return out;
}

}  // namespace

PeriodicCurve map_curve(const PeriodicCurve& curve, MapDirection direction,
                        const BranchSpec& branch) {
    curve.check_valid();
    if (direction == MapDirection::to_tilde) return curve_to_tilde(curve, branch);
    return curve_from_tilde(curve);
}

}  // namespace splashwave
