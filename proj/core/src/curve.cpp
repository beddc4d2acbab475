#include "splashwave/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splashwave/conformal.hpp"
#include "splashwave/spectral.hpp"

namespace splashwave {

void PeriodicCurve::check_valid() const {
    const int n = size();
    if (n < 16 || n % 2 != 0)
        throw Error(Errc::InvalidArgument, "curve needs an even node count >= 16");
    if (y.size() != x.size())
        throw Error(Errc::InvalidArgument, "curve component sizes differ");
    if (!all_finite(x) || !all_finite(y))
        throw Error(Errc::NaNDetected, "curve has non-finite coordinates");
}

std::vector<Vec2> curve_derivative(const PeriodicCurve& c, int order) {
    ScalarField dx = spectral::derivative(c.x, order);
    ScalarField dy = spectral::derivative(c.y, order);
    std::vector<Vec2> out(c.size());
    const double x_shift = (c.kind == CurveKind::physical_periodic && order == 1) ? 1.0 : 0.0;
    for (int j = 0; j < c.size(); ++j) out[j] = {dx[j] + x_shift, dy[j]};
    return out;
}

ScalarField tangent_modulus(const PeriodicCurve& c) {
    auto t = curve_derivative(c, 1);
    ScalarField out(c.size());
    for (int j = 0; j < c.size(); ++j) out[j] = t[j].norm();
    return out;
}

double curve_sobolev_norm(const PeriodicCurve& c, double s) {
    return std::hypot(spectral::sobolev_norm(c.x, s), spectral::sobolev_norm(c.y, s));
}

double curve_diameter(const PeriodicCurve& c) {
    // Bounding-box diagonal: a scale estimate for tolerances, not the exact
    // metric diameter.
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (int j = 0; j < c.size(); ++j) {
        Vec2 p = c.point(j);
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

double wrapped_param_distance(int n, int i, int j) {
    double beta = 2.0 * M_PI * static_cast<double>(i - j) / static_cast<double>(n);
    beta -= 2.0 * M_PI * std::round(beta / (2.0 * M_PI));
    if (beta == -M_PI) beta = M_PI;
    return std::abs(beta);
}

Vec2 periodic_chord(const PeriodicCurve& c, int i, int j) {
    if (c.kind == CurveKind::tilde_closed) return c.point(i) - c.point(j);
    // Chord against the nearest 2pi-shifted image: z1 shifts with alpha, so
    // in the stored representation the image k contributes
    // (x_i - x_j + dalpha - 2 pi k, y_i - y_j).
    const double base = c.x[i] - c.x[j] + c.alpha(i) - c.alpha(j);
    const double dy = c.y[i] - c.y[j];
    double best = base - 2.0 * M_PI * std::round(base / (2.0 * M_PI));
    // Rounding on the stored offset, not on dalpha: the physical points may
    // sit far from their parameter (overturned curves), so scan neighbors.
    double best_norm2 = best * best + dy * dy;
    for (double shift : {-2.0 * M_PI, 2.0 * M_PI}) {
        const double cand = best + shift;
        const double n2 = cand * cand + dy * dy;
        if (n2 < best_norm2) {
            best = cand;
            best_norm2 = n2;
        }
    }
    return {best, dy};
}

double arc_chord(const PeriodicCurve& c) {
    const int n = c.size();
    double worst = 0.0;
    bool touching = false;
#pragma omp parallel for schedule(static) reduction(max : worst) reduction(|| : touching)
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double beta = wrapped_param_distance(n, i, j);
            const double dist = periodic_chord(c, i, j).norm();
            if (dist == 0.0) {
                touching = true;
            } else {
                worst = std::max(worst, beta / dist);
            }
        }
    }
    if (touching)
        throw Error(Errc::SelfIntersection, "coincident nodes: arc-chord ratio is infinite");
    return worst;
}

MinGapResult min_node_gap(const PeriodicCurve& c, int band) {
    const int n = c.size();
    MinGapResult best;
    best.distance = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int d = (j - i) % n;
            d = std::min(d, n - d);
            if (d <= band) continue;
            const double dist = periodic_chord(c, i, j).norm();
            if (dist < best.distance) best = {dist, i, j};
        }
    }
    return best;
}

PeriodicCurve krasny_filter(const PeriodicCurve& c, double rel_threshold) {
    PeriodicCurve out = c;
    out.x = spectral::krasny_filter(c.x, rel_threshold);
    out.y = spectral::krasny_filter(c.y, rel_threshold);
    return out;
}

PeriodicCurve resample_curve(const PeriodicCurve& c, int m) {
    PeriodicCurve out;
    out.kind = c.kind;
    out.x = spectral::resample(c.x, m);
    out.y = spectral::resample(c.y, m);
    return out;
}

UniformArclengthResult resample_uniform_arclength(const PeriodicCurve& c) {
    c.check_valid();
    const int n = c.size();
    const ScalarField speed = tangent_modulus(c);
    const double mean_speed = mean(speed);
    if (mean_speed <= 0.0)
        throw Error(Errc::DegenerateTangent, "curve has vanishing mean tangent modulus");
    const double length = 2.0 * M_PI * mean_speed;
    const ScalarField primitive = spectral::antiderivative(speed);
    const double primitive_at_start = primitive[0];

    auto arclength = [&](double a) {
        return mean_speed * (a + M_PI) + spectral::eval_interpolant(primitive, a) -
               primitive_at_start;
    };

    UniformArclengthResult res;
    res.curve.kind = c.kind;
    res.curve.x.resize(n);
    res.curve.y.resize(n);
    res.source_alpha.resize(n);
    res.dalpha_dbeta.resize(n);

    double lo = -M_PI;  // arclength(-pi) = 0 and s is strictly increasing
    for (int j = 0; j < n; ++j) {
        const double target = length * static_cast<double>(j) / static_cast<double>(n);
        // Bracket the root above the previous one, then bisect with Newton
        // acceleration; pure Newton overshoots where |z_a| nearly plateaus.
        double hi = lo + 2.0 * M_PI / n;
        while (arclength(hi) < target && hi < M_PI + 1.0) hi += 2.0 * M_PI / n;
        double a = 0.5 * (lo + hi);
        for (int it = 0; it < 80; ++it) {
            const double f = arclength(a) - target;
            if (f > 0.0) hi = a;
            else lo = a;
            const double fp = spectral::eval_interpolant(speed, a);
            double next = fp > 0.0 ? a - f / fp : 0.5 * (lo + hi);
            if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
            if (std::abs(next - a) < 1e-15) {
                a = next;
                break;
            }
            a = next;
        }
        lo = a;  // targets increase with j
        const double beta = grid_alpha(n, j);
        res.source_alpha[j] = a;
        res.dalpha_dbeta[j] = length / (2.0 * M_PI * spectral::eval_interpolant(speed, a));
        if (c.kind == CurveKind::physical_periodic) {
            res.curve.x[j] = spectral::eval_interpolant(c.x, a) + a - beta;
        } else {
            res.curve.x[j] = spectral::eval_interpolant(c.x, a);
        }
        res.curve.y[j] = spectral::eval_interpolant(c.y, a);
    }
    return res;
}

namespace {

int circular_index_distance(int n, int i, int j) {
    int d = std::abs(i - j) % n;
    return std::min(d, n - d);
}

struct TouchPair {
    int i, j;
    double dist;
};

// Max arc-chord ratio over pairs that survive excising the nodes within
// radius (in parameter) of alpha_center.
double excised_arc_chord(const PeriodicCurve& c, double alpha_center, double radius) {
    const int n = c.size();
    std::vector<bool> keep(n);
    for (int j = 0; j < n; ++j) {
        double d = c.alpha(j) - alpha_center;
        d -= 2.0 * M_PI * std::round(d / (2.0 * M_PI));
        keep[j] = std::abs(d) > radius;
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        for (int j = i + 1; j < n; ++j) {
            if (!keep[j]) continue;
            const double beta = wrapped_param_distance(n, i, j);
            const double dist = periodic_chord(c, i, j).norm();
            worst = std::max(worst, dist > 0.0 ? beta / dist
                                               : std::numeric_limits<double>::infinity());
        }
    }
    return worst;
}

// All y-values where the interface crosses the vertical line x = x_line,
// by linear interpolation between consecutive nodes (wrap included).
std::vector<double> vertical_crossings(const PeriodicCurve& c, double x_line) {
    const int n = c.size();
    std::vector<double> ys;
    for (int j = 0; j < n; ++j) {
        const Vec2 a = c.point(j);
        Vec2 b = c.point((j + 1) % n);
        if (j == n - 1 && c.kind == CurveKind::physical_periodic) b.x += 2.0 * M_PI;
        const double fa = a.x - x_line, fb = b.x - x_line;
        if (fa == 0.0) ys.push_back(a.y);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
            ys.push_back(a.y + (b.y - a.y) * (-fa) / (fb - fa));
    }
    return ys;
}

}  // namespace

ValidationReport validate_splash_curve(const PeriodicCurve& c, const BranchSpec& branch) {
    c.check_valid();
    if (c.kind != CurveKind::physical_periodic)
        throw Error(Errc::InvalidArgument, "splash validation expects a physical curve");
    const int n = c.size();
    ValidationReport rep;

    rep.fourier_tail = std::max(spectral::fourier_tail_fraction(c.x),
                                spectral::fourier_tail_fraction(c.y));
    rep.periodic_smooth = rep.fourier_tail < 1e-6;

    const double touch_tol = 1e-8 * curve_diameter(c);
    std::vector<TouchPair> touches;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (circular_index_distance(n, i, j) <= n / 16) continue;
            const double dist = periodic_chord(c, i, j).norm();
            if (dist < touch_tol) touches.push_back({i, j, dist});
        }

    // Cluster touching pairs; distinct clusters mean distinct intersection
    // points (fig. 5-style curves are rejected here).
    std::vector<TouchPair> clusters;
    for (const TouchPair& t : touches) {
        bool merged = false;
        for (TouchPair& cl : clusters) {
            if (circular_index_distance(n, t.i, cl.i) <= n / 32 &&
                circular_index_distance(n, t.j, cl.j) <= n / 32) {
                if (t.dist < cl.dist) cl = t;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back(t);
    }
    rep.touch_cluster_count = static_cast<int>(clusters.size());
    rep.single_self_intersection = clusters.size() == 1;

    if (!clusters.empty()) {
        const TouchPair& best = clusters.front();
        rep.alpha1 = c.alpha(best.i);
        rep.alpha2 = c.alpha(best.j);
        const ScalarField speed = tangent_modulus(c);
        rep.tangent_modulus_1 = speed[best.i];
        rep.tangent_modulus_2 = speed[best.j];
        const double radius = M_PI / 16.0;
        rep.excised_arc_chord = std::max(excised_arc_chord(c, rep.alpha1, radius),
                                         excised_arc_chord(c, rep.alpha2, radius));
        rep.excised_arc_chord_ok = rep.excised_arc_chord < 1e4;
    }

    try {
        const PeriodicCurve tilde = map_curve(c, MapDirection::to_tilde, branch);
        double spacing = 0.0;
        for (int j = 0; j < n; ++j)
            spacing += (tilde.point((j + 1) % n) - tilde.point(j)).norm();
        spacing /= n;
        rep.tilde_closure_gap = (tilde.point(0) - tilde.point(n - 1)).norm();
        rep.tilde_closed_ok = rep.tilde_closure_gap < 10.0 * spacing;
        rep.tilde_arc_chord = arc_chord(tilde);
        rep.tilde_arc_chord_ok = rep.tilde_arc_chord < 1e6;

        const SingularPointSet& qset = SingularPointSet::standard();
        for (int l = 0; l < 5; ++l) {
            double d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) d = std::min(d, (tilde.point(j) - qset.points[l]).norm());
            rep.q_distances[l] = d;
        }
        rep.q_distance_ok = *std::min_element(rep.q_distances.begin(), rep.q_distances.end()) > 1e-6;
    } catch (const Error&) {
        rep.tilde_closed_ok = false;
        rep.tilde_arc_chord_ok = false;
        rep.q_distance_ok = false;
    }

    bool below = true;
    for (double x_line : {M_PI, -M_PI})
        for (double yc : vertical_crossings(c, x_line))
            if (yc >= 0.0) below = false;
    rep.passes_below_pi = below;

    return rep;
}

}  // namespace splashwave
