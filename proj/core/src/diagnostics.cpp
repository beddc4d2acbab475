#include "splashwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splashwave/spectral.hpp"

namespace splashwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField subsample(const ScalarField& f, int k) {
    if (k == 1) return f;
    ScalarField out(f.size() / k);
    for (size_t j = 0; j < out.size(); ++j) out[j] = f[k * j];
    return out;
}

PeriodicCurve subsample(const PeriodicCurve& c, int k) {
    if (k == 1) return c;
    PeriodicCurve out;
    out.kind = c.kind;
    out.x = subsample(c.x, k);
    out.y = subsample(c.y, k);
    return out;
}

// ||f||_{H^{s+1/2}}^2 via ||f||_{H^s}^2 + ||Lambda^{1/2} d^s f||_{L^2}^2.
double half_norm_sq(const ScalarField& f, int s) {
    const double a = spectral::sobolev_norm(f, s);
    const double b = l2_norm(spectral::lambda_half(spectral::derivative(f, s)));
    return a * a + b * b;
}

}  // namespace

ScalarField varphi(const PeriodicCurve& curve, const ScalarField& omega,
                   const ScalarField& c_tilde, const DomainMap& map) {
    const int n = curve.size();
    const auto z_alpha = curve_derivative(curve, 1);
    ScalarField out(n);
    for (int j = 0; j < n; ++j) {
        const double za = z_alpha[j].norm();
        if (za < 1e-8)
            throw Error(Errc::DegenerateTangent, "tangent vanishes at node " + std::to_string(j));
        out[j] = 0.5 * map.q_squared_at(curve.point(j)) * omega[j] / za - c_tilde[j] * za;
    }
    return out;
}

TrajectoryWindow make_window(const Snapshot& prev, const Snapshot& mid, const Snapshot& next) {
    if (prev.tilde.size() != mid.tilde.size() || next.tilde.size() != mid.tilde.size())
        throw Error(Errc::GridMismatch, "window snapshots live on different grids");
    const double s1 = mid.time - prev.time;
    const double s2 = next.time - mid.time;
    if (!(s1 > 0.0) || !(s2 > 0.0) || std::abs(s1 - s2) > 1e-6 * s1)
        throw Error(Errc::MismatchedWindow, "window times are not uniformly spaced");
    return {&prev, &mid, &next, 0.5 * (s1 + s2)};
}

TrajectoryWindow window_at(const Trajectory& traj, int mid_index) {
    if (mid_index < 1 || mid_index + 1 >= static_cast<int>(traj.snapshots.size()))
        throw Error(Errc::MismatchedWindow, "no centered window at this snapshot");
    return make_window(traj.snapshots[mid_index - 1], traj.snapshots[mid_index],
                       traj.snapshots[mid_index + 1]);
}

ScalarField rayleigh_taylor_sigma(const TrajectoryWindow& window, const DomainMap& map,
                                  OmegaGauge gauge) {
    const PeriodicCurve& z = window.mid->tilde;
    const ScalarField& omega = window.mid->omega;
    const int n = z.size();
    const double inv2dt = 0.5 / window.spacing;

    const VelocityField brv = br(z, omega);
    const VelocityField brv_prev = br(window.prev->tilde, window.prev->omega);
    const VelocityField brv_next = br(window.next->tilde, window.next->omega);

    const auto za = curve_derivative(z, 1);
    const auto zaa = curve_derivative(z, 2);
    const auto za_prev = curve_derivative(window.prev->tilde, 1);
    const auto za_next = curve_derivative(window.next->tilde, 1);

    ScalarField phi(n, 0.0);
    if (gauge == OmegaGauge::length_preserving)
        phi = varphi(z, omega, tangential_c(z, omega, map, &brv), map);

    const VelocityField bra = br_alpha_of(brv);
    const VelocityField u = interface_velocity(z, omega, &brv);

    ScalarField sigma(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 nperp = za[j].perp();
        const double mod_za = za[j].norm();
        if (mod_za < 1e-8)
            throw Error(Errc::DegenerateTangent, "tangent vanishes at node " + std::to_string(j));
        const double ratio = phi[j] / mod_za;

        const Vec2 br_t = (brv_next[j] - brv_prev[j]) * inv2dt;
        const Vec2 za_t = (za_next[j] - za_prev[j]) * inv2dt;

        const Vec2 p = z.point(j);
        const double q2 = map.q_squared_at(p);

        const double t1 = (br_t + bra[j] * ratio).dot(nperp);
        const double t2 = omega[j] / (2.0 * mod_za * mod_za) * (za_t + zaa[j] * ratio).dot(nperp);
        const double t3 = std::sqrt(q2) * u[j].norm2() * map.grad_q_at(p).dot(nperp);
        const double t4 = map.grad_height_at(p).dot(nperp);
        sigma[j] = t1 + t2 + t3 + t4;
    }
    return sigma;
}

EnergySnapshot energy(const TrajectoryWindow& window, const DomainMap& map, OmegaGauge gauge) {
    const Snapshot& snap = *window.mid;
    const PeriodicCurve& z = snap.tilde;
    const ScalarField& omega = snap.omega;
    const int n = z.size();

    EnergySnapshot e;
    e.time = snap.time;
    e.h3_z = std::pow(curve_sobolev_norm(z, 3), 2);
    {
        const double f = arc_chord(z);
        e.arc_chord_sq = f * f;
    }
    e.h2_omega = std::pow(spectral::sobolev_norm(omega, 2), 2);

    const ScalarField phi = varphi(z, omega, tangential_c(z, omega, map), map);
    e.h3half_varphi = half_norm_sq(phi, 3);

    const ScalarField sigma = rayleigh_taylor_sigma(window, map, gauge);
    const auto za = curve_derivative(z, 1);
    const auto d4 = curve_derivative(z, 4);

    double min_w = kInf, max_za2 = 0.0, weighted = 0.0;
    for (int j = 0; j < n; ++j) {
        const double q2 = map.q_squared_at(z.point(j));
        const double w = q2 * sigma[j];
        min_w = std::min(min_w, w);
        const double za2 = za[j].norm2();
        max_za2 = std::max(max_za2, za2);
        weighted += w / za2 * d4[j].norm2();
    }
    weighted *= 2.0 * M_PI / static_cast<double>(n);

    e.min_q2_sigma = min_w;
    e.rayleigh_taylor_positive = min_w > 0.0;
    e.weighted_h4 = e.rayleigh_taylor_positive ? weighted : kInf;
    e.tangent_over_rt = e.rayleigh_taylor_positive ? max_za2 / min_w : kInf;

    if (map.is_identity()) {
        e.inv_qdist.fill(0.0);
    } else {
        const SingularPointSet& qset = SingularPointSet::standard();
        for (int l = 0; l < 5; ++l) {
            double d = kInf;
            for (int j = 0; j < n; ++j) d = std::min(d, (z.point(j) - qset.points[l]).norm());
            e.inv_qdist[l] = 1.0 / d;
        }
    }

    e.total = e.h3_z + e.weighted_h4 + e.arc_chord_sq + e.h2_omega + e.h3half_varphi +
              e.tangent_over_rt;
    for (double v : e.inv_qdist) e.total += v;
    return e;
}

BTerms b_terms(const PeriodicCurve& x, const ScalarField& gamma,
               const std::vector<Vec2>& f_field, const DomainMap& map,
               const VelocityField* br_values) {
    const int n = x.size();
    BTerms out;
    out.b_s = tangential_c(x, gamma, map, br_values);

    const auto x_alpha = curve_derivative(x, 1);
    ScalarField fx(n), fy(n);
    for (int j = 0; j < n; ++j) {
        fx[j] = f_field[j].x;
        fy[j] = f_field[j].y;
    }
    fx = spectral::derivative(fx, 1);
    fy = spectral::derivative(fy, 1);
    ScalarField integrand(n);
    for (int j = 0; j < n; ++j) {
        const double xa2 = x_alpha[j].norm2();
        if (xa2 < 1e-16)
            throw Error(Errc::DegenerateTangent, "tangent vanishes at node " + std::to_string(j));
        integrand[j] = (fx[j] * x_alpha[j].x + fy[j] * x_alpha[j].y) / xa2;
    }
    out.b_e = cumulative_gauge(integrand);

    out.b.resize(n);
    for (int j = 0; j < n; ++j) out.b[j] = out.b_s[j] + out.b_e[j];
    return out;
}

namespace {

struct WindowResiduals {
    std::vector<Vec2> f;
    ScalarField g;
    double f_norm = 0.0;
    double g_norm = 0.0;
    BTerms b;
};

WindowResiduals window_residuals(const TrajectoryWindow& window, const DomainMap& map) {
    const PeriodicCurve& x = window.mid->tilde;
    const ScalarField& gamma = window.mid->omega;
    const int n = x.size();
    const double inv2dt = 0.5 / window.spacing;

    const VelocityField brv = br(x, gamma);
    const VelocityField brv_prev = br(window.prev->tilde, window.prev->omega);
    const VelocityField brv_next = br(window.next->tilde, window.next->omega);
    const VelocityField bra = br_alpha_of(brv);
    const auto x_alpha = curve_derivative(x, 1);

    ScalarField q2(n), height(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 p = x.point(j);
        q2[j] = map.q_squared_at(p);
        height[j] = map.height_at(p);
    }
    const ScalarField q2_alpha = spectral::derivative(q2, 1);
    const ScalarField height_alpha = spectral::derivative(height, 1);

    std::vector<Vec2> x_t(n);
    ScalarField gamma_t(n);
    for (int j = 0; j < n; ++j) {
        x_t[j] = Vec2{window.next->tilde.x[j] - window.prev->tilde.x[j],
                      window.next->tilde.y[j] - window.prev->tilde.y[j]} *
                 inv2dt;
        gamma_t[j] = (window.next->omega[j] - window.prev->omega[j]) * inv2dt;
    }

    // f solves the linear equation f + b_e[f] x_alpha = x_t - Q^2 BR - b_s x_alpha
    // (b_e is linear in f); a short Krylov solve handles it without assuming
    // the naive sweep contracts.
    WindowResiduals res;
    const ScalarField b_s = tangential_c(x, gamma, map, &brv);

    auto b_e_of = [&](const std::vector<Vec2>& f) {
        ScalarField fx(n), fy(n);
        for (int j = 0; j < n; ++j) {
            fx[j] = f[j].x;
            fy[j] = f[j].y;
        }
        fx = spectral::derivative(fx, 1);
        fy = spectral::derivative(fy, 1);
        ScalarField integrand(n);
        for (int j = 0; j < n; ++j)
            integrand[j] = (fx[j] * x_alpha[j].x + fy[j] * x_alpha[j].y) / x_alpha[j].norm2();
        return cumulative_gauge(integrand);
    };

    ScalarField rhs_packed(2 * n);
    for (int j = 0; j < n; ++j) {
        const Vec2 v = x_t[j] - brv[j] * q2[j] - x_alpha[j] * b_s[j];
        rhs_packed[j] = v.x;
        rhs_packed[n + j] = v.y;
    }
    auto apply_packed = [&](const ScalarField& packed) {
        std::vector<Vec2> f(n);
        for (int j = 0; j < n; ++j) f[j] = {packed[j], packed[n + j]};
        const ScalarField be = b_e_of(f);
        ScalarField out(2 * n);
        for (int j = 0; j < n; ++j) {
            const Vec2 v = f[j] + x_alpha[j] * be[j];
            out[j] = v.x;
            out[n + j] = v.y;
        }
        return out;
    };
    SolveOptions fopts;
    fopts.max_iterations = 2 * n + 16;
    fopts.residual_tolerance = 1e-13 * std::max(1.0, l2_norm(rhs_packed));
    SolveReport freport;
    const ScalarField f_packed = solve_linear(apply_packed, rhs_packed, fopts, nullptr, &freport);
    {
        ScalarField check = apply_packed(f_packed);
        for (int j = 0; j < 2 * n; ++j) check[j] -= rhs_packed[j];
        const double res = l2_norm(check);
        if (res > fopts.residual_tolerance) {
            freport.residual_history.push_back(res);
            throw NonConvergenceError("residual gauge solve stalled at " + std::to_string(res),
                                      freport.residual_history);
        }
    }

    res.f.resize(n);
    for (int j = 0; j < n; ++j) res.f[j] = {f_packed[j], f_packed[n + j]};
    res.b.b_s = b_s;
    res.b.b_e = b_e_of(res.f);
    res.b.b.resize(n);
    for (int j = 0; j < n; ++j) res.b.b[j] = b_s[j] + res.b.b_e[j];

    ScalarField b_gamma(n), flux(n);
    for (int j = 0; j < n; ++j) {
        b_gamma[j] = res.b.b[j] * gamma[j];
        flux[j] = 0.25 * q2[j] * gamma[j] * gamma[j] / x_alpha[j].norm2();
    }
    const ScalarField b_gamma_alpha = spectral::derivative(b_gamma, 1);
    const ScalarField flux_alpha = spectral::derivative(flux, 1);

    res.g.resize(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 br_t = (brv_next[j] - brv_prev[j]) * inv2dt;
        res.g[j] = gamma_t[j] + 2.0 * br_t.dot(x_alpha[j]) + q2_alpha[j] * brv[j].norm2() -
                   2.0 * res.b.b[j] * bra[j].dot(x_alpha[j]) - b_gamma_alpha[j] + flux_alpha[j] +
                   2.0 * height_alpha[j];
    }

    ScalarField fx(n), fy(n);
    for (int j = 0; j < n; ++j) {
        fx[j] = res.f[j].x;
        fy[j] = res.f[j].y;
    }
    res.f_norm = std::sqrt(half_norm_sq(fx, 5) + half_norm_sq(fy, 5));
    res.g_norm = std::sqrt(half_norm_sq(res.g, 3));
    return res;
}

}  // namespace

ResidualSeries residuals(const Trajectory& traj, const DomainMap& map, int stride) {
    if (stride < 1) throw Error(Errc::InvalidArgument, "stride must be >= 1");
    std::vector<const Snapshot*> snaps;
    for (size_t i = 0; i < traj.snapshots.size(); i += stride)
        snaps.push_back(&traj.snapshots[i]);
    if (snaps.size() < 3)
        throw Error(Errc::MismatchedWindow, "need at least three snapshots for residuals");

    ResidualSeries series;
    for (size_t k = 1; k + 1 < snaps.size(); ++k) {
        TrajectoryWindow window;
        try {
            window = make_window(*snaps[k - 1], *snaps[k], *snaps[k + 1]);
        } catch (const Error& e) {
            if (e.code() == Errc::MismatchedWindow) continue;  // ragged tail snapshot
            throw;
        }
        WindowResiduals wr = window_residuals(window, map);
        series.time.push_back(snaps[k]->time);
        series.f.push_back(std::move(wr.f));
        series.g.push_back(std::move(wr.g));
        series.f_norm.push_back(wr.f_norm);
        series.g_norm.push_back(wr.g_norm);
        const double nu = wr.f_norm + wr.g_norm;
        series.delta.push_back(2.0 * nu * nu);
    }
    return series;
}

std::vector<StabilityRecord> stability_energy(const Trajectory& reference,
                                              const Trajectory& perturbed,
                                              const DomainMap& map) {
    if (reference.snapshots.empty() || perturbed.snapshots.empty())
        throw Error(Errc::MismatchedWindow, "empty trajectory");

    const int n_ref = reference.snapshots.front().tilde.size();
    const int n_pert = perturbed.snapshots.front().tilde.size();
    if (n_ref % n_pert != 0)
        throw Error(Errc::GridMismatch, "reference grid is not a refinement of the perturbed one");
    const int k_sub = n_ref / n_pert;
    if (reference.snapshots.front().tilde.kind != perturbed.snapshots.front().tilde.kind)
        throw Error(Errc::GridMismatch, "trajectories live in different frames");

    // Match snapshots by time.
    std::vector<std::pair<int, int>> matched;
    size_t r = 0;
    for (size_t p = 0; p < perturbed.snapshots.size(); ++p) {
        const double t = perturbed.snapshots[p].time;
        while (r < reference.snapshots.size() &&
               reference.snapshots[r].time < t - 1e-12 - 1e-9 * std::abs(t))
            ++r;
        if (r < reference.snapshots.size() &&
            std::abs(reference.snapshots[r].time - t) <= 1e-12 + 1e-9 * std::abs(t))
            matched.emplace_back(static_cast<int>(r), static_cast<int>(p));
    }
    if (matched.size() < 3)
        throw Error(Errc::MismatchedWindow, "fewer than three common snapshot times");

    std::vector<StabilityRecord> records;
    for (size_t m = 1; m + 1 < matched.size(); ++m) {
        TrajectoryWindow ref_window, pert_window;
        try {
            ref_window = make_window(reference.snapshots[matched[m - 1].first],
                                     reference.snapshots[matched[m].first],
                                     reference.snapshots[matched[m + 1].first]);
            pert_window = make_window(perturbed.snapshots[matched[m - 1].second],
                                      perturbed.snapshots[matched[m].second],
                                      perturbed.snapshots[matched[m + 1].second]);
        } catch (const Error& e) {
            if (e.code() == Errc::MismatchedWindow) continue;
            throw;
        }

        const Snapshot& ref_snap = *ref_window.mid;
        const Snapshot& pert_snap = *pert_window.mid;
        const PeriodicCurve& x = pert_snap.tilde;
        const ScalarField& gamma = pert_snap.omega;
        const int n = n_pert;

        // Reference weight Q^2 sigma_z / |z_a|^2 on its own grid, then
        // restricted to the shared nodes.
        const ScalarField sigma_ref =
            rayleigh_taylor_sigma(ref_window, map, reference.gauge);
        const auto za_ref = curve_derivative(ref_snap.tilde, 1);
        ScalarField weight_fine(n_ref);
        for (int j = 0; j < n_ref; ++j)
            weight_fine[j] = map.q_squared_at(ref_snap.tilde.point(j)) * sigma_ref[j] /
                             za_ref[j].norm2();
        const ScalarField weight = subsample(weight_fine, k_sub);

        const PeriodicCurve z_coarse = subsample(ref_snap.tilde, k_sub);
        const ScalarField omega_coarse = subsample(ref_snap.omega, k_sub);
        const ScalarField phi_ref_fine = varphi(
            ref_snap.tilde, ref_snap.omega,
            tangential_c(ref_snap.tilde, ref_snap.omega, map), map);
        const ScalarField phi_ref = subsample(phi_ref_fine, k_sub);

        WindowResiduals wr = window_residuals(pert_window, map);

        const auto x_alpha = curve_derivative(x, 1);
        ScalarField zeta(n);
        for (int j = 0; j < n; ++j) {
            const double xa = x_alpha[j].norm();
            zeta[j] = 0.5 * map.q_squared_at(x.point(j)) * gamma[j] / xa - wr.b.b_s[j] * xa;
        }

        ScalarField Dx(n), Dy(n), d(n), DD(n);
        for (int j = 0; j < n; ++j) {
            Dx[j] = z_coarse.x[j] - x.x[j];
            Dy[j] = z_coarse.y[j] - x.y[j];
            d[j] = omega_coarse[j] - gamma[j];
            DD[j] = phi_ref[j] - zeta[j];
        }

        StabilityRecord rec;
        rec.time = pert_snap.time;
        rec.D_h3_sq = std::pow(spectral::sobolev_norm(Dx, 3), 2) +
                      std::pow(spectral::sobolev_norm(Dy, 3), 2);
        const ScalarField d4x = spectral::derivative(Dx, 4);
        const ScalarField d4y = spectral::derivative(Dy, 4);
        double weighted = 0.0;
        for (int j = 0; j < n; ++j)
            weighted += weight[j] * (d4x[j] * d4x[j] + d4y[j] * d4y[j]);
        rec.D_h4_weighted = weighted * 2.0 * M_PI / static_cast<double>(n);
        rec.d_h2_sq = std::pow(spectral::sobolev_norm(d, 2), 2);
        rec.DD_h3half_sq = half_norm_sq(DD, 3);
        rec.energy = rec.D_h3_sq + rec.D_h4_weighted + rec.d_h2_sq + rec.DD_h3half_sq;
        rec.b_norm = l2_norm(wr.b.b);
        rec.b_s_norm = l2_norm(wr.b.b_s);
        rec.b_e_norm = l2_norm(wr.b.b_e);
        rec.f_norm = wr.f_norm;
        rec.g_norm = wr.g_norm;
        const double nu = wr.f_norm + wr.g_norm;
        rec.delta = 2.0 * nu * nu;
        records.push_back(rec);
    }
    return records;
}

GronwallFit gronwall_fit(const std::vector<double>& times, const std::vector<double>& energy,
                         const std::vector<double>& delta) {
    if (times.size() != energy.size() || times.size() < 3)
        throw Error(Errc::DegenerateSeries, "need at least three uniform samples");
    const double h = times[1] - times[0];
    for (size_t i = 1; i + 1 < times.size(); ++i)
        if (std::abs((times[i + 1] - times[i]) - h) > 1e-6 * h)
            throw Error(Errc::MismatchedWindow, "series not uniformly sampled");

    GronwallFit fit;
    fit.eps2 = 0.0;
    for (double dv : delta) fit.eps2 = std::max(fit.eps2, dv);

    bool all_zero = true;
    for (double e : energy)
        if (e != 0.0) all_zero = false;
    if (all_zero) return fit;  // C1 = 0, eps2 = max delta

    constexpr double kC1Cap = 1e12;
    double c1 = 0.0;
    for (size_t i = 1; i + 1 < energy.size(); ++i) {
        const double rate = std::abs((energy[i + 1] - energy[i - 1]) / (2.0 * h));
        const double excess = rate - fit.eps2;
        if (excess <= 0.0) continue;
        if (energy[i] > 0.0)
            c1 = std::max(c1, excess / energy[i]);
        else
            c1 = kC1Cap;  // positive rate with zero energy: no finite C1
    }
    fit.c1 = std::min(c1, kC1Cap);

    double violation = 0.0;
    for (size_t i = 1; i + 1 < energy.size(); ++i) {
        const double rate = std::abs((energy[i + 1] - energy[i - 1]) / (2.0 * h));
        violation = std::max(violation, rate - fit.c1 * energy[i] - fit.eps2);
    }
    fit.max_violation = std::max(violation, 0.0);
    return fit;
}

SplashDetectResult splash_detect(const PeriodicCurve& curve) {
    const MinGapResult gap = min_node_gap(curve, curve.size() / 16);
    SplashDetectResult res;
    res.min_gap = gap.distance;
    res.i = gap.i;
    res.j = gap.j;
    res.alpha_i = curve.alpha(gap.i);
    res.alpha_j = curve.alpha(gap.j);
    return res;
}

double analyticity_radius(const ScalarField& f) {
    const int n = static_cast<int>(f.size());
    const auto spec = spectral::forward(f);
    const double inv_n = 1.0 / static_cast<double>(n);

    double peak = 0.0;
    for (const Complex& c : spec) peak = std::max(peak, std::abs(c) * inv_n);
    if (peak == 0.0) return 0.0;
    const double floor = 1e-13 * peak;

    const int k_lo = std::max(1, n / 8);
    const int k_hi = std::min(n / 2, 3 * n / 8);
    std::vector<double> mods;
    for (int k = k_lo; k <= k_hi; ++k) mods.push_back(std::abs(spec[k]) * inv_n);
    if (mods.empty()) return 0.0;

    std::vector<double> sorted = mods;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (median <= floor) return 0.0;  // tail at the filter floor: nothing to fit

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double m = mods[k - k_lo];
        if (m <= 0.0) continue;
        const double lx = static_cast<double>(k), ly = std::log(m);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 2) return 0.0;
    const double slope =
        (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return -slope;
}

}  // namespace splashwave
