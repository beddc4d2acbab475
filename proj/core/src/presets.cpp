#include "splashwave/presets.hpp"

#include <cmath>

#include "splashwave/spectral.hpp"

namespace splashwave {

PresetSpec preset_from_name(const std::string& name) {
    PresetSpec spec;
    if (name == "paper_splash") {
        spec.id = PresetSpec::Id::paper_splash;
    } else if (name == "flat_test") {
        spec.id = PresetSpec::Id::flat_test;
    } else if (name == "circle_test") {
        spec.id = PresetSpec::Id::circle_test;
    } else if (name == "custom") {
        spec.id = PresetSpec::Id::custom;
    } else {
        throw Error(Errc::InvalidArgument, "unknown preset '" + name + "'");
    }
    return spec;
}

std::string preset_name(PresetSpec::Id id) {
    switch (id) {
        case PresetSpec::Id::paper_splash: return "paper_splash";
        case PresetSpec::Id::flat_test: return "flat_test";
        case PresetSpec::Id::circle_test: return "circle_test";
        case PresetSpec::Id::custom: return "custom";
    }
    return "?";
}

PresetData preset_paper_splash(int n) {
    PresetData data;
    data.curve.kind = CurveKind::physical_periodic;
    data.curve.x.resize(n);
    data.curve.y.resize(n);
    data.psi_alpha.resize(n);
    const double s1 = 0.25 * (-1.5 * M_PI - 1.9);
    const double s3 = 0.25 * (0.5 * M_PI - 1.9);
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        data.curve.x[j] = s1 * std::sin(a) + 0.5 * std::sin(2.0 * a) + s3 * std::sin(3.0 * a);
        data.curve.y[j] = 0.1 * std::cos(a) - 0.3 * std::cos(2.0 * a) + 0.1 * std::cos(3.0 * a);
        data.psi_alpha[j] = 3.0 * std::cos(a) - 3.4 * std::cos(2.0 * a) + std::cos(3.0 * a) +
                            0.2 * std::cos(4.0 * a);
    }
    return data;
}

PresetData preset_flat_test(int n) {
    PresetData data;
    data.curve.kind = CurveKind::physical_periodic;
    data.curve.x.assign(n, 0.0);
    data.curve.y.resize(n);
    data.psi_alpha.resize(n);
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        data.curve.y[j] = -0.5 + 1e-3 * std::cos(a);
        data.psi_alpha[j] = 1e-3 * std::cos(a);
    }
    return data;
}

PresetData preset_circle_test(int n) {
    PresetData data;
    data.curve.kind = CurveKind::tilde_closed;
    data.curve.x.resize(n);
    data.curve.y.resize(n);
    data.psi_alpha.resize(n);
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        data.curve.x[j] = 0.5 * std::cos(a);
        data.curve.y[j] = 0.5 * std::sin(a);
        data.psi_alpha[j] = std::cos(a);
    }
    return data;
}

PresetData build_preset(const PresetSpec& spec, int n) {
    switch (spec.id) {
        case PresetSpec::Id::paper_splash: return preset_paper_splash(n);
        case PresetSpec::Id::flat_test: return preset_flat_test(n);
        case PresetSpec::Id::circle_test: return preset_circle_test(n);
        case PresetSpec::Id::custom: break;
    }
    const size_t max_len = static_cast<size_t>(n) / 4;
    if (spec.z1_sin.size() > max_len || spec.z2_cos.size() > max_len ||
        spec.psi_cos.size() > max_len)
        throw Error(Errc::InvalidArgument, "custom coefficient table longer than n/4");
    PresetData data;
    data.curve.kind = CurveKind::physical_periodic;
    data.curve.x.assign(n, 0.0);
    data.curve.y.assign(n, 0.0);
    data.psi_alpha.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double a = grid_alpha(n, j);
        for (size_t k = 0; k < spec.z1_sin.size(); ++k)
            data.curve.x[j] += spec.z1_sin[k] * std::sin((k + 1) * a);
        for (size_t k = 0; k < spec.z2_cos.size(); ++k)
            data.curve.y[j] += spec.z2_cos[k] * std::cos((k + 1) * a);
        for (size_t k = 0; k < spec.psi_cos.size(); ++k)
            data.psi_alpha[j] += spec.psi_cos[k] * std::cos((k + 1) * a);
    }
    return data;
}

WaveState initial_state(const PresetData& data, Formulation formulation, const DomainMap& map,
                        const SolveOptions& opts, ScalarField* omega_out) {
    WaveState state;
    state.formulation = formulation;
    if (data.curve.kind == CurveKind::physical_periodic && !map.is_identity()) {
        state.curve = map_curve(data.curve, MapDirection::to_tilde);
    } else {
        state.curve = data.curve;
    }

    // Psi is a boundary restriction, so its samples carry over to the tilde
    // frame unchanged.
    const ScalarField omega = omega_from_psi(state.curve, data.psi_alpha, opts);

    if (formulation == Formulation::omega_form) {
        state.omega = omega;
    } else {
        const VelocityField v = br(state.curve, omega);
        const auto z_alpha = curve_derivative(state.curve, 1);
        ScalarField phi_alpha(state.curve.size());
        for (int j = 0; j < state.curve.size(); ++j)
            phi_alpha[j] = 0.5 * omega[j] + v[j].dot(z_alpha[j]);
        // Phi is periodic, so phi_alpha carries no mean; drop the
        // quadrature-level remnant before integrating.
        const double m = mean(phi_alpha);
        for (double& v2 : phi_alpha) v2 -= m;
        state.phi = spectral::antiderivative(phi_alpha);
    }
    if (omega_out) *omega_out = omega;
    return state;
}

}  // namespace splashwave
