#pragma once

#include <string>

#include "splashwave/evolution.hpp"

namespace splashwave {

struct PresetSpec {
    enum class Id { paper_splash, flat_test, circle_test, custom };
    Id id = Id::paper_splash;
    // Custom tables (k counting from 1):
    //   z1 = alpha + sum a_k sin(k alpha), z2 = sum b_k cos(k alpha),
    //   psi_alpha = sum c_k cos(k alpha).
    std::vector<double> z1_sin, z2_cos, psi_cos;
};

PresetSpec preset_from_name(const std::string& name);
std::string preset_name(PresetSpec::Id id);

struct PresetData {
    PeriodicCurve curve;    // physical frame (circle_test: already a closed contour)
    ScalarField psi_alpha;  // normal velocity data Psi_alpha on the nodes
};

/// The splash initial data sampled exactly from its closed forms: the curve
/// touches itself at (0, 3/10) for alpha = +-pi/2 and the pure-cosine
/// normal data integrates to zero.
PresetData preset_paper_splash(int n);

/// Small-amplitude graph, exercising the near-flat regime.
PresetData preset_flat_test(int n);

/// Synthetic closed contour (radius 1/2, clear of every q^l) for machinery
/// smoke runs; not a physical water interface.
PresetData preset_circle_test(int n);

PresetData build_preset(const PresetSpec& spec, int n);

/// Builds the evolution state: maps the curve to the tilde frame (unless the
/// map is the identity or the curve is already closed), solves the
/// normal-data problem for omega, and reconstructs Phi for the BHL form.
WaveState initial_state(const PresetData& data, Formulation formulation, const DomainMap& map,
                        const SolveOptions& opts = {}, ScalarField* omega_out = nullptr);

}  // namespace splashwave
