#pragma once

#include <functional>
#include <string>

#include "splashwave/birkhoff_rott.hpp"
#include "splashwave/conformal.hpp"
#include "splashwave/curve.hpp"
#include "splashwave/types.hpp"

namespace splashwave {

/// bhl evolves (curve, Phi) per the transformed potential system;
/// omega_form evolves (curve, omega) per the (z, omega) system with an
/// implicit second-kind solve for omega_t.
enum class Formulation { bhl, omega_form };

/// Tangential gauge of the omega formulation. bhl_c_zero reproduces the
/// node trajectories of the c = 0 potential system; length_preserving is
/// the gauge whose tangent modulus depends on time alone (given a uniform
/// initial parametrization).
enum class OmegaGauge { bhl_c_zero, length_preserving };

enum class TimeDirection { forward, reversed };

struct WaveState {
    PeriodicCurve curve;  // tilde frame (physical frame under FlatMap runs)
    ScalarField phi;      // velocity potential samples (bhl)
    ScalarField omega;    // sheet strength samples (omega_form)
    double time = 0.0;
    Formulation formulation = Formulation::bhl;

    const ScalarField& evolved_field() const {
        return formulation == Formulation::bhl ? phi : omega;
    }
};

struct RunConfig {
    int n = 512;
    double dt = 1e-6;
    double t_final = 7e-3;
    Formulation formulation = Formulation::bhl;
    OmegaGauge omega_gauge = OmegaGauge::length_preserving;
    TimeDirection direction = TimeDirection::reversed;
    double filter_threshold = 1e-13;
    int snapshot_stride = 500;
    SolveOptions solver;

    void check_valid() const;
};

struct StateDerivative {
    std::vector<Vec2> curve_dot;
    ScalarField field_dot;   // phi_t (bhl) or omega_t (omega_form)
};

struct StepDiagnostics {
    double time = 0.0;
    double fourier_tail = 0.0;   // worst evolved-field tail fraction
    double arc_chord = 0.0;      // F of the evolved curve
    double min_q_distance = 0.0; // distance of the evolved curve to the q^l
    double min_gap = 0.0;        // non-local node gap of the evolved curve
    double graph_margin = 0.0;   // min forward difference of physical z1
};

struct Snapshot {
    double time = 0.0;
    PeriodicCurve tilde;
    PeriodicCurve physical;
    ScalarField omega;
    ScalarField phi;
    StepDiagnostics diag;
};

struct Trajectory {
    RunConfig config;
    OmegaGauge gauge = OmegaGauge::bhl_c_zero;  // gauge of the node motion
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> steps;
    std::string abort_cause;  // empty when the run completed

    bool completed() const { return abort_cause.empty(); }
    double snapshot_spacing() const;
};

/// (alpha+pi)/(2pi) * Int_T h - Int_{-pi}^alpha h for a periodic integrand h:
/// the secular parts cancel, leaving H(-pi) - H(alpha) for the zero-mean
/// primitive H. Vanishes at alpha = -pi by construction.
ScalarField cumulative_gauge(const ScalarField& integrand);

/// The section-3.2 tangential velocity: cumulative_gauge of
/// (Q^2 BR)_alpha . z_alpha / |z_alpha|^2.
ScalarField tangential_c(const PeriodicCurve& curve, const ScalarField& omega,
                         const DomainMap& map, const VelocityField* br_values = nullptr);

/// RHS of the c = 0 potential system:
///   z_t = Q^2 u,  Phi_t = Q^2 |u|^2 / 2 - P2^{-1}(z),
/// with omega recovered from Phi_alpha through the (I+J) solve.
StateDerivative rhs_bhl(const WaveState& state, const DomainMap& map,
                        const SolveOptions& opts = {},
                        const ScalarField* omega_warm_start = nullptr,
                        ScalarField* omega_out = nullptr);

/// RHS of the (z, omega) system in the requested gauge; omega_t is obtained
/// by collecting its occurrences into a second-kind equation and solving.
StateDerivative rhs_omega_form(const WaveState& state, const DomainMap& map,
                               OmegaGauge gauge, const SolveOptions& opts = {},
                               const ScalarField* omega_t_warm_start = nullptr,
                               ScalarField* omega_t_out = nullptr);

using RhsFn = std::function<StateDerivative(const WaveState&)>;

/// One classical RK4 step of an arbitrary right-hand side (no filtering).
WaveState rk4_step(const WaveState& state, double dt, const RhsFn& rhs);

/// Flips the velocity data (Phi or omega) so that forward integration of
/// the result traces the reversed trajectory.
WaveState reverse_time(const WaveState& state);

/// Stepper bundling the map, solver options, gauge, Krasny filtering and
/// the warm-start cache for the per-stage second-kind solves. One evolver
/// drives one run; it is not meant to be shared across threads.
class Evolver {
  public:
    Evolver(const DomainMap& map, SolveOptions solver, OmegaGauge gauge,
            double filter_threshold);

    StateDerivative rhs(const WaveState& state) const;
    WaveState step(const WaveState& state, double dt) const;

  private:
    const DomainMap& map_;
    SolveOptions solver_;
    OmegaGauge gauge_;
    double filter_threshold_;
    mutable ScalarField warm_;
};

StepDiagnostics evaluate_step_diagnostics(const WaveState& state, const DomainMap& map);

/// Integrates to t_final, persisting a snapshot every snapshot_stride steps.
/// Aborts (recording the cause and a final snapshot) when an error surfaces
/// or the curve drifts within 1e-6 of a q^l point or of self-intersection.
Trajectory run(const RunConfig& config, const WaveState& initial, const DomainMap& map);

}  // namespace splashwave
