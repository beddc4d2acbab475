#pragma once

#include "splashwave/types.hpp"

namespace splashwave::spectral {

/// Half-complex spectrum of a real field, FFTW r2c convention:
/// X[k] = sum_j f_j exp(-2 pi i j k / n), k = 0 .. n/2 (unnormalized).
std::vector<Complex> forward(const ScalarField& f);

/// Inverse of forward(); normalizes by 1/n. spec.size() must be n/2 + 1.
ScalarField inverse(const std::vector<Complex>& spec, int n);

/// Exact derivative of the trigonometric interpolant. The Nyquist mode is
/// zeroed for odd orders (its phase is not representable on the grid).
ScalarField derivative(const ScalarField& f, int order);

/// Periodic Hilbert transform: multiplier -i sgn(k), zero mode and Nyquist
/// mapped to zero.
ScalarField hilbert(const ScalarField& f);

/// Fractional smoothing Lambda^{1/2}: multiplier |k|^{1/2}, zero mode to 0.
ScalarField lambda_half(const ScalarField& f);

/// Primitive of the zero-mean part of f, normalized to zero mean itself.
/// The mean of f is dropped (a secular term has no periodic primitive).
ScalarField antiderivative(const ScalarField& f);

/// Sobolev norm (2 pi sum_k (1+k^2)^s |fhat_k|^2)^{1/2}, normalized so that
/// s = 0 reproduces the integral L^2 norm on (-pi, pi).
double sobolev_norm(const ScalarField& f, double s);

/// Energy fraction carried by modes |k| >= n/4 (mean excluded).
double fourier_tail_fraction(const ScalarField& f);

/// Krasny filter: zeroes every Fourier mode with modulus below
/// rel_threshold * max_k |fhat_k|. rel_threshold <= 0 is the identity.
ScalarField krasny_filter(const ScalarField& f, double rel_threshold = 1e-13);

/// Trigonometric interpolation onto an m-point grid (pad or truncate).
ScalarField resample(const ScalarField& f, int m);

/// Trigonometric interpolant of f evaluated at an arbitrary alpha.
double eval_interpolant(const ScalarField& f, double alpha);

/// Number of derivative() calls so far whose input had a Fourier tail
/// fraction above 1e-6 (under-resolution diagnostic, never fatal).
long tail_warning_count();

}  // namespace splashwave::spectral
