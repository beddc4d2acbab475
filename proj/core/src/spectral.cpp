#include "splashwave/spectral.hpp"

#include <fftw3.h>

#include <atomic>
#include <map>
#include <mutex>

namespace splashwave {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::BranchAmbiguity: return "BranchAmbiguity";
        case Errc::PoleInput: return "PoleInput";
        case Errc::SingularPointInput: return "SingularPointInput";
        case Errc::BranchTrackingFailure: return "BranchTrackingFailure";
        case Errc::SelfIntersection: return "SelfIntersection";
        case Errc::ArcChordFailure: return "ArcChordFailure";
        case Errc::DegenerateTangent: return "DegenerateTangent";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::ZeroMeanViolation: return "ZeroMeanViolation";
        case Errc::MismatchedWindow: return "MismatchedWindow";
        case Errc::GridMismatch: return "GridMismatch";
        case Errc::DegenerateSeries: return "DegenerateSeries";
        case Errc::NaNDetected: return "NaNDetected";
        case Errc::ParseError: return "ParseError";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::IOFailure: return "IOFailure";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

double mean(const ScalarField& f) {
    if (f.empty()) return 0.0;
    double s = 0.0;
    for (double v : f) s += v;
    return s / static_cast<double>(f.size());
}

double l2_norm(const ScalarField& f) {
    if (f.empty()) return 0.0;
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(2.0 * M_PI * s / static_cast<double>(f.size()));
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const ScalarField& f) {
    for (double v : f)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace splashwave

namespace splashwave::spectral {

namespace {

std::atomic<long> g_tail_warnings{0};

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// Plans are created once per size with FFTW_UNALIGNED so they can execute on
// ordinary std::vector storage via the new-array interface. Creation is
// serialized (FFTW planning is not thread-safe); execution on distinct
// arrays is.
PlanPair plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> real(n);
    std::vector<Complex> cplx(n / 2 + 1);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(n, real.data(),
                                 reinterpret_cast<fftw_complex*>(cplx.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cplx.data()),
                                 real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[n] = p;
    return p;
}

void check_size(const ScalarField& f) {
    const int n = static_cast<int>(f.size());
    if (n < 2 || n % 2 != 0)
        throw Error(Errc::InvalidArgument, "field size must be even and >= 2, got " +
                                               std::to_string(n));
}

double tail_fraction_of_spectrum(const std::vector<Complex>& spec, int n) {
    double total = 0.0, tail = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        double w = (k == n / 2) ? 1.0 : 2.0;
        double e = w * std::norm(spec[k]);
        total += e;
        if (k >= n / 4) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

std::vector<Complex> forward(const ScalarField& f) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    std::vector<double> in(f);
    std::vector<Complex> out(n / 2 + 1);
    fftw_execute_dft_r2c(plans_for(n).r2c, in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

ScalarField inverse(const std::vector<Complex>& spec, int n) {
    if (static_cast<int>(spec.size()) != n / 2 + 1)
        throw Error(Errc::InvalidArgument, "spectrum size does not match n");
    std::vector<Complex> in(spec);  // c2r destroys its input
    ScalarField out(n);
    fftw_execute_dft_c2r(plans_for(n).c2r,
                         reinterpret_cast<fftw_complex*>(in.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

ScalarField derivative(const ScalarField& f, int order) {
    check_size(f);
    if (order < 0) throw Error(Errc::InvalidArgument, "negative derivative order");
    if (order == 0) return f;
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    if (tail_fraction_of_spectrum(spec, n) > 1e-6) ++g_tail_warnings;
    for (int k = 0; k <= n / 2; ++k) {
        Complex ik(0.0, static_cast<double>(k));
        Complex m = std::pow(ik, order);
        if (k == n / 2 && order % 2 != 0) m = 0.0;
        spec[k] *= m;
    }
    return inverse(spec, n);
}

ScalarField hilbert(const ScalarField& f) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    spec[0] = 0.0;
    for (int k = 1; k < n / 2; ++k) spec[k] *= Complex(0.0, -1.0);
    spec[n / 2] = 0.0;
    return inverse(spec, n);
}

ScalarField lambda_half(const ScalarField& f) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    spec[0] = 0.0;
    for (int k = 1; k <= n / 2; ++k) spec[k] *= std::sqrt(static_cast<double>(k));
    return inverse(spec, n);
}

ScalarField antiderivative(const ScalarField& f) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    spec[0] = 0.0;
    for (int k = 1; k < n / 2; ++k) spec[k] /= Complex(0.0, static_cast<double>(k));
    spec[n / 2] = 0.0;
    return inverse(spec, n);
}

double sobolev_norm(const ScalarField& f, double s) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    const double inv_n = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    for (int k = 0; k <= n / 2; ++k) {
        double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        double kk = static_cast<double>(k);
        sum += w * std::pow(1.0 + kk * kk, s) * std::norm(spec[k] * inv_n);
    }
    return std::sqrt(2.0 * M_PI * sum);
}

double fourier_tail_fraction(const ScalarField& f) {
    check_size(f);
    return tail_fraction_of_spectrum(forward(f), static_cast<int>(f.size()));
}

ScalarField krasny_filter(const ScalarField& f, double rel_threshold) {
    check_size(f);
    if (rel_threshold <= 0.0) return f;
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    double peak = 0.0;
    for (const Complex& c : spec) peak = std::max(peak, std::abs(c));
    const double cutoff = rel_threshold * peak;
    for (Complex& c : spec)
        if (std::abs(c) < cutoff) c = 0.0;
    return inverse(spec, n);
}

ScalarField resample(const ScalarField& f, int m) {
    check_size(f);
    if (m < 2 || m % 2 != 0)
        throw Error(Errc::InvalidArgument, "resample target must be even and >= 2");
    const int n = static_cast<int>(f.size());
    if (m == n) return f;
    auto spec = forward(f);
    std::vector<Complex> out(m / 2 + 1, Complex(0.0, 0.0));
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    const int keep = std::min(n / 2, m / 2);
    for (int k = 0; k <= keep; ++k) out[k] = spec[k] * scale;
    // A source Nyquist mode carries only the representable cosine half; when
    // upsampling it stays a pure cosine, which the copy above already gives.
    return inverse(out, m);
}

double eval_interpolant(const ScalarField& f, double alpha) {
    check_size(f);
    const int n = static_cast<int>(f.size());
    auto spec = forward(f);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t = alpha + M_PI;  // phase relative to the first grid node
    double sum = spec[0].real() * inv_n;
    for (int k = 1; k < n / 2; ++k) {
        Complex e(std::cos(k * t), std::sin(k * t));
        sum += 2.0 * inv_n * (spec[k] * e).real();
    }
    sum += inv_n * spec[n / 2].real() * std::cos((n / 2) * t);
    return sum;
}

long tail_warning_count() { return g_tail_warnings.load(); }

}  // namespace splashwave::spectral
