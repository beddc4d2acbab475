#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace splashwave {

using Complex = std::complex<double>;

/// Real samples of a 2pi-periodic function on the uniform grid
/// alpha_j = -pi + 2*pi*j/n.
using ScalarField = std::vector<double>;

inline double grid_alpha(int n, int j) {
    return -M_PI + 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    // (a,b)^perp = (-b,a); rotates the tangent onto the vacuum-side normal.
    Vec2 perp() const { return {-y, x}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline Complex to_complex(const Vec2& v) { return {v.x, v.y}; }
inline Vec2 to_vec2(const Complex& z) { return {z.real(), z.imag()}; }

enum class Errc {
    BranchAmbiguity,
    PoleInput,
    SingularPointInput,
    BranchTrackingFailure,
    SelfIntersection,
    ArcChordFailure,
    DegenerateTangent,
    NonConvergence,
    ZeroMeanViolation,
    MismatchedWindow,
    GridMismatch,
    DegenerateSeries,
    NaNDetected,
    ParseError,
    SchemaMismatch,
    IOFailure,
    InvalidArgument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

/// Solver failure carrying the residual history of the attempt.
class NonConvergenceError : public Error {
  public:
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : Error(Errc::NonConvergence, what), residual_history(std::move(history)) {}

    std::vector<double> residual_history;
};

double mean(const ScalarField& f);
double l2_norm(const ScalarField& f);          // sqrt(2*pi/n * sum f_j^2)
double max_abs(const ScalarField& f);
bool all_finite(const ScalarField& f);

}  // namespace splashwave
