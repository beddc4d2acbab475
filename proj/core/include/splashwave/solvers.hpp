#pragma once

#include <functional>

#include "splashwave/types.hpp"

namespace splashwave {

enum class SolveMethod { fixed_point, krylov };

struct SolveOptions {
    int max_iterations = 200;
    double residual_tolerance = 1e-12;  // discrete L2 norm of the residual
    SolveMethod method = SolveMethod::krylov;
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

using LinearOperator = std::function<ScalarField(const ScalarField&)>;

/// Solves A x = b matrix-free. krylov is full-orthogonalization GMRES;
/// fixed_point is the Richardson iteration x <- x + (b - A x), the classical
/// contraction for second-kind operators A = I + J with small J.
/// Throws NonConvergenceError (carrying the residual history) on failure.
ScalarField solve_linear(const LinearOperator& A, const ScalarField& b,
                         const SolveOptions& opts, const ScalarField* x0 = nullptr,
                         SolveReport* report = nullptr);

}  // namespace splashwave
