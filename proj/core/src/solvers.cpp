#include "splashwave/solvers.hpp"

#include <cmath>

namespace splashwave {

namespace {

double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const ScalarField& x, ScalarField& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

ScalarField gmres(const LinearOperator& A, const ScalarField& b, double tol2,
                  int max_it, const ScalarField* x0, std::vector<double>& history) {
    const int n = static_cast<int>(b.size());
    ScalarField x = x0 ? *x0 : ScalarField(n, 0.0);

    ScalarField r = b;
    if (x0) {
        ScalarField ax = A(x);
        for (int i = 0; i < n; ++i) r[i] -= ax[i];
    }
    double beta = nrm2(r);
    history.push_back(beta);
    if (beta <= tol2) return x;

    const int m = std::min(max_it, n);
    std::vector<ScalarField> V;
    V.reserve(m + 1);
    {
        ScalarField v0 = r;
        for (double& v : v0) v /= beta;
        V.push_back(std::move(v0));
    }
    // Column-major packed Hessenberg plus Givens bookkeeping.
    std::vector<std::vector<double>> H;
    std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
    g[0] = beta;

    int k = 0;
    for (; k < m; ++k) {
        ScalarField w = A(V[k]);
        std::vector<double> h(k + 2, 0.0);
        for (int i = 0; i <= k; ++i) {
            h[i] = dot(w, V[i]);
            axpy(-h[i], V[i], w);
        }
        h[k + 1] = nrm2(w);
        const double subdiag = h[k + 1];  // Arnoldi norm, before any rotation

        for (int i = 0; i < k; ++i) {
            const double t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        const double denom = std::hypot(h[k], h[k + 1]);
        cs[k] = denom > 0.0 ? h[k] / denom : 1.0;
        sn[k] = denom > 0.0 ? h[k + 1] / denom : 0.0;
        h[k] = denom;
        h[k + 1] = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] = cs[k] * g[k];

        H.push_back(std::move(h));
        const double res = std::abs(g[k + 1]);
        history.push_back(res);

        const bool breakdown = subdiag == 0.0;
        if (!breakdown) {
            ScalarField v = w;
            for (double& value : v) value /= subdiag;
            V.push_back(std::move(v));
        }
        if (res <= tol2 || breakdown) {
            ++k;
            break;
        }
    }

    // Back-substitute the triangular system and expand in the Krylov basis.
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
        y[i] = s / H[i][i];
    }
    for (int i = 0; i < k; ++i) axpy(y[i], V[i], x);
    return x;
}

ScalarField richardson(const LinearOperator& A, const ScalarField& b, double tol2,
                       int max_it, const ScalarField* x0, std::vector<double>& history) {
    const int n = static_cast<int>(b.size());
    ScalarField x = x0 ? *x0 : b;
    for (int it = 0; it < max_it; ++it) {
        ScalarField r = A(x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
        const double res = nrm2(r);
        history.push_back(res);
        if (res <= tol2) return x;
        for (int i = 0; i < n; ++i) x[i] += r[i];
    }
    return x;
}

}  // namespace

ScalarField solve_linear(const LinearOperator& A, const ScalarField& b,
                         const SolveOptions& opts, const ScalarField* x0,
                         SolveReport* report) {
    if (opts.residual_tolerance <= 0.0)
        throw Error(Errc::InvalidArgument, "residual tolerance must be positive");
    const int n = static_cast<int>(b.size());
    // Tolerances are stated in the discrete L2 norm sqrt(2 pi / n) ||.||_2.
    const double scale = std::sqrt(2.0 * M_PI / static_cast<double>(n));
    const double tol2 = opts.residual_tolerance / scale;

    std::vector<double> history;
    ScalarField x = opts.method == SolveMethod::krylov
                        ? gmres(A, b, tol2, opts.max_iterations, x0, history)
                        : richardson(A, b, tol2, opts.max_iterations, x0, history);

    if (report) {
        report->iterations =
            static_cast<int>(history.size()) - (opts.method == SolveMethod::krylov ? 1 : 0);
        report->residual = history.empty() ? 0.0 : history.back() * scale;
        report->residual_history = history;
        for (double& h : report->residual_history) h *= scale;
    }
    return x;
}

}  // namespace splashwave
