#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace efx::detail {

/// Tridiagonal operator with rows (lower[i], diag[i], upper[i]); lower[0] and upper[n-1] unused.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }

    /// out = (I + scale * A) x
    void apply_shifted(double scale, std::span<const double> x, std::span<double> out) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            double v = x[i] + scale * diag[i] * x[i];
            if (i > 0) v += scale * lower[i] * x[i - 1];
            if (i + 1 < n) v += scale * upper[i] * x[i + 1];
            out[i] = v;
        }
    }

    /// out = A x
    void apply(std::span<const double> x, std::span<double> out) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += lower[i] * x[i - 1];
            if (i + 1 < n) v += upper[i] * x[i + 1];
            out[i] = v;
        }
    }
};

/// Thomas algorithm for (I + scale * A) x = rhs, overwriting rhs with x.
/// Requires the shifted matrix to be diagonally dominant.
inline void solve_shifted(const Tridiagonal& a, double scale, std::span<double> rhs, std::vector<double>& work) {
    const std::size_t n = a.size();
    work.resize(n);
    double denom = 1.0 + scale * a.diag[0];
    work[0] = n > 1 ? scale * a.upper[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        const double l = scale * a.lower[i];
        denom = 1.0 + scale * a.diag[i] - l * work[i - 1];
        work[i] = i + 1 < n ? scale * a.upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - l * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i] * rhs[i + 1];
}

}  // namespace efx::detail
