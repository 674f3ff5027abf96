#pragma once

// Finite-difference stencils and quadrature shared by the solver and the
// diagnostics so residual checks see one consistent 2nd-order family.

#include <cstddef>
#include <span>
#include <vector>

#include "shocklab/errors.hpp"

namespace shocklab {

// First derivative: central interior, one-sided 2nd-order at the ends.
inline void diff1(std::span<const double> f, double dx, std::span<double> out) {
    const std::size_t n = f.size();
    if (n < 4) throw numerical_error("diff1: need at least 4 nodes");
    const double inv2 = 1.0 / (2.0 * dx);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
}

// Second derivative: compact 3-point interior, one-sided 2nd-order at the ends.
inline void diff2(std::span<const double> f, double dx, std::span<double> out) {
    const std::size_t n = f.size();
    if (n < 5) throw numerical_error("diff2: need at least 5 nodes");
    const double inv = 1.0 / (dx * dx);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
}

// Third derivative: central 5-point interior, one-sided 2nd-order near the ends.
inline void diff3(std::span<const double> f, double dx, std::span<double> out) {
    const std::size_t n = f.size();
    if (n < 6) throw numerical_error("diff3: need at least 6 nodes");
    const double inv = 1.0 / (dx * dx * dx);
    out[0] = (-2.5 * f[0] + 9.0 * f[1] - 12.0 * f[2] + 7.0 * f[3] - 1.5 * f[4]) * inv;
    out[1] = (-1.5 * f[0] + 5.0 * f[1] - 6.0 * f[2] + 3.0 * f[3] - 0.5 * f[4]) * inv;
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) * 0.5 * inv;
    out[n - 2] =
        (1.5 * f[n - 1] - 5.0 * f[n - 2] + 6.0 * f[n - 3] - 3.0 * f[n - 4] + 0.5 * f[n - 5]) * inv;
    out[n - 1] =
        (2.5 * f[n - 1] - 9.0 * f[n - 2] + 12.0 * f[n - 3] - 7.0 * f[n - 4] + 1.5 * f[n - 5]) * inv;
}

inline std::vector<double> diff1(std::span<const double> f, double dx) {
    std::vector<double> out(f.size());
    diff1(f, dx, out);
    return out;
}

inline std::vector<double> diff2(std::span<const double> f, double dx) {
    std::vector<double> out(f.size());
    diff2(f, dx, out);
    return out;
}

inline std::vector<double> diff3(std::span<const double> f, double dx) {
    std::vector<double> out(f.size());
    diff3(f, dx, out);
    return out;
}

inline double trapz(std::span<const double> f, double dx) {
    if (f.size() < 2) return 0.0;
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
    return acc * dx;
}

// Discrete L2 norm with trapezoid weights.
inline double l2_norm(std::span<const double> f, double dx) {
    if (f.size() < 2) return 0.0;
    double acc = 0.5 * (f.front() * f.front() + f.back() * f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i] * f[i];
    return std::sqrt(acc * dx);
}

inline double sup_norm(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace shocklab
