#pragma once

// Adaptive embedded Runge-Kutta (Cash-Karp 4/5) for scalar autonomous ODEs.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "shocklab/errors.hpp"

namespace shocklab {

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double max_step = 0.1;
    std::size_t max_steps = 10'000'000;
};

namespace detail {

// One Cash-Karp step of signed size h; returns the 5th-order value and the
// embedded 4th/5th error estimate.
template <typename F>
inline void cash_karp(F&& f, double y, double h, double& y5, double& err) {
    const double k1 = f(y);
    const double k2 = f(y + h * (0.2 * k1));
    const double k3 = f(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const double k4 = f(y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
    const double k5 = f(y + h * (-11.0 / 54.0 * k1 + 2.5 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4));
    const double k6 = f(y + h * (1631.0 / 55296.0 * k1 + 175.0 / 512.0 * k2 + 575.0 / 13824.0 * k3 +
                                 44275.0 / 110592.0 * k4 + 253.0 / 4096.0 * k5));
    y5 = y + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 + 512.0 / 1771.0 * k6);
    const double y4 = y + h * (2825.0 / 27648.0 * k1 + 18575.0 / 48384.0 * k3 + 13525.0 / 55296.0 * k4 +
                               277.0 / 14336.0 * k5 + 0.25 * k6);
    err = std::abs(y5 - y4);
}

}  // namespace detail

// Advance y' = f(y) over a span of given (positive) length with adaptive
// step control; returns y at the end of the span.
template <typename F>
inline double integrate_over(F&& f, double y, double span, const OdeOptions& opt) {
    double remaining = span;
    double h = std::min(opt.max_step, span);
    std::size_t steps = 0;
    while (remaining > 0.0) {
        if (++steps > opt.max_steps)
            throw numerical_error("integrate_over: step budget exhausted");
        h = std::min(h, remaining);
        double y5 = 0.0, err = 0.0;
        detail::cash_karp(f, y, h, y5, err);
        const double tol = opt.atol + opt.rtol * std::abs(y);
        if (err <= tol) {
            remaining -= h;
            y = y5;
            const double grow = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h = std::min(opt.max_step, h * std::clamp(grow, 0.2, 5.0));
        } else {
            h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.25));
            if (!(h > 0.0) || !(y == y))
                throw numerical_error("integrate_over: step size underflow");
        }
    }
    return y;
}

}  // namespace shocklab
