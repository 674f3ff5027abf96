#pragma once

// Piecewise cubic Hermite interpolation with optional monotone slope limiting.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "shocklab/errors.hpp"

namespace shocklab {

// Cubic Hermite basis evaluation on one segment [x0, x1].
inline double hermite_segment(double x0, double x1, double y0, double y1, double d0, double d1,
                              double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * d0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * d1;
}

// Fritsch-Carlson limiting: caps slopes at 3x the secant so the interpolant
// of monotone data stays monotone. Leaves smooth monotone data untouched.
inline void limit_slopes_monotone(std::span<const double> x, std::span<const double> y,
                                  std::span<double> d) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double sec = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        if (sec == 0.0) {
            d[i] = 0.0;
            d[i + 1] = 0.0;
            continue;
        }
        for (std::size_t j : {i, i + 1}) {
            if (d[j] / sec < 0.0)
                d[j] = 0.0;
            else if (std::abs(d[j]) > 3.0 * std::abs(sec))
                d[j] = 3.0 * sec;
        }
    }
}

// Hermite interpolant over strictly increasing nodes; constant extension
// outside the node range.
struct CubicHermite {
    std::vector<double> x, y, d;

    double eval(double xq) const {
        if (x.empty()) throw numerical_error("CubicHermite: empty table");
        if (xq <= x.front()) return y.front();
        if (xq >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), xq);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        return hermite_segment(x[i], x[i + 1], y[i], y[i + 1], d[i], d[i + 1], xq);
    }
};

}  // namespace shocklab
