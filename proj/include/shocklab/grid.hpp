#pragma once

#include <vector>

#include "shocklab/errors.hpp"

namespace shocklab {

// Uniform node grid on [0, L]: n cells, n+1 nodes, x_0 = 0, x_n = L.
struct Grid1D {
    double L = 0.0;
    int n = 0;
    double dx = 0.0;
    std::vector<double> x;

    Grid1D() = default;
    Grid1D(double length, int cells) : L(length), n(cells) {
        if (!(length > 0.0)) throw config_error("grid.L must be positive");
        if (cells < 64) throw config_error("grid.n must be at least 64");
        dx = L / n;
        x.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) x[static_cast<std::size_t>(i)] = i * dx;
        x.back() = L;
    }

    std::size_t nodes() const { return x.size(); }
};

}  // namespace shocklab
