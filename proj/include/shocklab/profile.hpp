#pragma once

// Viscous 2-shock profile: traveling-wave ODE integration, tabulation,
// decay-rate extraction, and the asymptotic shift induced by the wall.
//
// The profile (V, U)(xi) solves
//
//   s V' / V^(alpha+1) = h(V) := -s^2 V - p(V) - b,   V(-inf) = v-, V(+inf) = v+,
//   U = -s (V - v-),
//
// and the effective velocity of the wave is H = U - V^-(alpha+1) V'.
// The translate is normalized by V(0) = (v- + v+)/2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shocklab/errors.hpp"
#include "shocklab/gas.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/interp.hpp"
#include "shocklab/ode.hpp"

namespace shocklab {

// h(V) = -s^2 V - p(V) - b; vanishes at v-, v+ and is positive between.
inline double profile_ode_h(double V, const ShockEndStates& st, const GasModel& gas) {
    return -st.s * st.s * V - pressure(V, gas) - st.b;
}

namespace detail {

// dV/dxi without the domain check; used inside the integrator whose trial
// stages may probe marginally outside [v-, v+].
inline double profile_rhs_raw(double V, const ShockEndStates& st, const GasModel& gas) {
    return std::pow(V, gas.alpha + 1.0) * profile_ode_h(V, st, gas) / st.s;
}

}  // namespace detail

// dV/dxi = V^(alpha+1) h(V) / s; non-negative on [v-, v+].
inline double profile_rhs(double V, const ShockEndStates& st, const GasModel& gas) {
    if (V < st.v_minus * (1.0 - 1e-9) || V > st.v_plus * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "profile_rhs: V=" << V << " outside [" << st.v_minus << ", " << st.v_plus << "]";
        throw std::domain_error(msg.str());
    }
    return detail::profile_rhs_raw(V, st, gas);
}

// Theoretical tail exponents C_pm = v_pm^(alpha+1) / s * |p'(v_pm) + s^2|.
struct DecayRates {
    double C_minus = 0.0;
    double C_plus = 0.0;
    double min() const { return std::min(C_minus, C_plus); }
    double max() const { return std::max(C_minus, C_plus); }
};

inline DecayRates decay_rates(const ShockEndStates& st, const GasModel& gas) {
    DecayRates r;
    r.C_minus = std::pow(st.v_minus, gas.alpha + 1.0) / st.s *
                std::abs(pressure_derivative(st.v_minus, gas) + st.s * st.s);
    r.C_plus = std::pow(st.v_plus, gas.alpha + 1.0) / st.s *
               std::abs(pressure_derivative(st.v_plus, gas) + st.s * st.s);
    return r;
}

// Defaults used when the experiment config leaves the profile grid on auto.
inline double default_profile_half_width(const DecayRates& r) { return 26.0 / r.min(); }
inline double default_profile_resolution(const DecayRates& r) { return 0.005 / r.max(); }

struct ProfilePoint {
    double V, U, H;
};

struct ShockProfile {
    std::vector<double> xi;      // uniform, spans [-Xi, Xi], xi[m] = 0
    std::vector<double> V, U, H;
    std::vector<double> dV, dU, dH;  // analytic d/dxi at the nodes
    double dxi = 0.0;
    double half_width = 0.0;
    double C_minus = 0.0, C_plus = 0.0;
    double xi_stop_left = 0.0, xi_stop_right = 0.0;  // span actually integrated
    double ode_residual_sup = 0.0;                   // 4th-order FD check result
    ShockEndStates states;
    GasModel gas;

    std::size_t size() const { return xi.size(); }

    // Monotone cubic interpolation inside the table, constant end states
    // outside: (v-, 0, 0) on the left, (v+, u+, u+) on the right.
    ProfilePoint operator()(double x) const {
        if (x < xi.front()) return {states.v_minus, 0.0, 0.0};
        if (x > xi.back()) return {states.v_plus, states.u_plus, states.u_plus};
        const double pos = (x - xi.front()) / dxi;
        std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= xi.size()) i = xi.size() - 2;
        if (x == xi[i]) return {V[i], U[i], H[i]};
        if (x == xi[i + 1]) return {V[i + 1], U[i + 1], H[i + 1]};
        return {hermite_segment(xi[i], xi[i + 1], V[i], V[i + 1], dV[i], dV[i + 1], x),
                hermite_segment(xi[i], xi[i + 1], U[i], U[i + 1], dU[i], dU[i + 1], x),
                hermite_segment(xi[i], xi[i + 1], H[i], H[i + 1], dH[i], dH[i + 1], x)};
    }

    double eval_V(double x) const { return (*this)(x).V; }
};

inline ProfilePoint evaluate_profile(const ShockProfile& p, double xi) { return p(xi); }

// Integrate the profile ODE outward from V(0) = v- + anchor_fraction*(v+ - v-),
// tabulate on a uniform grid of spacing <= resolution over [-Xi, Xi], and fill
// the far tails (below the 1e-10 proximity threshold) with the linearized
// exponential approach to the end states.
inline ShockProfile compute_profile_anchored(const ShockEndStates& st, const GasModel& gas,
                                             double half_width, double resolution,
                                             double anchor_fraction) {
    const DecayRates rates = decay_rates(st, gas);
    if (!(half_width > 0.0) || !(resolution > 0.0))
        throw config_error("compute_profile: half_width and resolution must be positive");
    if (!(std::exp(-rates.min() * half_width) < 1e-9)) {
        std::ostringstream msg;
        msg << "compute_profile: half_width " << half_width << " too small, exp(-"
            << rates.min() << " * Xi) = " << std::exp(-rates.min() * half_width) << " >= 1e-9";
        throw config_error(msg.str());
    }

    const double jump = st.jump();
    const double prox = 1e-10 * jump;
    const std::size_t m = static_cast<std::size_t>(std::ceil(half_width / resolution));
    const double dxi = half_width / static_cast<double>(m);
    const std::size_t count = 2 * m + 1;

    ShockProfile p;
    p.xi.resize(count);
    p.V.assign(count, 0.0);
    p.dxi = dxi;
    p.half_width = half_width;
    p.C_minus = rates.C_minus;
    p.C_plus = rates.C_plus;
    p.states = st;
    p.gas = gas;
    for (std::size_t i = 0; i < count; ++i)
        p.xi[i] = (static_cast<double>(i) - static_cast<double>(m)) * dxi;
    p.xi[m] = 0.0;

    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14 * jump;
    opt.max_step = std::min(dxi, 0.02 / rates.max());

    const auto rhs_fwd = [&](double v) { return detail::profile_rhs_raw(v, st, gas); };
    const auto rhs_bwd = [&](double v) { return -detail::profile_rhs_raw(v, st, gas); };

    const double v_mid = st.v_minus + anchor_fraction * jump;
    p.V[m] = v_mid;

    // March right toward v+.
    std::size_t stop_r = count - 1;
    {
        double y = v_mid;
        for (std::size_t k = m + 1; k < count; ++k) {
            y = integrate_over(rhs_fwd, y, dxi, opt);
            y = std::min(y, st.v_plus);  // integration noise must not cross the end state
            p.V[k] = y;
            if (st.v_plus - y <= prox) {
                stop_r = k;
                break;
            }
        }
        const double r_edge = st.v_plus - p.V[stop_r];
        for (std::size_t k = stop_r + 1; k < count; ++k)
            p.V[k] = st.v_plus - r_edge * std::exp(-rates.C_plus * (p.xi[k] - p.xi[stop_r]));
    }

    // March left toward v-.
    std::size_t stop_l = 0;
    {
        double y = v_mid;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t k = m - j;
            y = integrate_over(rhs_bwd, y, dxi, opt);
            y = std::max(y, st.v_minus);
            p.V[k] = y;
            if (y - st.v_minus <= prox) {
                stop_l = k;
                break;
            }
        }
        const double r_edge = p.V[stop_l] - st.v_minus;
        for (std::size_t j = stop_l; j-- > 0;)
            p.V[j] = st.v_minus + r_edge * std::exp(rates.C_minus * (p.xi[j] - p.xi[stop_l]));
    }
    p.xi_stop_left = p.xi[stop_l];
    p.xi_stop_right = p.xi[stop_r];

    // Enforce strict monotonicity where exponential tails fall below ulp.
    for (std::size_t i = 1; i < count; ++i)
        if (!(p.V[i] > p.V[i - 1])) p.V[i] = std::nextafter(p.V[i - 1], st.v_plus * 2.0);

    if (std::abs(p.V.front() - st.v_minus) > 1e-9 * jump ||
        std::abs(p.V.back() - st.v_plus) > 1e-9 * jump)
        throw numerical_error("compute_profile: endpoint clamp tolerance not met");

    // U from the algebraic relation, H from the analytic slope.
    p.U.resize(count);
    p.H.resize(count);
    p.dV.resize(count);
    p.dU.resize(count);
    p.dH.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = p.V[i];
        const double h = profile_ode_h(v, st, gas);
        const double slope = detail::profile_rhs_raw(v, st, gas);
        p.U[i] = -st.s * (v - st.v_minus);
        p.H[i] = p.U[i] - h / st.s;
        p.dV[i] = slope;
        p.dU[i] = -st.s * slope;
        // H' = U' - h'(V) V' / s with h'(V) = -s^2 - p'(V)
        const double dh = -st.s * st.s - pressure_derivative(v, gas);
        p.dH[i] = p.dU[i] - dh * slope / st.s;
    }
    limit_slopes_monotone(p.xi, p.V, p.dV);

    // Interior ODE residual with 4th-order central differences of the table.
    double residual = 0.0;
    for (std::size_t i = 2; i + 2 < count; ++i) {
        const double der =
            (-p.V[i + 2] + 8.0 * p.V[i + 1] - 8.0 * p.V[i - 1] + p.V[i - 2]) / (12.0 * dxi);
        const double lhs = st.s * der / std::pow(p.V[i], gas.alpha + 1.0);
        residual = std::max(residual, std::abs(lhs - profile_ode_h(p.V[i], st, gas)));
    }
    p.ode_residual_sup = residual;
    if (residual > 1e-8) {
        std::ostringstream msg;
        msg << "compute_profile: ODE residual " << residual
            << " exceeds 1e-8; refine the resolution (dxi=" << dxi << ")";
        throw numerical_error(msg.str());
    }
    return p;
}

inline ShockProfile compute_profile(const ShockEndStates& st, const GasModel& gas,
                                    double half_width, double resolution) {
    return compute_profile_anchored(st, gas, half_width, resolution, 0.5);
}

// Least-squares fit of the tail exponents from log|V - v_pm| over the outer
// quarter of the integrated span on each side.
inline std::pair<double, double> fit_decay(const ShockProfile& p) {
    const double jump = p.states.jump();
    const double floor_value = 1e-13 * jump;

    const auto fit = [&](bool right) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = p.xi[i];
            if (right) {
                if (x < 0.75 * p.xi_stop_right || x > p.xi_stop_right) continue;
                const double r = p.states.v_plus - p.V[i];
                if (r < floor_value) continue;
                xs.push_back(x);
                ys.push_back(std::log(r));
            } else {
                if (x > 0.75 * p.xi_stop_left || x < p.xi_stop_left) continue;
                const double r = p.V[i] - p.states.v_minus;
                if (r < floor_value) continue;
                xs.push_back(-x);
                ys.push_back(std::log(r));
            }
        }
        if (xs.size() < 10)
            throw numerical_error("fit_decay: fewer than 10 usable tail points");
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        return -slope;
    };

    const double c_minus = fit(false);
    const double c_plus = fit(true);
    return {c_minus, c_plus};
}

namespace detail {

// Composite Simpson over an even number of uniform intervals.
inline double simpson_uniform(std::span<const double> f, double h) {
    const std::size_t n = f.size() - 1;
    double acc = f[0] + f[n];
    for (std::size_t i = 1; i < n; i += 2) acc += 4.0 * f[i];
    for (std::size_t i = 2; i < n; i += 2) acc += 2.0 * f[i];
    return acc * h / 3.0;
}

// Composite Simpson on the solver grid; falls back to a trapezoid for the
// last interval when the node count is even.
inline double simpson_grid(std::span<const double> f, double dx) {
    const std::size_t nodes = f.size();
    if (nodes < 3) throw numerical_error("simpson_grid: need at least 3 nodes");
    const std::size_t intervals = nodes - 1;
    if (intervals % 2 == 0) return simpson_uniform(f, dx);
    const double head = simpson_uniform(f.subspan(0, nodes - 1), dx);
    return head + 0.5 * dx * (f[nodes - 2] + f[nodes - 1]);
}

}  // namespace detail

struct ShiftResult {
    double beta0 = 0.0;
    double mass_integral = 0.0;      // int_0^L (v0 - V(x - beta)) dx
    double boundary_integral = 0.0;  // (1/s) int_beta^inf U(-y) dy
    double tail_bound = 0.0;         // estimated truncation of the first integral
    std::string warning;             // non-empty when the integrand has not decayed
};

// Shift beta0 of the asymptotic profile translate:
//   beta0 = [ int_0^L (v0 - V(x-beta)) dx + (1/s) int_beta^inf U(-y) dy ] / (v+ - v-).
// The first term uses composite Simpson on the solver grid; the second uses
// composite Simpson on the profile tail plus an exponential closure with the
// measured left decay rate.
inline ShiftResult compute_shift(std::span<const double> v0, const Grid1D& grid, double beta,
                                 const ShockProfile& profile) {
    if (v0.size() != grid.nodes())
        throw config_error("compute_shift: v0 size does not match the grid");
    const ShockEndStates& st = profile.states;
    const double jump = st.jump();

    ShiftResult out;

    std::vector<double> integrand(v0.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) {
        integrand[i] = v0[i] - profile(grid.x[i] - beta).V;
        max_abs = std::max(max_abs, std::abs(integrand[i]));
    }
    const double edge = std::abs(integrand.back());
    if (edge > 1e-10 && edge > 1e-10 * std::max(max_abs, 1.0)) {
        out.tail_bound = edge / profile.C_plus;
        std::ostringstream msg;
        msg << "compute_shift: integrand " << edge << " at x=L has not decayed; truncation bound ~ "
            << out.tail_bound;
        out.warning = msg.str();
    }
    out.mass_integral = detail::simpson_grid(integrand, grid.dx);

    const double c_minus_fit = fit_decay(profile).first;
    const double Xi = profile.half_width;
    double tail = 0.0;
    if (beta < Xi) {
        const std::size_t half = static_cast<std::size_t>(
            std::max<double>(2.0, std::ceil((Xi - beta) / (2.0 * profile.dxi))));
        const std::size_t m2 = 2 * half;
        const double h = (Xi - beta) / static_cast<double>(m2);
        std::vector<double> g(m2 + 1);
        for (std::size_t j = 0; j <= m2; ++j) {
            const double y = beta + h * static_cast<double>(j);
            g[j] = profile(-y).V - st.v_minus;
        }
        tail = detail::simpson_uniform(g, h);
        tail += (profile(-Xi).V - st.v_minus) / c_minus_fit;
    } else {
        tail = (profile(-Xi).V - st.v_minus) / c_minus_fit * std::exp(-c_minus_fit * (beta - Xi));
    }
    // (1/s) int_beta^inf U(-y) dy with U = -s (V - v-).
    out.boundary_integral = -tail;

    out.beta0 = (out.mass_integral + out.boundary_integral) / jump;
    return out;
}

}  // namespace shocklab
