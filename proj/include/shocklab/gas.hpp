#pragma once

// Equation of state, characteristic speeds, and the Rankine-Hugoniot solver
// for the outgoing 2-shock end states of the isentropic p-system
//
//   v_t - u_x = 0
//   u_t + p_x = (mu(v) u_x / v)_x,   p = a v^-gamma,  mu(v) = v^-alpha
//
// on the half line with an impermeable wall, u(0,t) = 0.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "shocklab/errors.hpp"

namespace shocklab {

struct GasModel {
    double a = 1.0;      // pressure constant, > 0
    double gamma = 1.4;  // adiabatic exponent, > 1
    double alpha = 0.0;  // viscosity exponent, >= 0
    static constexpr double mu0 = 1.0;

    void validate() const {
        if (!(a > 0.0)) throw config_error("gas.a must be positive");
        if (!(gamma > 1.0)) throw config_error("gamma must exceed 1");
        if (!(alpha >= 0.0)) throw config_error("gas.alpha must be non-negative");
    }
};

namespace detail {

// v^-gamma with closed forms for the common adiabatic exponents; the solver
// inner loop is dominated by this call.
inline double pow_neg_gamma(double v, double gamma) {
    if (gamma == 2.0) return 1.0 / (v * v);
    if (gamma == 3.0) return 1.0 / (v * v * v);
    if (gamma == 5.0 / 3.0) {
        const double c = std::cbrt(v);  // v^(5/3) = v * cbrt(v)^2
        return 1.0 / (v * c * c);
    }
    return std::pow(v, -gamma);
}

// v^-(alpha+1) for the viscous weight.
inline double pow_neg_alpha1(double v, double alpha) {
    if (alpha == 0.0) return 1.0 / v;
    if (alpha == 1.0) return 1.0 / (v * v);
    if (alpha == 0.5) return 1.0 / (v * std::sqrt(v));
    return std::pow(v, -(alpha + 1.0));
}

}  // namespace detail

inline double pressure(double v, const GasModel& gas) {
    if (!(v > 0.0))
        throw std::domain_error("pressure: specific volume must be positive, got v=" + std::to_string(v));
    return gas.a * detail::pow_neg_gamma(v, gas.gamma);
}

// dp/dv = -a gamma v^-(gamma+1), always negative for v > 0.
inline double pressure_derivative(double v, const GasModel& gas) {
    if (!(v > 0.0))
        throw std::domain_error("pressure_derivative: specific volume must be positive, got v=" +
                                std::to_string(v));
    return -gas.a * gas.gamma * detail::pow_neg_gamma(v, gas.gamma) / v;
}

// Lagrangian sound speed sqrt(-p'(v)).
inline double sound_speed(double v, const GasModel& gas) {
    return std::sqrt(-pressure_derivative(v, gas));
}

// Coefficient mu(v)/v = v^-(alpha+1) multiplying u_x in the viscous flux.
inline double viscous_weight(double v, const GasModel& gas) {
    if (!(v > 0.0))
        throw std::domain_error("viscous_weight: specific volume must be positive, got v=" +
                                std::to_string(v));
    return detail::pow_neg_alpha1(v, gas.alpha);
}

// End states of the outgoing 2-shock: (v-, 0) behind, (v+, u+) ahead.
struct ShockEndStates {
    double v_minus = 0.0;
    double v_plus = 0.0;
    double u_minus = 0.0;  // rest state at the wall side
    double u_plus = 0.0;   // < 0
    double s = 0.0;        // shock speed, > 0
    double b = 0.0;        // profile constant, b = -s^2 v_pm - p(v_pm)

    // Residuals of the two jump conditions; both vanish for a valid solve.
    double rh_residual_mass() const { return -s * (v_plus - v_minus) - (u_plus - u_minus); }
    double rh_residual_momentum(const GasModel& gas) const {
        return -s * (u_plus - u_minus) + (pressure(v_plus, gas) - pressure(v_minus, gas));
    }

    // Lax admissibility for a 2-shock: c(v+) < s < c(v-).
    bool lax_admissible(const GasModel& gas) const {
        return sound_speed(v_plus, gas) < s && s < sound_speed(v_minus, gas);
    }

    double jump() const { return v_plus - v_minus; }
};

namespace detail {

// F(v) = (p(v) - p(v+)) (v+ - v) - u+^2; strictly decreasing on (0, v+),
// with the unique root at v-.
inline double hugoniot_mismatch(double v, double v_plus, double u_plus, const GasModel& gas) {
    return (pressure(v, gas) - pressure(v_plus, gas)) * (v_plus - v) - u_plus * u_plus;
}

inline double hugoniot_mismatch_derivative(double v, double v_plus, const GasModel& gas) {
    return pressure_derivative(v, gas) * (v_plus - v) - (pressure(v, gas) - pressure(v_plus, gas));
}

}  // namespace detail

// Solve the RH conditions for the left state of the outgoing 2-shock with
// u- = 0. Bracketed bisection on (eps, v+ - eps) followed by Newton polish.
inline ShockEndStates solve_rankine_hugoniot(double v_plus, double u_plus, const GasModel& gas) {
    gas.validate();
    if (!(v_plus > 0.0)) throw config_error("v_plus must be positive");
    if (!(u_plus < 0.0)) throw config_error("u_plus must be negative (no outgoing 2-shock otherwise)");

    const double eps = 1e-12 * v_plus;
    double lo = eps;
    double hi = v_plus - eps;
    double flo = detail::hugoniot_mismatch(lo, v_plus, u_plus, gas);
    double fhi = detail::hugoniot_mismatch(hi, v_plus, u_plus, gas);
    if (!(flo > 0.0) || !(fhi < 0.0)) {
        std::ostringstream msg;
        msg << "solve_rankine_hugoniot: root not bracketed on (" << lo << ", " << hi << "), F(lo)=" << flo
            << ", F(hi)=" << fhi;
        throw numerical_error(msg.str());
    }

    // Bisection until the bracket is tight, then 5 safeguarded Newton steps.
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * v_plus; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = detail::hugoniot_mismatch(mid, v_plus, u_plus, gas);
        if (fmid > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double v = 0.5 * (lo + hi);
    double v_best = v;
    double f_best = std::abs(detail::hugoniot_mismatch(v, v_plus, u_plus, gas));
    for (int it = 0; it < 5; ++it) {
        const double f = detail::hugoniot_mismatch(v, v_plus, u_plus, gas);
        if (std::abs(f) < f_best) {
            f_best = std::abs(f);
            v_best = v;
        }
        if (f == 0.0) break;
        if (f > 0.0)
            lo = v;
        else
            hi = v;
        const double df = detail::hugoniot_mismatch_derivative(v, v_plus, gas);
        double next = v - f / df;
        if (next == v) break;  // increment below double resolution
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (next == v) break;
        v = next;
    }
    v = v_best;

    ShockEndStates st;
    st.v_minus = v;
    st.v_plus = v_plus;
    st.u_minus = 0.0;
    st.u_plus = u_plus;
    st.s = -u_plus / (v_plus - v);

    const double b_plus = -st.s * st.s * v_plus - pressure(v_plus, gas);
    const double b_minus = -st.s * st.s * v - pressure(v, gas);
    const double scale = std::max(std::abs(b_plus), 1.0);
    if (std::abs(b_plus - b_minus) > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "solve_rankine_hugoniot: profile constant mismatch, b(+)=" << b_plus << " vs b(-)=" << b_minus;
        throw numerical_error(msg.str());
    }
    st.b = b_plus;

    if (!st.lax_admissible(gas))
        throw numerical_error("solve_rankine_hugoniot: computed state violates the Lax inequalities");
    return st;
}

}  // namespace shocklab
