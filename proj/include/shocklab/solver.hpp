#pragma once

// Time marching for the Lagrangian Navier-Stokes system on the truncated
// half line [0, L]: impermeable wall u(0,t) = 0, Dirichlet far field at x = L.
// Second-order central differences, diffusive flux in conservative form,
// explicit SSP-RK2 with an advective/parabolic step restriction.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "shocklab/errors.hpp"
#include "shocklab/gas.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/profile.hpp"

namespace shocklab {

struct FluidState {
    double t = 0.0;
    std::vector<double> v, u;  // node values; u[0] = 0 at all times
};

enum class InitialKind { pure_profile, bump, random_smooth };

inline const char* to_string(InitialKind k) {
    switch (k) {
        case InitialKind::pure_profile: return "pure-profile";
        case InitialKind::bump: return "bump";
        default: return "random-smooth";
    }
}

struct InitialDataSpec {
    InitialKind kind = InitialKind::pure_profile;
    double amplitude = 0.0;          // perturbation scale delta
    double support_lo = 0.0;         // bump / random-smooth support
    double support_hi = 0.0;
    std::uint64_t seed = 0;          // random-smooth
    double beta = 0.0;               // initial standoff distance
};

// C-infinity bump supported on (lo, hi), peak value 1 at the center.
inline double smooth_bump(double x, double lo, double hi) {
    const double y = (2.0 * x - lo - hi) / (hi - lo);
    if (std::abs(y) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

// Mean-zero double-lobe bump: +1 lobe on (lo, mid), -1 lobe on (mid, hi).
inline double two_lobe_bump(double x, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return smooth_bump(x, lo, mid) - smooth_bump(x, mid, hi);
}

namespace detail {

// Smooth random field: envelope * low-mode Fourier sum, peak-normalized.
inline std::vector<double> random_smooth_field(const Grid1D& grid, double lo, double hi,
                                               std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    constexpr int modes = 6;
    double a[modes], ph[modes];
    for (int k = 0; k < modes; ++k) {
        a[k] = coeff(rng);
        ph[k] = coeff(rng) * 3.141592653589793;
    }
    std::vector<double> f(grid.nodes(), 0.0);
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double x = grid.x[i];
        if (x <= lo || x >= hi) continue;
        double acc = 0.0;
        for (int k = 0; k < modes; ++k)
            acc += a[k] * std::sin((k + 1) * 3.141592653589793 * (x - lo) / (hi - lo) + ph[k]);
        f[i] = smooth_bump(x, lo, hi) * acc;
        peak = std::max(peak, std::abs(f[i]));
    }
    if (peak > 0.0)
        for (auto& v : f) v /= peak;
    return f;
}

}  // namespace detail

// Profile translate plus perturbation, with the wall-compatibility cutoff
// chi(x) = tanh^2(x/l), l = min(beta/10, 1) applied to the velocity.
inline FluidState make_initial_data(const InitialDataSpec& spec, const ShockProfile& profile,
                                    const Grid1D& grid) {
    if (!(spec.beta > 0.1 * grid.L) || !(spec.beta < 0.9 * grid.L))
        throw config_error("init.beta must lie in (0.1 L, 0.9 L)");
    const bool perturbed = spec.kind != InitialKind::pure_profile;
    if (perturbed) {
        if (!(spec.support_lo > 0.0) || !(spec.support_hi > spec.support_lo) ||
            !(spec.support_hi < grid.L))
            throw config_error("init.support must satisfy 0 < lo < hi < L");
        if (!(spec.amplitude >= 0.0)) throw config_error("init.amplitude must be non-negative");
    }

    std::vector<double> bv(grid.nodes(), 0.0), bu(grid.nodes(), 0.0);
    if (spec.kind == InitialKind::bump) {
        for (std::size_t i = 0; i < grid.nodes(); ++i) {
            bv[i] = two_lobe_bump(grid.x[i], spec.support_lo, spec.support_hi);
            bu[i] = bv[i];
        }
    } else if (spec.kind == InitialKind::random_smooth) {
        std::mt19937_64 rng(spec.seed);
        bv = detail::random_smooth_field(grid, spec.support_lo, spec.support_hi, rng);
        bu = detail::random_smooth_field(grid, spec.support_lo, spec.support_hi, rng);
    }

    const double ell = std::min(spec.beta / 10.0, 1.0);
    FluidState st;
    st.t = 0.0;
    st.v.resize(grid.nodes());
    st.u.resize(grid.nodes());
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double x = grid.x[i];
        const auto pt = profile(x - spec.beta);
        const double th = std::tanh(x / ell);
        const double chi = th * th;
        st.v[i] = pt.V + spec.amplitude * bv[i];
        st.u[i] = pt.U * chi + spec.amplitude * bu[i];
        if (!(st.v[i] > 0.0)) {
            std::ostringstream msg;
            msg << "make_initial_data: invalid perturbation, v0 = " << st.v[i] << " at x = " << x;
            throw config_error(msg.str());
        }
    }
    st.u[0] = 0.0;
    return st;
}

struct StepStats {
    double v_min = 0.0;
    double v_max = 0.0;
};

class Stepper {
public:
    Stepper(const GasModel& gas, const Grid1D& grid)
        : gas_(gas),
          grid_(grid),
          n_(grid.nodes()),
          p_(n_),
          w_(n_),
          dv1_(n_),
          du1_(n_),
          dv2_(n_),
          du2_(n_),
          vs_(n_),
          us_(n_) {
        gas.validate();
    }

    // Semi-discrete right-hand side. Wall: du/dt(0) = 0. Far field: both
    // tendencies vanish at node n.
    void rhs(std::span<const double> v, std::span<const double> u, std::span<double> dvdt,
             std::span<double> dudt) {
        const std::size_t n = n_;
        const double inv2dx = 0.5 / grid_.dx;
        const double invdx2 = 1.0 / (grid_.dx * grid_.dx);

        fill_coefficients(v);

        dvdt[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2dx;
        for (std::size_t i = 1; i + 1 < n; ++i) dvdt[i] = (u[i + 1] - u[i - 1]) * inv2dx;
        dvdt[n - 1] = 0.0;

        dudt[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double grad_p = (p_[i + 1] - p_[i - 1]) * inv2dx;
            const double q_right = 0.5 * (w_[i] + w_[i + 1]) * (u[i + 1] - u[i]);
            const double q_left = 0.5 * (w_[i - 1] + w_[i]) * (u[i] - u[i - 1]);
            dudt[i] = -grad_p + (q_right - q_left) * invdx2;
        }
        dudt[n - 1] = 0.0;
    }

    // One explicit SSP-RK2 (Heun) step in place.
    StepStats advance(FluidState& st, double dt) {
        const std::size_t n = n_;
        rhs(st.v, st.u, dv1_, du1_);
        for (std::size_t i = 0; i < n; ++i) {
            vs_[i] = st.v[i] + dt * dv1_[i];
            us_[i] = st.u[i] + dt * du1_[i];
        }
        us_[0] = 0.0;
        check_positive(vs_, st.t, "stage");
        rhs(vs_, us_, dv2_, du2_);
        for (std::size_t i = 0; i < n; ++i) {
            st.v[i] = 0.5 * (st.v[i] + vs_[i] + dt * dv2_[i]);
            st.u[i] = 0.5 * (st.u[i] + us_[i] + dt * du2_[i]);
        }
        st.u[0] = 0.0;
        st.t += dt;

        StepStats stats = check_positive(st.v, st.t, "step");
        for (std::size_t i = 0; i < n; ++i)
            if (st.u[i] != st.u[i]) {
                std::ostringstream msg;
                msg << "step: NaN velocity at x = " << grid_.x[i] << ", t = " << st.t;
                throw numerical_error(msg.str());
            }
        v_min_seen_ = std::min(v_min_seen_, stats.v_min);
        v_max_seen_ = std::max(v_max_seen_, stats.v_max);
        return stats;
    }

    // dt = CFL * min(dx / c_max, dx^2 / (2 nu_max)); the extrema of the sound
    // speed and viscous weight are attained at the smallest volume.
    double stable_dt(double v_min, double cfl) const {
        const double c_max = sound_speed(v_min, gas_);
        const double nu_max = viscous_weight(v_min, gas_);
        return cfl * std::min(grid_.dx / c_max, grid_.dx * grid_.dx / (2.0 * nu_max));
    }

    double stable_dt(const FluidState& st, double cfl) const {
        double v_min = st.v[0];
        for (double v : st.v) v_min = std::min(v_min, v);
        if (!(v_min > 0.0)) throw numerical_error("stable_dt: non-positive volume in state");
        return stable_dt(v_min, cfl);
    }

    double v_min_seen() const { return v_min_seen_; }
    double v_max_seen() const { return v_max_seen_; }

private:
    void fill_coefficients(std::span<const double> v) {
        const double a = gas_.a, g = gas_.gamma, al = gas_.alpha;
        for (std::size_t i = 0; i < n_; ++i) {
            p_[i] = a * detail::pow_neg_gamma(v[i], g);
            w_[i] = detail::pow_neg_alpha1(v[i], al);
        }
    }

    StepStats check_positive(std::span<const double> v, double t, const char* where) {
        double lo = v[0], hi = v[0];
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(v[i] > 0.0)) {
                std::ostringstream msg;
                msg << where << ": blow-up, v = " << v[i] << " at x = " << grid_.x[i]
                    << ", t = " << t;
                throw numerical_error(msg.str());
            }
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        return {lo, hi};
    }

    GasModel gas_;
    Grid1D grid_;
    std::size_t n_;
    std::vector<double> p_, w_, dv1_, du1_, dv2_, du2_, vs_, us_;
    double v_min_seen_ = 1e300;
    double v_max_seen_ = -1e300;
};

// Convenience wrappers for tests and small drivers.
inline void rhs_semi_discrete(const FluidState& st, const GasModel& gas, const Grid1D& grid,
                              std::span<double> dvdt, std::span<double> dudt) {
    Stepper stepper(gas, grid);
    stepper.rhs(st.v, st.u, dvdt, dudt);
}

inline FluidState step(const FluidState& st, double dt, const GasModel& gas, const Grid1D& grid) {
    FluidState out = st;
    Stepper stepper(gas, grid);
    stepper.advance(out, dt);
    return out;
}

}  // namespace shocklab
