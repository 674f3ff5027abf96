#pragma once

// Orchestration: resolve a config into a concrete setup (end states, profile
// grid, domain), march the IBVP, and collect the diagnostics record.

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "shocklab/config.hpp"
#include "shocklab/diagnostics.hpp"
#include "shocklab/profile.hpp"
#include "shocklab/solver.hpp"

namespace shocklab {

struct ResolvedSetup {
    ShockEndStates states;
    DecayRates rates;
    double half_width = 0.0;
    double resolution = 0.0;
    double L = 0.0;
    int n = 0;
    double output_interval = 0.0;
};

// Fill auto discretization values and validate the cross-field constraints.
inline ResolvedSetup resolve_setup(const ExperimentConfig& cfg) {
    ResolvedSetup s;
    s.states = solve_rankine_hugoniot(cfg.v_plus, cfg.u_plus, cfg.gas);
    s.rates = decay_rates(s.states, cfg.gas);

    s.half_width = cfg.profile_half_width.value_or(default_profile_half_width(s.rates));
    s.resolution = cfg.profile_resolution.value_or(default_profile_resolution(s.rates));

    s.L = cfg.grid_L.value_or(cfg.init.beta + s.states.s * cfg.t_final +
                              std::max(12.0 / s.rates.min(), 10.0));
    if (cfg.grid_n) {
        s.n = *cfg.grid_n;
    } else {
        double dx = 0.1 / s.rates.max();
        if (cfg.init.kind != InitialKind::pure_profile)
            dx = std::min(dx, (cfg.init.support_hi - cfg.init.support_lo) / 64.0);
        s.n = static_cast<int>(std::ceil(s.L / dx));
        s.n = std::max(s.n, 64);
        if (s.n > 40000)
            throw config_error(
                "resolved grid.n exceeds 40000; set grid.n (and grid.L) explicitly");
    }

    // domain must hold the shock for the whole run plus ten e-folding lengths
    const double required = s.states.s * cfg.t_final + cfg.init.beta + 10.0 / s.rates.min();
    if (!(s.L > required)) {
        std::ostringstream msg;
        msg << "grid.L = " << s.L << " too small: need L > s*T + beta + 10/min(C) = " << required;
        throw config_error(msg.str());
    }

    s.output_interval = cfg.output_interval.value_or(cfg.t_final / 200.0);
    if (!(s.output_interval > 0.0) || s.output_interval > cfg.t_final)
        throw config_error("time.output_interval must lie in (0, t_final]");
    return s;
}

struct RunResult {
    ExperimentConfig config;
    ResolvedSetup setup;
    ShockProfile profile;
    Grid1D grid;
    ShiftResult shift;
    DiagnosticsRecord record;
    FluidState final_state;
    std::vector<std::pair<double, FluidState>> snapshots;
    double measured_C_minus = 0.0;
    double measured_C_plus = 0.0;
};

// March the configured experiment to T_final, sampling diagnostics every
// output interval. Blow-up aborts early with the partial record flagged
// incomplete.
inline RunResult run(const ExperimentConfig& cfg) {
    RunResult out;
    out.config = cfg;
    out.setup = resolve_setup(cfg);
    const auto& st = out.setup.states;

    out.profile = compute_profile(st, cfg.gas, out.setup.half_width, out.setup.resolution);
    const auto fitted = fit_decay(out.profile);
    out.measured_C_minus = fitted.first;
    out.measured_C_plus = fitted.second;

    out.grid = Grid1D(out.setup.L, out.setup.n);
    FluidState state = make_initial_data(cfg.init, out.profile, out.grid);
    out.shift = compute_shift(state.v, out.grid, cfg.init.beta, out.profile);
    const double beta0 = out.shift.beta0;

    auto& rec = out.record;
    rec.meta.config_hash = config_hash(cfg);
    rec.meta.beta = cfg.init.beta;
    rec.meta.beta0 = beta0;

    // frame schedule: uniform, hitting t_final exactly
    const int frames = std::max(1, static_cast<int>(std::llround(cfg.t_final / out.setup.output_interval)));
    const double dt_out = cfg.t_final / frames;

    // union of diagnostic frames and requested snapshot instants
    std::set<double> targets;
    for (int k = 0; k <= frames; ++k) targets.insert(dt_out * k);
    for (double t : cfg.snapshot_times) targets.insert(std::min(t, cfg.t_final));

    const std::set<double> snapshot_set(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
    const std::set<double> frame_set = [&] {
        std::set<double> f;
        for (int k = 0; k <= frames; ++k) f.insert(dt_out * k);
        return f;
    }();

    Stepper stepper(cfg.gas, out.grid);
    std::uint64_t steps = 0;
    double v_min_cur = *std::min_element(state.v.begin(), state.v.end());
    double prev_D = 0.0, d_int = 0.0, prev_t = 0.0;
    double psi_ratio_max = 0.0, wall_max = 0.0;
    bool first_frame = true;

    const auto sample_frame = [&](double t) {
        const double total_shift = st.s * t + cfg.init.beta - beta0;
        const auto f = diagnose_frame(state, out.profile, total_shift, cfg.gas, out.grid);
        rec.times.push_back(t);
        rec.sup_error.push_back(f.sup_error);
        rec.E2.push_back(f.E2);
        rec.D.push_back(f.D);
        if (first_frame) {
            d_int = 0.0;
            first_frame = false;
        } else {
            d_int += 0.5 * (prev_D + f.D) * (t - prev_t);
        }
        rec.D_integral.push_back(d_int);
        rec.mass_defect.push_back(f.mass_defect);
        rec.boundary_trace.push_back(f.boundary_trace);
        rec.E1_phi_Psi.push_back(f.E1_phi_Psi);
        psi_ratio_max = std::max(psi_ratio_max, f.psi_ratio);
        wall_max = std::max(wall_max, std::abs(state.u[0]));
        prev_D = f.D;
        prev_t = t;
    };

    rec.meta.complete = true;
    try {
        for (double target : targets) {
            while (state.t < target) {
                if (steps >= cfg.max_steps)
                    throw numerical_error("run: step budget exhausted before t_final");
                const double dt = std::min(stepper.stable_dt(v_min_cur, cfg.cfl), target - state.t);
                const auto stats = stepper.advance(state, dt);
                v_min_cur = stats.v_min;
                ++steps;
                if (target - state.t < 1e-12 * cfg.t_final) state.t = target;
            }
            state.t = target;
            if (frame_set.count(target)) sample_frame(target);
            if (snapshot_set.count(target)) out.snapshots.emplace_back(target, state);
        }
    } catch (const numerical_error& err) {
        rec.meta.complete = false;
        rec.meta.abort_reason = err.what();
    }

    rec.meta.steps = steps;
    rec.meta.v_min = stepper.v_min_seen();
    rec.meta.v_max = stepper.v_max_seen();
    rec.meta.max_abs_wall_u = wall_max;
    rec.meta.psi_consistency_ratio = psi_ratio_max;
    out.final_state = std::move(state);
    return out;
}

}  // namespace shocklab
