#pragma once

// Quantities the stability analysis tracks: anti-derivative perturbations
// (phi, psi), the effective-velocity field h = u - v^-(alpha+1) v_x and its
// anti-derivative Psi, Sobolev norms, energy and dissipation functionals,
// sup-norm error against the shifted profile, and the mass defect.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shocklab/errors.hpp"
#include "shocklab/gas.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/profile.hpp"
#include "shocklab/solver.hpp"
#include "shocklab/stencils.hpp"

namespace shocklab {

// F(x) = -int_x^L f dy by right-to-left trapezoid accumulation; F(L) = 0.
// The tail beyond L is taken as zero, certified by the decayed-tail check.
inline std::vector<double> anti_derivative(std::span<const double> f, const Grid1D& grid,
                                           std::vector<std::string>* warnings = nullptr) {
    if (f.size() != grid.nodes()) throw config_error("anti_derivative: size mismatch");
    double peak = 0.0;
    for (double x : f) peak = std::max(peak, std::abs(x));
    if (warnings && peak > 0.0 && std::abs(f.back()) > 1e-8 * peak)
        warnings->push_back("anti_derivative: field has not decayed at x = L");

    std::vector<double> F(f.size());
    F.back() = 0.0;
    for (std::size_t i = f.size() - 1; i-- > 0;)
        F[i] = F[i + 1] - 0.5 * grid.dx * (f[i] + f[i + 1]);
    return F;
}

// h = u - v^-(alpha+1) v_x with the solver's first-derivative stencil.
inline std::vector<double> effective_velocity(const FluidState& st, const GasModel& gas,
                                              const Grid1D& grid) {
    std::vector<double> dv(grid.nodes());
    diff1(st.v, grid.dx, dv);
    std::vector<double> h(grid.nodes());
    for (std::size_t i = 0; i < grid.nodes(); ++i)
        h[i] = st.u[i] - viscous_weight(st.v[i], gas) * dv[i];
    return h;
}

struct PerturbationFields {
    std::vector<double> phi;      // -int_x^inf (v - V_shift)
    std::vector<double> psi;      // -int_x^inf (u - U_shift)
    std::vector<double> h_field;  // effective velocity of the state
    std::vector<double> Psi;      // -int_x^inf (h - H_shift)
};

// total_shift = s t + beta - beta0; profile fields are evaluated at x - total_shift.
inline PerturbationFields compute_perturbations(const FluidState& st, const ShockProfile& profile,
                                                double total_shift, const GasModel& gas,
                                                const Grid1D& grid,
                                                std::vector<std::string>* warnings = nullptr) {
    const std::size_t n = grid.nodes();
    std::vector<double> dv(n), du(n), dh(n);
    PerturbationFields out;
    out.h_field = effective_velocity(st, gas, grid);
    for (std::size_t i = 0; i < n; ++i) {
        const auto pt = profile(grid.x[i] - total_shift);
        dv[i] = st.v[i] - pt.V;
        du[i] = st.u[i] - pt.U;
        dh[i] = out.h_field[i] - pt.H;
    }
    out.phi = anti_derivative(dv, grid, warnings);
    out.psi = anti_derivative(du, grid, warnings);
    out.Psi = anti_derivative(dh, grid, warnings);
    return out;
}

struct SobolevNorms {
    int order = 0;
    std::array<double, 3> l2{};  // ||d^k f|| for k = 0..order
    double combined = 0.0;       // ||f||_order
};

inline SobolevNorms sobolev_norms(std::span<const double> f, const Grid1D& grid, int order) {
    if (order < 0 || order > 2) throw config_error("sobolev_norms: order must be 0, 1, or 2");
    SobolevNorms out;
    out.order = order;
    out.l2[0] = l2_norm(f, grid.dx);
    if (order >= 1) out.l2[1] = l2_norm(diff1(f, grid.dx), grid.dx);
    if (order >= 2) out.l2[2] = l2_norm(diff2(f, grid.dx), grid.dx);
    double acc = 0.0;
    for (int k = 0; k <= order; ++k) acc += out.l2[static_cast<std::size_t>(k)] * out.l2[static_cast<std::size_t>(k)];
    out.combined = std::sqrt(acc);
    return out;
}

// e(t) = max_i |v_i - V_shift,i| + |u_i - U_shift,i|.
inline double sup_error(const FluidState& st, const ShockProfile& profile, double total_shift,
                        const Grid1D& grid) {
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const auto pt = profile(grid.x[i] - total_shift);
        sup = std::max(sup, std::abs(st.v[i] - pt.V) + std::abs(st.u[i] - pt.U));
    }
    return sup;
}

inline double mass_defect(const FluidState& st, const ShockProfile& profile, double total_shift,
                          const Grid1D& grid) {
    std::vector<double> diff(grid.nodes());
    for (std::size_t i = 0; i < grid.nodes(); ++i)
        diff[i] = st.v[i] - profile(grid.x[i] - total_shift).V;
    return trapz(diff, grid.dx);
}

struct DiagnosticsMeta {
    std::string config_hash;
    double beta = 0.0;
    double beta0 = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    double max_abs_wall_u = 0.0;
    double psi_consistency_ratio = 0.0;  // max_t ||Psi - psi|| / ||phi_x||_1
    std::size_t steps = 0;
    bool complete = true;
    std::string abort_reason;
};

struct DiagnosticsRecord {
    std::vector<double> times;
    std::vector<double> sup_error;
    std::vector<double> E2;          // ||(phi,psi)||_2^2
    std::vector<double> D;           // ||phi_x||_1^2 + ||psi_x||_2^2
    std::vector<double> D_integral;  // running int_0^t D dt
    std::vector<double> mass_defect;
    std::vector<double> boundary_trace;  // |phi(0,t)|
    std::vector<double> E1_phi_Psi;      // ||(phi,Psi)||_1^2, logged, not gated
    DiagnosticsMeta meta;

    std::size_t frames() const { return times.size(); }
};

struct FrameDiagnostics {
    double sup_error = 0.0;
    double E2 = 0.0;
    double D = 0.0;
    double mass_defect = 0.0;
    double boundary_trace = 0.0;
    double E1_phi_Psi = 0.0;
    double psi_ratio = 0.0;  // ||Psi - psi|| / ||phi_x||_1 when well defined
};

inline FrameDiagnostics diagnose_frame(const FluidState& st, const ShockProfile& profile,
                                       double total_shift, const GasModel& gas,
                                       const Grid1D& grid) {
    const auto fields = compute_perturbations(st, profile, total_shift, gas, grid);
    const auto phi_n = sobolev_norms(fields.phi, grid, 2);
    const auto psi_n = sobolev_norms(fields.psi, grid, 2);
    const auto Psi_n = sobolev_norms(fields.Psi, grid, 1);

    FrameDiagnostics f;
    f.sup_error = sup_error(st, profile, total_shift, grid);
    f.E2 = phi_n.combined * phi_n.combined + psi_n.combined * psi_n.combined;

    const double phi_x_h1_sq = phi_n.l2[1] * phi_n.l2[1] + phi_n.l2[2] * phi_n.l2[2];
    const double psi_xxx = l2_norm(diff3(fields.psi, grid.dx), grid.dx);
    const double psi_x_h2_sq =
        psi_n.l2[1] * psi_n.l2[1] + psi_n.l2[2] * psi_n.l2[2] + psi_xxx * psi_xxx;
    f.D = phi_x_h1_sq + psi_x_h2_sq;

    f.mass_defect = mass_defect(st, profile, total_shift, grid);
    f.boundary_trace = std::abs(fields.phi[0]);
    f.E1_phi_Psi = phi_n.l2[0] * phi_n.l2[0] + phi_n.l2[1] * phi_n.l2[1] +
                   Psi_n.combined * Psi_n.combined;

    std::vector<double> gap(grid.nodes());
    for (std::size_t i = 0; i < grid.nodes(); ++i) gap[i] = fields.Psi[i] - fields.psi[i];
    const double gap_norm = l2_norm(gap, grid.dx);
    const double phi_x_h1 = std::sqrt(phi_x_h1_sq);
    f.psi_ratio = (phi_x_h1 > 1e-13) ? gap_norm / phi_x_h1 : 0.0;
    return f;
}

// Least-squares slope of log(max(|y|, floor)) over the trailing fraction of
// the series; returns the decay rate lambda for y ~ exp(-lambda t).
inline double fit_log_decay_rate(std::span<const double> times, std::span<const double> values,
                                 double window = 0.5, double floor_value = 1e-14) {
    if (times.size() != values.size() || times.size() < 4)
        throw config_error("fit_log_decay_rate: need matching series with at least 4 samples");
    const double t_lo = times.back() - window * (times.back() - times.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_lo) continue;
        const double y = std::log(std::max(std::abs(values[k]), floor_value));
        sx += times[k];
        sy += y;
        sxx += times[k] * times[k];
        sxy += times[k] * y;
        cnt += 1.0;
    }
    return -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

struct EnergyReport {
    bool certified = false;  // record complete enough to judge
    bool pass = false;
    double R = 0.0;                    // max_t (E2 + int D) / (E2(0) + exp(-C- beta))
    double denominator = 0.0;
    double e2_max = 0.0;
    double last_quartile_slope = 0.0;  // linear-fit slope of E2 on the last quartile
    double d_tail_ratio = 0.0;         // D(T) / max_t D
    std::string reason;
};

// Measured counterpart of the a priori bound: the H2 energy plus accumulated
// dissipation stays bounded by a finite multiple of the initial data plus the
// boundary-interaction budget exp(-C- beta), with no late-time growth.
inline EnergyReport energy_report(const DiagnosticsRecord& rec, double beta, double c_minus) {
    EnergyReport rep;
    if (!rec.meta.complete) {
        rep.certified = false;
        rep.pass = false;
        rep.reason = "record incomplete: " + rec.meta.abort_reason;
        return rep;
    }
    if (rec.frames() < 8) {
        rep.certified = false;
        rep.pass = false;
        rep.reason = "too few frames to certify";
        return rep;
    }
    rep.certified = true;

    rep.denominator = rec.E2.front() + std::exp(-c_minus * beta);
    double num = 0.0, e2max = 0.0, dmax = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < rec.frames(); ++k) {
        if (!std::isfinite(rec.E2[k]) || !std::isfinite(rec.D_integral[k])) finite = false;
        num = std::max(num, rec.E2[k] + rec.D_integral[k]);
        e2max = std::max(e2max, rec.E2[k]);
        dmax = std::max(dmax, rec.D[k]);
    }
    rep.R = num / rep.denominator;
    rep.e2_max = e2max;
    rep.d_tail_ratio = (dmax > 0.0) ? rec.D.back() / dmax : 0.0;

    // least-squares slope of E2 over the last quartile of the time range
    const double t_lo = rec.times.back() - 0.25 * (rec.times.back() - rec.times.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t k = 0; k < rec.frames(); ++k) {
        if (rec.times[k] < t_lo) continue;
        sx += rec.times[k];
        sy += rec.E2[k];
        sxx += rec.times[k] * rec.times[k];
        sxy += rec.times[k] * rec.E2[k];
        cnt += 1.0;
    }
    rep.last_quartile_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

    const double span = std::max(rec.times.back() - t_lo, 1e-300);
    const double growth_allowance = 1e-8 * std::max(e2max, 1e-300) / span;
    const bool no_growth = rep.last_quartile_slope <= growth_allowance;

    rep.pass = finite && std::isfinite(rep.R) && no_growth;
    if (!finite)
        rep.reason = "non-finite energy series";
    else if (!no_growth)
        rep.reason = "late-time growth trend in E2";
    else
        rep.reason = "bounded";
    return rep;
}

}  // namespace shocklab
