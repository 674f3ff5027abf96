#pragma once

// Gate evaluation: turn measured run quantities into pass/fail verdicts.
// The same gate logic backs the in-memory run verdict, the verdict.json
// artifact, and `verify` re-evaluation from artifacts on disk.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "shocklab/diagnostics.hpp"
#include "shocklab/io.hpp"
#include "shocklab/run.hpp"

namespace shocklab {

struct GateResult {
    std::string name;
    bool applicable = true;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

namespace detail {

inline std::set<std::string> gate_selection(const std::string& gates, bool perturbed) {
    std::set<std::string> sel;
    if (gates == "auto") {
        sel = {"complete", "rh-residuals", "profile-residual", "profile-decay-rates",
               "wall-condition", "positivity-band", "energy-bounded"};
        if (perturbed) {
            sel.insert("sup-decay");
            sel.insert("mass-defect");
            sel.insert("dissipation-tail");
        }
        return sel;
    }
    std::string rest = gates;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string item = rest.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) sel.insert(item);
        if (comma == std::string::npos) break;
        rest = rest.substr(comma + 1);
    }
    sel.insert("complete");
    return sel;
}

}  // namespace detail

// Gate decisions from the measured quantities of one run.
struct RunMeasurements {
    bool complete = true;
    std::string abort_reason;
    double rh_residual_mass = 0.0;
    double rh_residual_momentum = 0.0;
    double profile_ode_residual = 0.0;
    double C_minus = 0.0, C_plus = 0.0;
    double measured_C_minus = 0.0, measured_C_plus = 0.0;
    double v_minus = 0.0, v_plus = 0.0;
    double v_min = 0.0, v_max = 0.0;
    double max_abs_wall_u = 0.0;
    double beta = 0.0;
    // diagnostics series
    std::vector<double> times, sup_error, E2, D, D_integral, mass_defect;
    std::string gates = "auto";
    bool perturbed = false;
};

inline RunMeasurements measurements_from_run(const RunResult& r) {
    RunMeasurements m;
    m.complete = r.record.meta.complete;
    m.abort_reason = r.record.meta.abort_reason;
    m.rh_residual_mass = r.setup.states.rh_residual_mass();
    m.rh_residual_momentum = r.setup.states.rh_residual_momentum(r.config.gas);
    m.profile_ode_residual = r.profile.ode_residual_sup;
    m.C_minus = r.setup.rates.C_minus;
    m.C_plus = r.setup.rates.C_plus;
    m.measured_C_minus = r.measured_C_minus;
    m.measured_C_plus = r.measured_C_plus;
    m.v_minus = r.setup.states.v_minus;
    m.v_plus = r.setup.states.v_plus;
    m.v_min = r.record.meta.v_min;
    m.v_max = r.record.meta.v_max;
    m.max_abs_wall_u = r.record.meta.max_abs_wall_u;
    m.beta = r.config.init.beta;
    m.times = r.record.times;
    m.sup_error = r.record.sup_error;
    m.E2 = r.record.E2;
    m.D = r.record.D;
    m.D_integral = r.record.D_integral;
    m.mass_defect = r.record.mass_defect;
    m.gates = r.config.gates;
    m.perturbed = r.config.init.kind != InitialKind::pure_profile;
    return m;
}

inline std::vector<GateResult> evaluate_gates(const RunMeasurements& m) {
    const auto sel = detail::gate_selection(m.gates, m.perturbed);
    std::vector<GateResult> out;
    const auto want = [&](const char* g) { return sel.count(g) > 0; };

    if (want("complete"))
        out.push_back({"complete", true, m.complete, m.complete ? 1.0 : 0.0, 1.0,
                       m.complete ? "run reached t_final" : m.abort_reason});

    if (want("rh-residuals")) {
        const double res = std::max(std::abs(m.rh_residual_mass), std::abs(m.rh_residual_momentum));
        out.push_back({"rh-residuals", true, res <= 1e-10, res, 1e-10, "max RH residual"});
    }

    if (want("profile-residual"))
        out.push_back({"profile-residual", true, m.profile_ode_residual <= 1e-8,
                       m.profile_ode_residual, 1e-8, "sup ODE residual of the tabulated profile"});

    if (want("profile-decay-rates")) {
        const double dev = std::max(std::abs(m.measured_C_minus / m.C_minus - 1.0),
                                    std::abs(m.measured_C_plus / m.C_plus - 1.0));
        out.push_back({"profile-decay-rates", true, dev <= 0.10, dev, 0.10,
                       "relative deviation of fitted tail exponents"});
    }

    if (want("wall-condition"))
        out.push_back({"wall-condition", true, m.max_abs_wall_u <= 1e-14, m.max_abs_wall_u, 1e-14,
                       "max |u(0,t)| over output frames"});

    if (want("positivity-band")) {
        const bool ok = m.v_min >= 0.5 * m.v_minus && m.v_max <= 1.5 * m.v_plus;
        out.push_back({"positivity-band", true, ok, m.v_min, 0.5 * m.v_minus,
                       "v in [v-/2, 3 v+/2] over the whole run"});
    }

    const bool have_series = m.times.size() >= 2;

    if (want("sup-decay")) {
        GateResult g{"sup-decay", have_series && m.complete, false, 0.0, 0.2,
                     "e(T) / max_t e(t)"};
        if (g.applicable) {
            double emax = 0.0;
            for (double e : m.sup_error) emax = std::max(emax, e);
            g.measured = (emax > 0.0) ? m.sup_error.back() / emax : 0.0;
            g.pass = g.measured <= 0.2;
        }
        out.push_back(g);
    }

    if (want("mass-defect")) {
        GateResult g{"mass-defect", have_series && m.complete, false, 0.0, 0.0,
                     "|m(T)| vs 0.1 |m(0)| + 1e-8"};
        if (g.applicable) {
            g.measured = std::abs(m.mass_defect.back());
            g.threshold = 0.1 * std::abs(m.mass_defect.front()) + 1e-8;
            g.pass = g.measured <= g.threshold;
        }
        out.push_back(g);
    }

    if (want("energy-bounded")) {
        DiagnosticsRecord rec;
        rec.times = m.times;
        rec.E2 = m.E2;
        rec.D = m.D;
        rec.D_integral = m.D_integral;
        rec.meta.complete = m.complete;
        rec.meta.abort_reason = m.abort_reason;
        const auto rep = energy_report(rec, m.beta, m.C_minus);
        out.push_back({"energy-bounded", true, rep.certified && rep.pass, rep.R, 0.0,
                       "R = " + fmt17(rep.R) + "; " + rep.reason});
    }

    if (want("dissipation-tail")) {
        GateResult g{"dissipation-tail", have_series && m.complete, false, 0.0, 0.01,
                     "D(T) / max_t D(t)"};
        if (g.applicable) {
            double dmax = 0.0;
            for (double d : m.D) dmax = std::max(dmax, d);
            g.measured = (dmax > 0.0) ? m.D.back() / dmax : 0.0;
            g.pass = g.measured <= 0.01;
        }
        out.push_back(g);
    }
    return out;
}

// Observed pairwise convergence orders from (dx, err) samples; the gate
// requires every order to sit in [1.7, 2.3].
inline GateResult convergence_gate(std::vector<std::pair<double, double>> samples) {
    GateResult g{"convergence-order", true, false, 0.0, 0.0, ""};
    if (samples.size() < 2) {
        g.applicable = false;
        g.detail = "need at least two resolutions";
        return g;
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    bool ok = true;
    std::string detail = "orders:";
    double last_order = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double order = std::log(samples[i].second / samples[i + 1].second) /
                             std::log(samples[i].first / samples[i + 1].first);
        ok = ok && order >= 1.7 && order <= 2.3;
        detail += " " + fmt17(order);
        last_order = order;
    }
    g.pass = ok;
    g.measured = last_order;
    g.threshold = 2.0;
    g.detail = detail;
    return g;
}

inline nlohmann::json gates_json(const std::vector<GateResult>& gates) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : gates) {
        nlohmann::json j;
        j["name"] = g.name;
        j["applicable"] = g.applicable;
        j["pass"] = g.pass;
        j["measured"] = g.measured;
        j["threshold"] = g.threshold;
        j["detail"] = g.detail;
        arr.push_back(j);
    }
    return arr;
}

inline nlohmann::json run_verdict_json(const RunResult& r) {
    const auto m = measurements_from_run(r);
    const auto gates = evaluate_gates(m);
    const auto energy = energy_report(r.record, r.config.init.beta, r.setup.rates.C_minus);

    nlohmann::json j;
    j["schema"] = "shocklab-verdict-1";
    j["config_hash"] = r.record.meta.config_hash;
    j["complete"] = r.record.meta.complete;
    j["abort_reason"] = r.record.meta.abort_reason;

    nlohmann::json params;
    params["a"] = r.config.gas.a;
    params["gamma"] = r.config.gas.gamma;
    params["alpha"] = r.config.gas.alpha;
    params["v_plus"] = r.config.v_plus;
    params["u_plus"] = r.config.u_plus;
    params["beta"] = r.config.init.beta;
    params["beta0"] = r.record.meta.beta0;
    params["kind"] = to_string(r.config.init.kind);
    params["amplitude"] = r.config.init.amplitude;
    params["L"] = r.setup.L;
    params["n"] = r.setup.n;
    params["dx"] = r.grid.dx;
    params["t_final"] = r.config.t_final;
    params["s"] = r.setup.states.s;
    params["v_minus"] = r.setup.states.v_minus;
    params["C_minus"] = r.setup.rates.C_minus;
    params["C_plus"] = r.setup.rates.C_plus;
    params["gates"] = r.config.gates;
    j["params"] = params;

    nlohmann::json rh;
    rh["residual_mass"] = m.rh_residual_mass;
    rh["residual_momentum"] = m.rh_residual_momentum;
    rh["b"] = r.setup.states.b;
    j["rh"] = rh;

    nlohmann::json prof;
    prof["ode_residual_sup"] = r.profile.ode_residual_sup;
    prof["measured_C_minus"] = r.measured_C_minus;
    prof["measured_C_plus"] = r.measured_C_plus;
    j["profile"] = prof;

    nlohmann::json runj;
    runj["steps"] = r.record.meta.steps;
    runj["v_min"] = r.record.meta.v_min;
    runj["v_max"] = r.record.meta.v_max;
    runj["max_abs_wall_u"] = r.record.meta.max_abs_wall_u;
    runj["psi_consistency_ratio"] = r.record.meta.psi_consistency_ratio;
    runj["sup_error_initial"] = r.record.sup_error.empty() ? 0.0 : r.record.sup_error.front();
    runj["sup_error_final"] = r.record.sup_error.empty() ? 0.0 : r.record.sup_error.back();
    double emax = 0.0;
    for (double e : r.record.sup_error) emax = std::max(emax, e);
    runj["sup_error_max"] = emax;
    runj["mass_defect_initial"] = r.record.mass_defect.empty() ? 0.0 : r.record.mass_defect.front();
    runj["mass_defect_final"] = r.record.mass_defect.empty() ? 0.0 : r.record.mass_defect.back();
    j["run"] = runj;

    nlohmann::json en;
    en["certified"] = energy.certified;
    en["pass"] = energy.pass;
    en["R"] = energy.R;
    en["e2_max"] = energy.e2_max;
    en["last_quartile_slope"] = energy.last_quartile_slope;
    en["d_tail_ratio"] = energy.d_tail_ratio;
    en["reason"] = energy.reason;
    j["energy"] = en;

    j["gates"] = gates_json(gates);
    return j;
}

// Rebuild measurements from a run directory (verdict.json + diagnostics.csv)
// and re-evaluate the gate decisions from the raw series.
inline RunMeasurements measurements_from_artifacts(const std::filesystem::path& dir) {
    const auto verdict_path = dir / "verdict.json";
    std::ifstream in(verdict_path);
    if (!in) throw config_error("missing artifact: " + verdict_path.string());
    nlohmann::json j;
    in >> j;

    RunMeasurements m;
    m.complete = j.at("complete").get<bool>();
    m.abort_reason = j.value("abort_reason", "");
    m.rh_residual_mass = j.at("rh").at("residual_mass").get<double>();
    m.rh_residual_momentum = j.at("rh").at("residual_momentum").get<double>();
    m.profile_ode_residual = j.at("profile").at("ode_residual_sup").get<double>();
    m.measured_C_minus = j.at("profile").at("measured_C_minus").get<double>();
    m.measured_C_plus = j.at("profile").at("measured_C_plus").get<double>();
    m.C_minus = j.at("params").at("C_minus").get<double>();
    m.C_plus = j.at("params").at("C_plus").get<double>();
    m.v_minus = j.at("params").at("v_minus").get<double>();
    m.v_plus = j.at("params").at("v_plus").get<double>();
    m.v_min = j.at("run").at("v_min").get<double>();
    m.v_max = j.at("run").at("v_max").get<double>();
    m.max_abs_wall_u = j.at("run").at("max_abs_wall_u").get<double>();
    m.beta = j.at("params").at("beta").get<double>();
    m.gates = j.at("params").value("gates", "auto");
    m.perturbed = j.at("params").at("kind").get<std::string>() != "pure-profile";

    const auto diag = read_csv(dir / "diagnostics.csv");
    m.times = diag.column("t");
    m.sup_error = diag.column("sup_error");
    m.E2 = diag.column("E2");
    m.D = diag.column("D");
    m.D_integral = diag.column("D_integral");
    m.mass_defect = diag.column("mass_defect");
    return m;
}

}  // namespace shocklab
