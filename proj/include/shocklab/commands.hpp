#pragma once

// Subcommand implementations behind the CLI: rh, profile, simulate, sweep,
// verify. Each writes machine-readable artifacts into a run directory and
// reports errors as JSON on stdout with a nonzero exit status.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "shocklab/config.hpp"
#include "shocklab/io.hpp"
#include "shocklab/run.hpp"
#include "shocklab/verify.hpp"

namespace shocklab {

namespace fs = std::filesystem;

inline ExperimentConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

inline int fail_json(const std::string& type, const std::string& message) {
    nlohmann::json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cout << j.dump(2) << std::endl;
    return 1;
}

// Output directory precedence: --out flag, then paths.out_dir from the
// config, then $SHOCKLAB_OUT_ROOT/<hash>, then ./runs/<hash>.
inline fs::path resolve_out_dir(const ExperimentConfig& cfg, const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    const char* root = std::getenv("SHOCKLAB_OUT_ROOT");
    const fs::path base = root ? fs::path(root) : fs::path("runs");
    return base / config_hash(cfg);
}

inline int cmd_rh(const ExperimentConfig& cfg, const std::string& out_flag) {
    try {
        const auto st = solve_rankine_hugoniot(cfg.v_plus, cfg.u_plus, cfg.gas);
        const auto rates = decay_rates(st, cfg.gas);
        nlohmann::json j;
        j["v_minus"] = st.v_minus;
        j["v_plus"] = st.v_plus;
        j["u_plus"] = st.u_plus;
        j["s"] = st.s;
        j["b"] = st.b;
        j["residual_mass"] = st.rh_residual_mass();
        j["residual_momentum"] = st.rh_residual_momentum(cfg.gas);
        j["lax_admissible"] = st.lax_admissible(cfg.gas);
        j["C_minus"] = rates.C_minus;
        j["C_plus"] = rates.C_plus;
        j["shock_strength"] = st.jump();

        const fs::path dir = resolve_out_dir(cfg, out_flag);
        fs::create_directories(dir);
        write_text(dir / "rh.json", j.dump(2) + "\n");
        std::cout << j.dump(2) << std::endl;
        return 0;
    } catch (const std::exception& e) {
        return fail_json("rh", e.what());
    }
}

// Re-anchored integration compared after renormalization; validation value
// written into the profile summary.
inline double translation_invariance_sup(const ShockEndStates& st, const GasModel& gas,
                                         double half_width, double resolution) {
    const auto base = compute_profile(st, gas, half_width, resolution);
    const auto shifted = compute_profile_anchored(st, gas, half_width, resolution, 0.65);
    const double target = 0.5 * (st.v_minus + st.v_plus);
    double lo = -half_width, hi = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shifted(mid).V > target)
            hi = mid;
        else
            lo = mid;
    }
    const double xi_star = 0.5 * (lo + hi);
    double sup = 0.0;
    for (double x = -0.7 * half_width; x <= 0.7 * half_width; x += 0.37 * resolution)
        sup = std::max(sup, std::abs(shifted(x + xi_star).V - base(x).V));
    return sup;
}

inline int cmd_profile(const ExperimentConfig& cfg, const std::string& out_flag) {
    try {
        const auto setup = resolve_setup(cfg);
        const auto profile =
            compute_profile(setup.states, cfg.gas, setup.half_width, setup.resolution);
        const auto [cm, cp] = fit_decay(profile);

        auto j = profile_summary_json(profile, cm, cp);
        j["translation_invariance_sup"] =
            translation_invariance_sup(setup.states, cfg.gas, setup.half_width, setup.resolution);

        const fs::path dir = resolve_out_dir(cfg, out_flag);
        fs::create_directories(dir);
        write_profile_csv(dir / "profile.csv", profile);
        write_text(dir / "profile_summary.json", j.dump(2) + "\n");
        std::cout << j.dump(2) << std::endl;
        return 0;
    } catch (const std::exception& e) {
        return fail_json("profile", e.what());
    }
}

inline void write_run_artifacts(const RunResult& r, const fs::path& dir) {
    fs::create_directories(dir);
    write_text(dir / "config.canonical.cfg", serialize_config(r.config));
    write_profile_csv(dir / "profile.csv", r.profile);
    write_text(dir / "profile_summary.json",
               profile_summary_json(r.profile, r.measured_C_minus, r.measured_C_plus).dump(2) +
                   "\n");
    write_diagnostics_csv(dir / "diagnostics.csv", r.record);

    nlohmann::json index = nlohmann::json::array();
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04zu.csv", k);
        write_snapshot_csv(dir / name, r.grid, r.snapshots[k].second);
        nlohmann::json entry;
        entry["index"] = k;
        entry["t"] = r.snapshots[k].first;
        entry["file"] = name;
        index.push_back(entry);
    }

    auto verdict = run_verdict_json(r);
    verdict["snapshots"] = index;
    if (!r.shift.warning.empty()) verdict["shift_warning"] = r.shift.warning;
    write_text(dir / "verdict.json", verdict.dump(2) + "\n");
}

inline int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_flag) {
    try {
        const auto result = run(cfg);
        const fs::path dir = resolve_out_dir(cfg, out_flag);
        write_run_artifacts(result, dir);
        std::cout << "run " << result.record.meta.config_hash << ": "
                  << (result.record.meta.complete ? "complete" : "INCOMPLETE") << ", artifacts in "
                  << dir.string() << std::endl;
        if (!result.record.meta.complete)
            return fail_json("simulate", "run aborted: " + result.record.meta.abort_reason);
        return 0;
    } catch (const std::exception& e) {
        return fail_json("simulate", e.what());
    }
}

struct SweepRow {
    std::string hash;
    double gamma = 0, alpha = 0, u_plus = 0, v_plus = 0, beta = 0;
    double shock_strength = 0, sup_ratio = 0, energy_R = 0;
    bool complete = false, all_pass = false;
    std::string error;
};

inline SweepRow sweep_one(const ExperimentConfig& cfg, const fs::path& root) {
    SweepRow row;
    row.hash = config_hash(cfg);
    row.gamma = cfg.gas.gamma;
    row.alpha = cfg.gas.alpha;
    row.u_plus = cfg.u_plus;
    row.v_plus = cfg.v_plus;
    row.beta = cfg.init.beta;
    try {
        const auto result = run(cfg);
        write_run_artifacts(result, root / row.hash);
        row.shock_strength = result.setup.states.jump();
        double emax = 0.0;
        for (double e : result.record.sup_error) emax = std::max(emax, e);
        row.sup_ratio =
            (emax > 0.0 && !result.record.sup_error.empty()) ? result.record.sup_error.back() / emax : 0.0;
        const auto energy = energy_report(result.record, cfg.init.beta, result.setup.rates.C_minus);
        row.energy_R = energy.R;
        row.complete = result.record.meta.complete;
        const auto gates = evaluate_gates(measurements_from_run(result));
        row.all_pass = true;
        for (const auto& g : gates) row.all_pass = row.all_pass && (!g.applicable || g.pass);
    } catch (const std::exception& e) {
        row.error = e.what();
        nlohmann::json j;
        j["error"]["type"] = "sweep-run";
        j["error"]["message"] = row.error;
        fs::create_directories(root / row.hash);
        write_text(root / row.hash / "error.json", j.dump(2) + "\n");
    }
    return row;
}

inline int cmd_sweep(const std::vector<std::string>& config_paths, const std::string& out_flag,
                     int jobs, std::optional<std::uint64_t> seed_override) {
    try {
        if (config_paths.empty()) throw config_error("sweep: no configs given");
        std::vector<ExperimentConfig> configs;
        for (const auto& p : config_paths) {
            auto cfg = load_config_file(p);
            if (seed_override) cfg.init.seed = *seed_override;
            configs.push_back(cfg);
        }
        const char* env_root = std::getenv("SHOCKLAB_OUT_ROOT");
        const fs::path root = !out_flag.empty()   ? fs::path(out_flag)
                              : env_root != nullptr ? fs::path(env_root)
                                                    : fs::path("runs");
        fs::create_directories(root);

        std::vector<SweepRow> rows(configs.size());
        const int workers = jobs > 0 ? jobs
                                     : std::max(1u, std::thread::hardware_concurrency());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= configs.size()) break;
                rows[i] = sweep_one(configs[i], root);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        std::sort(rows.begin(), rows.end(),
                  [](const SweepRow& a, const SweepRow& b) { return a.hash < b.hash; });

        std::string csv =
            "config_hash,gamma,alpha,u_plus,v_plus,beta,shock_strength,sup_ratio,energy_R,"
            "complete,all_pass\n";
        for (const auto& r : rows) {
            csv += r.hash + ',' + fmt17(r.gamma) + ',' + fmt17(r.alpha) + ',' + fmt17(r.u_plus) +
                   ',' + fmt17(r.v_plus) + ',' + fmt17(r.beta) + ',' + fmt17(r.shock_strength) +
                   ',' + fmt17(r.sup_ratio) + ',' + fmt17(r.energy_R) + ',' +
                   (r.complete ? "1" : "0") + ',' + (r.all_pass ? "1" : "0") + '\n';
        }
        write_text(root / "summary.csv", csv);
        std::cout << csv;
        bool any_error = false;
        for (const auto& r : rows) any_error = any_error || !r.error.empty();
        return any_error ? 1 : 0;
    } catch (const std::exception& e) {
        return fail_json("sweep", e.what());
    }
}

inline int cmd_verify(const std::string& dir_arg) {
    try {
        const fs::path dir(dir_arg);
        if (!fs::exists(dir)) throw config_error("verify: no artifacts at " + dir.string());

        std::vector<fs::path> run_dirs;
        if (fs::exists(dir / "verdict.json")) run_dirs.push_back(dir);
        if (fs::is_directory(dir))
            for (const auto& entry : fs::recursive_directory_iterator(dir))
                if (entry.is_regular_file() && entry.path().filename() == "verdict.json" &&
                    entry.path().parent_path() != dir)
                    run_dirs.push_back(entry.path().parent_path());
        std::sort(run_dirs.begin(), run_dirs.end());

        const bool have_convergence = fs::exists(dir / "convergence.csv");
        if (run_dirs.empty() && !have_convergence)
            throw config_error("verify: no artifacts found under " + dir.string());

        bool all_pass = true;
        int evaluated = 0;
        for (const auto& rd : run_dirs) {
            const auto m = measurements_from_artifacts(rd);
            const auto gates = evaluate_gates(m);
            for (const auto& g : gates) {
                if (!g.applicable) continue;
                ++evaluated;
                all_pass = all_pass && g.pass;
                std::printf("[%s] %-22s %-20s measured=%-12.5g threshold=%-12.5g %s\n",
                            g.pass ? "PASS" : "FAIL", rd.filename().string().c_str(),
                            g.name.c_str(), g.measured, g.threshold, g.detail.c_str());
            }
        }

        if (have_convergence) {
            const auto table = read_csv(dir / "convergence.csv");
            const auto& dx = table.column("dx");
            const auto& err = table.column("err");
            std::vector<std::pair<double, double>> samples;
            for (std::size_t i = 0; i < dx.size(); ++i) samples.emplace_back(dx[i], err[i]);
            const auto g = convergence_gate(samples);
            ++evaluated;
            all_pass = all_pass && g.pass;
            std::printf("[%s] %-22s %-20s %s\n", g.pass ? "PASS" : "FAIL", "convergence.csv",
                        g.name.c_str(), g.detail.c_str());
        }

        std::printf("%d gates evaluated: %s\n", evaluated, all_pass ? "ALL PASS" : "FAILURES");
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        return fail_json("verify", e.what());
    }
}

}  // namespace shocklab
