// shocklab: viscous shock profiles and impermeable-wall experiments for the
// 1-D isentropic Navier-Stokes p-system in Lagrangian coordinates.

#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shocklab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "shocklab: viscous shock profiles and impermeable-wall stability experiments\n"
        "for the 1-D isentropic Navier-Stokes p-system (Lagrangian coordinates)"};
    app.require_subcommand(1);

    std::string config_path, out_dir, verify_dir;
    std::vector<std::string> sweep_configs;
    int jobs = 0;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* cmd, bool with_seed) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: $SHOCKLAB_OUT_ROOT/<hash>)");
        if (with_seed)
            cmd->add_option_function<std::uint64_t>(
                "--seed", [&](std::uint64_t s) { seed = s; },
                "override init.seed of the config");
    };

    auto* rh = app.add_subcommand("rh", "solve the Rankine-Hugoniot end states");
    add_common(rh, false);
    auto* profile = app.add_subcommand("profile", "integrate and tabulate the shock profile");
    add_common(profile, false);
    auto* simulate = app.add_subcommand("simulate", "run the wall IBVP and record diagnostics");
    add_common(simulate, true);

    auto* sweep = app.add_subcommand("sweep", "run several configs and aggregate a summary");
    sweep->add_option("--configs", sweep_configs, "config files")->required()->expected(-1);
    sweep->add_option("--out", out_dir, "output root (default: $SHOCKLAB_OUT_ROOT or ./runs)");
    sweep->add_option("--jobs", jobs, "concurrent runs (default: hardware threads)");
    sweep->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { seed = s; }, "override init.seed of every config");

    auto* verify = app.add_subcommand("verify", "evaluate acceptance gates on run artifacts");
    verify->add_option("--dir", verify_dir, "artifact directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rh->parsed() || profile->parsed() || simulate->parsed()) {
            auto cfg = shocklab::load_config_file(config_path);
            if (seed) cfg.init.seed = *seed;
            if (rh->parsed()) return shocklab::cmd_rh(cfg, out_dir);
            if (profile->parsed()) return shocklab::cmd_profile(cfg, out_dir);
            return shocklab::cmd_simulate(cfg, out_dir);
        }
        if (sweep->parsed()) return shocklab::cmd_sweep(sweep_configs, out_dir, jobs, seed);
        return shocklab::cmd_verify(verify_dir);
    } catch (const std::exception& e) {
        return shocklab::fail_json("cli", e.what());
    }
}
