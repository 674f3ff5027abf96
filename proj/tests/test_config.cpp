#include <catch2/catch_amalgamated.hpp>

#include "shocklab/config.hpp"

using namespace shocklab;

namespace {

const char* kMinimal =
    "gas.gamma = 1.4\n"
    "state.v_plus = 1\n"
    "state.u_plus = -0.1\n"
    "init.beta = 30\n";

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.gas.a == 1.0);
    CHECK(cfg.gas.alpha == 0.0);
    CHECK(cfg.init.kind == InitialKind::pure_profile);
    CHECK(cfg.init.amplitude == 0.0);
    CHECK(cfg.t_final == 20.0);
    CHECK(cfg.cfl == 0.4);
    CHECK_FALSE(cfg.grid_L.has_value());
    CHECK_FALSE(cfg.grid_n.has_value());
    CHECK_FALSE(cfg.output_interval.has_value());
    CHECK(cfg.snapshot_times == std::vector<double>{0.0, 20.0});
    CHECK(cfg.gates == "auto");
}

TEST_CASE("hash is stable under key reordering and default expansion") {
    const auto a = parse_config(kMinimal);
    const auto b = parse_config(
        "init.beta = 30\n"
        "state.u_plus = -0.1\n"
        "gas.gamma = 1.4\n"
        "state.v_plus = 1\n");
    const auto c = parse_config(
        "gas.gamma = 1.4\ngas.a = 1\ngas.alpha = 0\n"
        "state.v_plus = 1\nstate.u_plus = -0.1\ninit.beta = 30\n"
        "time.t_final = 20\ntime.cfl = 0.4\n");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) == config_hash(c));
    CHECK(a == b);
}

TEST_CASE("round trip: serialize then parse reproduces the config") {
    const auto cfg = parse_config(
        "gas.gamma = 1.6666666666666667\n"
        "gas.a = 1.5\n"
        "gas.alpha = 0.5\n"
        "state.v_plus = 2\n"
        "state.u_plus = -3\n"
        "init.beta = 25.5\n"
        "init.kind = bump\n"
        "init.amplitude = 0.05\n"
        "init.support_lo = 20\n"
        "init.support_hi = 31\n"
        "grid.L = 120\n"
        "grid.n = 4096\n"
        "time.t_final = 8\n"
        "time.snapshots = 0,4,8\n"
        "profile.resolution = 0.001\n");
    const auto again = parse_config(serialize_config(cfg));
    CHECK(cfg == again);
    CHECK(config_hash(cfg) == config_hash(again));
}

TEST_CASE("physical invalidity is rejected with the named constraint") {
    CHECK_THROWS_WITH(parse_config("gas.gamma = 0.9\nstate.v_plus = 1\nstate.u_plus = -1\ninit.beta = 10\n"),
                      Catch::Matchers::ContainsSubstring("gamma must exceed 1"));
    CHECK_THROWS_WITH(parse_config("gas.gamma = 1.4\nstate.v_plus = -1\nstate.u_plus = -1\ninit.beta = 10\n"),
                      Catch::Matchers::ContainsSubstring("v_plus must be positive"));
    CHECK_THROWS_WITH(parse_config("gas.gamma = 1.4\nstate.v_plus = 1\nstate.u_plus = 0.5\ninit.beta = 10\n"),
                      Catch::Matchers::ContainsSubstring("u_plus must be negative"));
}

TEST_CASE("schema violations name the offending key") {
    CHECK_THROWS_WITH(parse_config(std::string(kMinimal) + "grid.spacing = 3\n"),
                      Catch::Matchers::ContainsSubstring("unknown key 'grid.spacing'"));
    CHECK_THROWS_WITH(parse_config(std::string(kMinimal) + "init.beta = 40\n"),
                      Catch::Matchers::ContainsSubstring("duplicate key"));
    CHECK_THROWS_WITH(parse_config("gas.gamma = abc\nstate.v_plus = 1\nstate.u_plus = -1\ninit.beta = 10\n"),
                      Catch::Matchers::ContainsSubstring("gas.gamma"));
    CHECK_THROWS_WITH(parse_config("state.v_plus = 1\nstate.u_plus = -1\ninit.beta = 10\n"),
                      Catch::Matchers::ContainsSubstring("gas.gamma"));
}

TEST_CASE("comments and whitespace are tolerated") {
    const auto cfg = parse_config(
        "# experiment\n"
        "  gas.gamma = 1.4   # adiabatic exponent\n"
        "\n"
        "state.v_plus = 1\n"
        "state.u_plus = -0.1  \n"
        "init.beta = 30\n");
    CHECK(cfg.gas.gamma == 1.4);
    CHECK(cfg.u_plus == -0.1);
}
