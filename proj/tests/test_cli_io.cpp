#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "gaom/gaom.hpp"
#include "test_support.hpp"

using namespace gaom;
using testsup::close;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_file(const std::string& stem,
                                   const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() /
                      (stem + "." + std::to_string(::getpid()));
    std::ofstream out(path, std::ios::binary);
    out << text;
    REQUIRE(out.good());
    return path;
}

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(GAOM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = ::pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

/// Small but bistable run: seven powers across the amplification window.
RunConfig small_config() {
    RunConfig cfg = preset_config("fig2b");
    cfg.sweep.points = 7;
    return cfg;
}

} // namespace

TEST_CASE("config round trip", "[cli-io]") {
    RunConfig cfg = small_config();
    cfg.noise.n_m = 100.0;
    cfg.outputs.format = Format::Json;
    cfg.outputs.path = "table.json";

    const std::string text = emit_config(cfg);
    const RunConfig back = parse_config(text);

    REQUIRE(back.params.omega_d == cfg.params.omega_d);
    REQUIRE(back.params.gamma_m == cfg.params.gamma_m);
    REQUIRE(back.params.g == cfg.params.g);
    REQUIRE(back.params.J == cfg.params.J);
    REQUIRE(back.params.kappa1_e == cfg.params.kappa1_e);
    REQUIRE(back.params.gain == cfg.params.gain);
    REQUIRE(back.sweep.points == cfg.sweep.points);
    REQUIRE(back.sweep.spacing == cfg.sweep.spacing);
    REQUIRE(back.noise.n_m == cfg.noise.n_m);
    REQUIRE(back.outputs.path == cfg.outputs.path);
    REQUIRE(back.outputs.format == cfg.outputs.format);

    // Canonical serialization is a fixed point.
    REQUIRE(emit_config(back) == text);
}

TEST_CASE("config parse errors", "[cli-io]") {
    const std::string base = emit_config(small_config());
    auto mutate = [&](auto&& fn) {
        nlohmann::json j = nlohmann::json::parse(base);
        fn(j);
        return j.dump();
    };

    REQUIRE_THROWS_AS(parse_config("not json"), config_error);
    REQUIRE_THROWS_AS(parse_config("[1,2]"), config_error);
    REQUIRE_THROWS_AS(parse_config("{}"), config_error);

    // Unknown or ill-typed fields are named and rejected.
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["params"]["zeta"] = 1.0; })),
        config_error);
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["typo_section"] = 1; })),
        config_error);
    REQUIRE_THROWS_AS(parse_config(mutate([](auto& j) {
                          j["params"]["g_over_2pi_hz"] = "800";
                      })),
                      config_error);
    REQUIRE_THROWS_AS(parse_config(mutate([](auto& j) {
                          j["params"].erase("omega_m_over_2pi_hz");
                      })),
                      config_error);

    // Range checks.
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["sweep"]["points"] = 1; })),
        config_error);
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["noise"]["n_points"] = 10; })),
        config_error);
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["sweep"]["p_min_w"] = 1e-4; })),
        config_error); // exceeds p_max_w
    REQUIRE_THROWS_AS(
        parse_config(mutate([](auto& j) { j["sweep"]["spacing"] = "geom"; })),
        config_error);

    // Physics-level validation runs at parse time.
    REQUIRE_THROWS_AS(parse_config(mutate([](auto& j) {
                          j["params"]["gain_over_2pi_hz"] = 3.0e8;
                      })),
                      gain_exceeds_loss);
    REQUIRE_THROWS_AS(parse_config(mutate([](auto& j) {
                          j["params"]["omega_m_over_2pi_hz"] = 0.0;
                      })),
                      non_positive_rate);
}

TEST_CASE("alternative decay-rate spellings", "[cli-io]") {
    const std::string base = emit_config(small_config());
    auto with = [&](auto&& fn) {
        nlohmann::json j = nlohmann::json::parse(base);
        fn(j["params"]);
        return parse_config(j.dump());
    };

    SECTION("total kappa1 fixes the intrinsic part") {
        const RunConfig cfg = with([](auto& p) {
            p.erase("kappa1_o_over_2pi_hz");
            p["kappa1_over_2pi_hz"] = 2.5e8;
        });
        REQUIRE(close(cfg.params.kappa1_o, 1.5e8, 1e-12));
    }

    SECTION("kappa_eff fixes the gain") {
        const RunConfig cfg = with([](auto& p) {
            p.erase("gain_over_2pi_hz");
            p["kappa_eff_over_2pi_hz"] = 3.0e5;
        });
        REQUIRE(close(cfg.params.gain, 1.0e8 - 3.0e5, 1e-12));
        REQUIRE(close(cfg.system_params().kappa_eff(), two_pi * 3.0e5, 1e-12));
    }

    SECTION("external coupling above the stated total") {
        REQUIRE_THROWS_AS(with([](auto& p) {
                              p.erase("kappa1_o_over_2pi_hz");
                              p["kappa1_over_2pi_hz"] = 0.5e8;
                          }),
                          external_exceeds_total);
    }

    SECTION("redundant pairs are rejected") {
        REQUIRE_THROWS_AS(
            with([](auto& p) { p["kappa_eff_over_2pi_hz"] = 2.0e5; }),
            config_error);
        REQUIRE_THROWS_AS(
            with([](auto& p) { p["kappa1_over_2pi_hz"] = 2.0e8; }),
            config_error);
    }
}

TEST_CASE("config overrides", "[cli-io]") {
    RunConfig cfg = small_config();

    SECTION("dotted and bare keys") {
        apply_override(cfg, "params.g_over_2pi_hz=0");
        REQUIRE(cfg.params.g == 0.0);
        apply_override(cfg, "j_over_2pi_hz=1.2e6");
        REQUIRE(cfg.params.J == 1.2e6);
        apply_override(cfg, "sweep.points=12");
        REQUIRE(cfg.sweep.points == 12);
        apply_override(cfg, "n_points=21");
        REQUIRE(cfg.noise.n_points == 21);
        apply_override(cfg, "format=json");
        REQUIRE(cfg.outputs.format == Format::Json);
    }

    SECTION("alternative spellings displace their partner") {
        apply_override(cfg, "kappa_eff_over_2pi_hz=4e5");
        REQUIRE(close(cfg.params.gain, 1.0e8 - 4.0e5, 1e-12));
        apply_override(cfg, "kappa1_over_2pi_hz=3e8");
        REQUIRE(close(cfg.params.kappa1_o, 2.0e8, 1e-12));
        // The earlier override materialized the gain, so kappa_eff now
        // floats with the new total kappa1.
        REQUIRE(close(cfg.system_params().kappa_eff(),
                      two_pi * (3.0e8 - (1.0e8 - 4.0e5)), 1e-12));
    }

    SECTION("bad overrides") {
        REQUIRE_THROWS_AS(apply_override(cfg, "no_equals_sign"), config_error);
        REQUIRE_THROWS_AS(apply_override(cfg, "=5"), config_error);
        REQUIRE_THROWS_AS(apply_override(cfg, "unknown_key=5"), config_error);
        REQUIRE_THROWS_AS(apply_override(cfg, "params.unknown=5"), config_error);
        REQUIRE_THROWS_AS(apply_override(cfg, "bogus.path=5"), config_error);
        REQUIRE_THROWS_AS(apply_override(cfg, "gain_over_2pi_hz=9e9"),
                          gain_exceeds_loss);
    }
}

TEST_CASE("number formatting", "[cli-io]") {
    REQUIRE(format_number(0.0) == "0.00000000000e+00");
    REQUIRE(format_number(-0.0) == "0.00000000000e+00");
    REQUIRE(format_number(1.0) == "1.00000000000e+00");
    REQUIRE(format_number(-2.5e-7) == "-2.50000000000e-07");
    REQUIRE(format_number(4.999917324192e+02) == "4.99991732419e+02");
}

TEST_CASE("table serialization round trips", "[cli-io]") {
    Table t;
    t.columns = {"a", "b", "note"};
    t.add_row({"1.0", "2.0", "x"});
    t.add_row({"3.0", "4.0", ""});

    SECTION("csv") {
        const std::string text = to_string(t, false);
        REQUIRE(text == "a,b,note\n1.0,2.0,x\n3.0,4.0,\n");
        const Table back = read_table_text(text);
        REQUIRE(back.columns == t.columns);
        REQUIRE(back.rows == t.rows);
    }

    SECTION("json") {
        const std::string text = to_string(t, true);
        const Table back = read_table_text(text);
        REQUIRE(back.columns == t.columns);
        REQUIRE(back.rows == t.rows);
    }
}

TEST_CASE("sweep table layout and self-consistency", "[cli-io]") {
    const RunConfig cfg = small_config();
    const Table t = run_sweep(cfg);

    REQUIRE(t.columns == std::vector<std::string>{"p_in_W", "s_in", "direction",
                                                  "branch_index", "T", "stable",
                                                  "isolation_db"});
    REQUIRE(!t.rows.empty());

    // Re-running is byte-identical.
    REQUIRE(to_string(run_sweep(cfg), false) == to_string(t, false));

    // Isolation entries appear only on stable (selected) rows.
    const auto c_iso = find_column(t, "isolation_db");
    const auto c_stable = find_column(t, "stable");
    const auto c_dir = find_column(t, "direction");
    REQUIRE(c_iso.has_value());
    bool saw_isolation = false;
    for (const auto& row : t.rows) {
        if (row[*c_iso].empty()) continue;
        saw_isolation = true;
        REQUIRE(row[*c_stable] == "stable");
    }
    REQUIRE(saw_isolation);

    // Forward and backward rows both present.
    bool fwd = false, bwd = false;
    for (const auto& row : t.rows) {
        fwd = fwd || row[*c_dir] == "forward";
        bwd = bwd || row[*c_dir] == "backward";
    }
    REQUIRE(fwd);
    REQUIRE(bwd);

    // Every row satisfies the steady-state cubic.
    const VerifyReport rep = verify_table(cfg.system_params(), t);
    REQUIRE(rep.rows_checked == t.rows.size());
    REQUIRE(rep.ok);
    REQUIRE(rep.max_residual < 1e-8);
}

TEST_CASE("verify flags corrupted tables", "[cli-io]") {
    const RunConfig cfg = small_config();
    Table t = run_sweep(cfg);
    const auto c_T = find_column(t, "T");
    t.rows[0][*c_T] = format_number(123.456);
    REQUIRE_FALSE(verify_table(cfg.system_params(), t).ok);

    t.rows[0][*c_T] = "not-a-number";
    REQUIRE_THROWS_AS(verify_table(cfg.system_params(), t), config_error);
}

TEST_CASE("optimize report structure", "[cli-io]") {
    const nlohmann::json rep = run_optimize(small_config());

    REQUIRE(rep.contains("j_opt_over_2pi_Hz"));
    REQUIRE(rep.contains("t_max_opt"));
    REQUIRE(rep.contains("t_max_theor_at_current_J"));
    REQUIRE(rep.contains("keff_bound_over_2pi_Hz"));
    REQUIRE(rep.contains("e0_db"));
    REQUIRE(rep.contains("e0_db_simplified"));
    REQUIRE(rep.contains("regime_flags"));

    REQUIRE(rep["regime_flags"]["delta_positive"].get<bool>());
    REQUIRE(rep["regime_flags"]["amplification_possible"].get<bool>());
    REQUIRE(rep["regime_flags"]["simplified_isolation_ok"].get<bool>());
    REQUIRE(close(rep["j_opt_over_2pi_Hz"].get<double>(), 2408318.9157583644,
                  1e-12));
    REQUIRE(close(rep["t_max_opt"].get<double>(), 500.0, 1e-12));

    // Inverted detuning: partial report with flags instead of a failure.
    RunConfig flipped = small_config();
    flipped.params.Delta1 = -5.0e7;
    const nlohmann::json part = run_optimize(flipped);
    REQUIRE(part["t_max_theor_at_current_J"].is_null());
    REQUIRE_FALSE(part["regime_flags"]["delta_positive"].get<bool>());
    REQUIRE_FALSE(part["regime_flags"]["amplification_possible"].get<bool>());
}

TEST_CASE("golden outputs are stable", "[cli-io]") {
    const std::filesystem::path dir(GAOM_GOLDEN_DIR);

    SECTION("seven-point sweep csv") {
        const std::string got = to_string(run_sweep(small_config()), false);
        REQUIRE(got == slurp(dir / "fig2b_sweep_small.csv"));
    }

    SECTION("optimize report json") {
        const std::string got = run_optimize(preset_config("fig2b")).dump(2) + "\n";
        REQUIRE(got == slurp(dir / "fig2b_optimize.json"));
    }
}

TEST_CASE("command line end to end", "[cli-io]") {
    const auto cfg_path =
        scratch_file("gaom_cli_cfg.json", emit_config(small_config()));

    SECTION("optimize prints a JSON report") {
        const CliResult r = run_cli("optimize --config " + cfg_path.string());
        REQUIRE(r.status == 0);
        const nlohmann::json rep = nlohmann::json::parse(r.out);
        REQUIRE(close(rep["j_opt_over_2pi_Hz"].get<double>(),
                      2408318.9157583644, 1e-12));
    }

    SECTION("sweep emits a verifiable table") {
        const CliResult r = run_cli("sweep --config " + cfg_path.string() +
                                    " --format csv");
        REQUIRE(r.status == 0);
        const Table t = read_table_text(r.out);
        REQUIRE(t.columns.front() == "p_in_W");
        REQUIRE(verify_table(small_config().system_params(), t).ok);
    }

    SECTION("verify accepts its own output and rejects corruption") {
        const CliResult sweep_r =
            run_cli("sweep --config " + cfg_path.string());
        REQUIRE(sweep_r.status == 0);
        const auto table_path = scratch_file("gaom_cli_table.csv", sweep_r.out);

        const CliResult ok_r = run_cli("verify " + table_path.string() +
                                       " --config " + cfg_path.string());
        REQUIRE(ok_r.status == 0);
        REQUIRE(ok_r.out.find("ok=true") != std::string::npos);

        // Corrupt one transmission value.
        Table t = read_table_text(sweep_r.out);
        t.rows[0][*find_column(t, "T")] = format_number(99.0);
        const auto bad_path =
            scratch_file("gaom_cli_bad_table.csv", to_string(t, false));
        const CliResult bad_r = run_cli("verify " + bad_path.string() +
                                        " --config " + cfg_path.string());
        REQUIRE(bad_r.status == 3);
        REQUIRE(bad_r.out.find("ok=false") != std::string::npos);
        std::filesystem::remove(table_path);
        std::filesystem::remove(bad_path);
    }

    SECTION("overrides reach the run") {
        const CliResult r =
            run_cli("optimize --config " + cfg_path.string() +
                    " --override params.delta2_over_2pi_hz=0 --override "
                    "j_over_2pi_hz=1e6");
        REQUIRE(r.status == 0);
        const nlohmann::json rep = nlohmann::json::parse(r.out);
        // At Delta2 = 0 the optimal coupling reduces to its resonant form.
        REQUIRE(close(rep["j_opt_over_2pi_Hz"].get<double>(),
                      0.5 * std::sqrt(2.0e5 * 1.0e8), 1e-12));
    }

    SECTION("config failures exit 2") {
        REQUIRE(run_cli("sweep --config /nonexistent.json").status == 2);
        REQUIRE(run_cli("reproduce not_a_preset").status == 2);
        REQUIRE(run_cli("sweep").status == 2); // missing required --config
        const auto bad = scratch_file("gaom_cli_bad_cfg.json",
                                      "{\"params\": {}}");
        REQUIRE(run_cli("sweep --config " + bad.string()).status == 2);
        std::filesystem::remove(bad);
    }

    SECTION("physics failures exit 3") {
        REQUIRE(run_cli("trace-branches --config " + cfg_path.string() +
                        " --override params.g_over_2pi_hz=0")
                    .status == 3);
        REQUIRE(run_cli("noise --config " + cfg_path.string() +
                        " --override params.gain_over_2pi_hz=0")
                    .status == 3);
    }

    SECTION("file output lands at --out") {
        const auto out_path = std::filesystem::temp_directory_path() /
                              ("gaom_cli_out." + std::to_string(::getpid()));
        const CliResult r = run_cli("optimize --config " + cfg_path.string() +
                                    " --out " + out_path.string());
        REQUIRE(r.status == 0);
        REQUIRE(r.out.empty());
        const nlohmann::json rep = nlohmann::json::parse(slurp(out_path));
        REQUIRE(rep.contains("e0_db"));
        std::filesystem::remove(out_path);
    }

    std::filesystem::remove(cfg_path);
}
