#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaom/gaom.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_regime = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config_path,
                              "JSON run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_path,
                    "output path (default: config outputs.path or stdout)");
    cmd->add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--override", o.overrides,
                    "config override key=value (repeatable)");
}

gaom::RunConfig resolve_config(const CommonOpts& o,
                               std::optional<gaom::RunConfig> base = {}) {
    gaom::RunConfig cfg;
    if (!o.config_path.empty())
        cfg = gaom::load_config(o.config_path);
    else if (base)
        cfg = *base;
    else
        throw gaom::config_error("missing --config");
    for (const auto& ov : o.overrides) gaom::apply_override(cfg, ov);
    if (!o.out_path.empty()) cfg.outputs.path = o.out_path;
    if (o.format == "csv") cfg.outputs.format = gaom::Format::Csv;
    if (o.format == "json") cfg.outputs.format = gaom::Format::Json;
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw gaom::config_error("cannot open output file " + path);
    out << text;
}

void emit_table(const gaom::Table& t, const gaom::OutputConfig& o) {
    write_text(o.path, gaom::to_string(t, o.format == gaom::Format::Json));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gain-assisted optomechanical nonreciprocity toolkit"};
    app.require_subcommand(1);

    CommonOpts sweep_o, trace_o, stab_o, noise_o, opt_o, repro_o, verify_o;
    std::string preset_id, table_path;

    auto* sweep = app.add_subcommand(
        "sweep", "bidirectional power sweep with stability verdicts");
    add_common(sweep, sweep_o, true);

    auto* trace = app.add_subcommand(
        "trace-branches", "transmission-parameterized branch trace");
    add_common(trace, trace_o, true);

    auto* stab = app.add_subcommand(
        "stability", "drift-eigenvalue report on the sweep grid");
    add_common(stab, stab_o, true);

    auto* noise = app.add_subcommand(
        "noise", "noise-to-signal ratios over the working region");
    add_common(noise, noise_o, true);

    auto* opt = app.add_subcommand(
        "optimize", "analytic optima and amplification bounds (JSON report)");
    add_common(opt, opt_o, true);

    auto* repro = app.add_subcommand(
        "reproduce", "run a named preset (fig2a..fig5c, fig3, fig4, fig_nsr)");
    repro->add_option("preset", preset_id, "preset id")->required();
    add_common(repro, repro_o, false);

    auto* verify = app.add_subcommand(
        "verify", "re-check an emitted table against the steady-state cubic");
    verify->add_option("table", table_path, "table file (csv or json)")
        ->required();
    add_common(verify, verify_o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*sweep) {
            const auto cfg = resolve_config(sweep_o);
            emit_table(gaom::run_sweep(cfg), cfg.outputs);
        } else if (*trace) {
            const auto cfg = resolve_config(trace_o);
            emit_table(gaom::run_trace_branches(cfg), cfg.outputs);
        } else if (*stab) {
            const auto cfg = resolve_config(stab_o);
            emit_table(gaom::run_stability(cfg), cfg.outputs);
        } else if (*noise) {
            const auto cfg = resolve_config(noise_o);
            emit_table(gaom::run_noise(cfg), cfg.outputs);
        } else if (*opt) {
            const auto cfg = resolve_config(opt_o);
            write_text(cfg.outputs.path, gaom::run_optimize(cfg).dump(2) + "\n");
        } else if (*repro) {
            const auto cfg =
                resolve_config(repro_o, gaom::preset_config(preset_id));
            gaom::Table t;
            if (preset_id == "fig3" || preset_id == "fig4")
                t = gaom::reproduce(preset_id); // composite: overrides ignored
            else if (preset_id == "fig_nsr")
                t = gaom::run_noise(cfg);
            else
                t = gaom::run_sweep(cfg);
            emit_table(t, cfg.outputs);
        } else if (*verify) {
            const auto cfg = resolve_config(verify_o);
            const gaom::Table t = gaom::read_table_file(table_path);
            const auto rep = gaom::verify_table(cfg.system_params(), t);
            std::cout << "rows_checked=" << rep.rows_checked
                      << " max_residual=" << gaom::format_number(rep.max_residual)
                      << " ok=" << (rep.ok ? "true" : "false") << "\n";
            if (!rep.ok) return exit_regime;
        }
    } catch (const gaom::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const gaom::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_regime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_regime;
    }
    return exit_ok;
}
