#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaom/config.hpp"
#include "gaom/constants.hpp"
#include "gaom/noise.hpp"
#include "gaom/nonreciprocity.hpp"
#include "gaom/presets.hpp"
#include "gaom/stability.hpp"
#include "gaom/steady_state.hpp"
#include "gaom/table.hpp"

namespace gaom {

/// Power grid from a sweep config (inclusive endpoints, ascending).
inline std::vector<double> make_power_grid(const SweepConfig& s) {
    std::vector<double> g(s.points);
    const double n1 = static_cast<double>(s.points - 1);
    if (s.spacing == Spacing::Lin) {
        for (std::size_t i = 0; i < s.points; ++i)
            g[i] = s.p_min_w +
                   (s.p_max_w - s.p_min_w) * static_cast<double>(i) / n1;
    } else {
        const double la = std::log(s.p_min_w), lb = std::log(s.p_max_w);
        for (std::size_t i = 0; i < s.points; ++i)
            g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / n1);
    }
    g.front() = s.p_min_w;
    g.back() = s.p_max_w;
    return g;
}

/// Sweep grid augmented with the analytic working-region endpoints (when an
/// amplification window exists inside the range), so the emitted table
/// contains the exact ceiling and unity-crossing rows.
inline std::vector<double> sweep_power_grid(const SystemParams& p,
                                            const SweepConfig& s) {
    std::vector<double> grid = make_power_grid(s);
    try {
        if (t_max_theor(p) > 1.0) {
            const double photon_energy = PhysicalConstants::hbar * p.omega_d;
            const double tmax = t_max_theor(p);
            for (auto [t, sign] :
                 {std::pair{tmax, RootSign::Lower}, {1.0, RootSign::Upper}}) {
                const auto flux = s_in_of_T(p, Direction::Forward, t, sign);
                if (!flux) continue;
                const double pw = *flux * photon_energy;
                if (pw < s.p_min_w || pw > s.p_max_w) continue;
                const auto at = std::lower_bound(grid.begin(), grid.end(), pw);
                if (at == grid.end() || *at != pw) grid.insert(at, pw);
            }
        }
    } catch (const regime_violation&) {
        // No detectable window (e.g. negative detuning or zero coupling):
        // sweep the plain grid.
    }
    return grid;
}

namespace detail {

/// Index of the selected (largest stable) branch, if any.
inline std::optional<std::size_t>
selected_index(const std::vector<BranchPoint>& pts) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].verdict == Verdict::Stable &&
            (!best || pts[i].T > pts[*best].T))
            best = i;
    return best;
}

inline void append_direction_rows(Table& t, const SweepRow& row, Direction d,
                                  const std::vector<BranchPoint>& pts) {
    const auto sel = selected_index(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool selected = sel && *sel == i;
        t.add_row({format_number(row.p_in_w), format_number(row.s_in),
                   to_string(d), std::to_string(i), format_number(pts[i].T),
                   to_string(pts[i].verdict),
                   (selected && row.isolation_db)
                       ? format_number(*row.isolation_db)
                       : std::string()});
    }
}

} // namespace detail

/// Bidirectional power sweep: one row per power per direction per root.
inline Table run_sweep(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const std::vector<double> powers = sweep_power_grid(p, cfg.sweep);

    Table t;
    t.columns = {"p_in_W", "s_in",   "direction",   "branch_index",
                 "T",      "stable", "isolation_db"};
    for (const SweepRow& row : sweep(p, powers)) {
        detail::append_direction_rows(t, row, Direction::Forward,
                                      row.forward_branches);
        detail::append_direction_rows(t, row, Direction::Backward,
                                      row.backward_branches);
    }
    return t;
}

/// Eigenvalue-level stability table on the sweep grid.
inline Table run_stability(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const std::vector<double> powers = sweep_power_grid(p, cfg.sweep);

    Table t;
    t.columns = {"p_in_W",  "s_in",          "direction",
                 "branch_index", "T",        "verdict",
                 "min_re_eig_rad_s", "tolerance_rad_s"};
    for (double pw : powers) {
        const double s = photon_flux(pw, p.omega_d);
        for (Direction d : {Direction::Forward, Direction::Backward}) {
            auto branches = solve_branches(p, d, s);
            for (std::size_t i = 0; i < branches.size(); ++i) {
                const StabilityReport rep = classify(p, branches[i]);
                t.add_row({format_number(pw), format_number(s), to_string(d),
                           std::to_string(i), format_number(branches[i].T),
                           to_string(rep.verdict), format_number(rep.min_real),
                           format_number(rep.tolerance)});
            }
        }
    }
    return t;
}

/// Branch trace parameterized by transmission: both inverse roots s(T) per
/// direction over a log grid of T up to the ceiling.
inline Table run_trace_branches(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const double photon_energy = PhysicalConstants::hbar * p.omega_d;

    Table t;
    t.columns = {"direction", "branch", "T", "s_in", "p_in_W", "stable"};
    for (Direction d : {Direction::Forward, Direction::Backward}) {
        const EffectiveParams e = effective_params(p, d);
        if (e.lambda <= 0.0) continue;
        const double t_hi = e.lambda / (e.kappa * e.kappa);
        const double t_lin =
            e.lambda / (e.kappa * e.kappa + 4.0 * e.Delta * e.Delta);
        const double t_lo = std::min(1e-2 * t_lin, t_hi);

        const std::size_t n = cfg.sweep.points;
        const double la = std::log(t_lo), lb = std::log(t_hi);
        for (std::size_t i = 0; i < n; ++i) {
            const double tt =
                (i + 1 == n) ? t_hi
                             : std::exp(la + (lb - la) * static_cast<double>(i) /
                                                 static_cast<double>(n - 1));
            for (auto [sign, name] : {std::pair{RootSign::Lower, "lower"},
                                      {RootSign::Upper, "upper"}}) {
                const auto flux = s_in_of_T(p, d, tt, sign);
                if (!flux) continue;
                SteadyBranch b = reconstruct(p, d, *flux, tt);
                classify(p, b);
                t.add_row({to_string(d), name, format_number(tt),
                           format_number(*flux),
                           format_number(*flux * photon_energy),
                           to_string(*b.stable)});
            }
        }
    }
    return t;
}

/// Noise-to-signal table over the working region: forward NSR on the upper
/// (largest stable) branch, backward on the lower (smallest stable) branch.
inline Table run_noise(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();

    const std::vector<SweepRow> rows = sweep(p, make_power_grid(cfg.sweep));
    const auto region = working_region(rows, p);
    if (!region)
        throw no_amplification(
            "run_noise: working region lies outside the swept power range");

    SweepConfig span;
    span.p_min_w = region->p_lower_w;
    span.p_max_w = region->p_upper_w;
    span.points = cfg.sweep.points;
    span.spacing = Spacing::Log;

    const double delta_omega = two_pi * cfg.noise.delta_omega_over_2pi_hz;

    Table t;
    t.columns = {"p_in_W", "NSR", "NSR_tilde"};
    for (double pw : make_power_grid(span)) {
        const double s = photon_flux(pw, p.omega_d);

        std::optional<SteadyBranch> fwd, bwd;
        for (const auto& b :
             classified_branches(p, Direction::Forward, s))
            if (b.stable == Verdict::Stable && (!fwd || b.T > fwd->T)) fwd = b;
        for (const auto& b :
             classified_branches(p, Direction::Backward, s))
            if (b.stable == Verdict::Stable && (!bwd || b.T < bwd->T)) bwd = b;
        if (!fwd || !bwd)
            throw regime_violation(
                "run_noise: no stable branch inside the working region");

        t.add_row({format_number(pw),
                   format_number(nsr(p, *fwd, delta_omega, cfg.noise.n_m,
                                     cfg.noise.n_points)),
                   format_number(nsr(p, *bwd, delta_omega, cfg.noise.n_m,
                                     cfg.noise.n_points))});
    }
    return t;
}

/// Analytic-optimum report. On a negative effective detuning the ceiling
/// entry is omitted and flagged instead of failing the whole report.
inline nlohmann::json run_optimize(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    nlohmann::json rep;

    rep["j_opt_over_2pi_Hz"] = j_opt(p) / two_pi;
    rep["t_max_opt"] = t_max_opt(p);

    const bool delta_positive =
        effective_params(p, Direction::Forward).Delta > 0.0;
    if (delta_positive)
        rep["t_max_theor_at_current_J"] = t_max_theor(p);
    else
        rep["t_max_theor_at_current_J"] = nullptr;

    bool amplification_possible = false;
    try {
        const double bound = keff_amplification_bound(p);
        rep["keff_bound_over_2pi_Hz"] = bound / two_pi;
        amplification_possible = delta_positive && p.kappa_eff() < bound;
    } catch (const no_amplification_possible&) {
        rep["keff_bound_over_2pi_Hz"] = nullptr;
    }

    const IsolationOptimum iso = isolation_opt(p);
    rep["e0_db"] = iso.e0_db;
    if (std::isfinite(iso.e0_db_simplified))
        rep["e0_db_simplified"] = iso.e0_db_simplified;
    else
        rep["e0_db_simplified"] = nullptr;

    rep["regime_flags"] = {{"delta_positive", delta_positive},
                           {"amplification_possible", amplification_possible},
                           {"simplified_isolation_ok", iso.simplified_regime_ok}};
    return rep;
}

/// Numerical sweep maximum of the selected forward transmission.
inline double sweep_t_max_num(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    double best = 0.0;
    for (const SweepRow& row : sweep(p, sweep_power_grid(p, cfg.sweep)))
        if (const auto sel = selected_T(row.forward_branches))
            best = std::max(best, *sel);
    return best;
}

/// Materialize a reproduction preset into its table.
inline Table reproduce(const std::string& id) {
    if (id == "fig3") {
        Table t;
        t.columns = {"set", "t_max_num", "t_max_theor", "rel_err"};
        for (const auto& [label, vcfg] : preset_variants(id)) {
            const double num = sweep_t_max_num(vcfg);
            const double theor = t_max_theor(vcfg.system_params());
            t.add_row({label, format_number(num), format_number(theor),
                       format_number(std::abs(num - theor) / theor)});
        }
        return t;
    }
    if (id == "fig4") {
        Table t;
        bool first = true;
        for (const auto& [label, vcfg] : preset_variants(id)) {
            Table part = run_sweep(vcfg);
            if (first) {
                t.columns = part.columns;
                t.columns.insert(t.columns.begin(), "set");
                first = false;
            }
            for (auto& row : part.rows) {
                row.insert(row.begin(), label);
                t.rows.push_back(std::move(row));
            }
        }
        return t;
    }
    if (id == "fig_nsr") return run_noise(preset_config(id));
    return run_sweep(preset_config(id));
}

/// Re-check of an emitted table: every (direction, s_in, T) row must satisfy
/// the steady-state cubic to relative residual below 1e-8.
struct VerifyReport {
    std::size_t rows_checked = 0;
    double max_residual = 0.0;
    bool ok = true;
};

inline VerifyReport verify_table(const SystemParams& p, const Table& t) {
    const auto c_dir = find_column(t, "direction");
    const auto c_T = find_column(t, "T");
    const auto c_s = find_column(t, "s_in");
    const auto c_p = find_column(t, "p_in_W");
    if (!c_dir || !c_T || (!c_s && !c_p))
        throw config_error(
            "verify: table lacks direction/T and s_in or p_in_W columns");

    const detail::ScaledEffective fwd =
        detail::scale(effective_params(p, Direction::Forward));
    const detail::ScaledEffective bwd =
        detail::scale(effective_params(p, Direction::Backward));

    const auto parse_cell = [](const std::string& cell) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
            return v;
        } catch (const std::exception&) {
            throw config_error("verify: non-numeric cell \"" + cell + "\"");
        }
    };

    VerifyReport rep;
    for (const auto& row : t.rows) {
        const std::string& dir = row[*c_dir];
        if (dir != "forward" && dir != "backward")
            throw config_error("verify: unknown direction \"" + dir + "\"");
        const auto& e = (dir == "forward") ? fwd : bwd;
        const double T = parse_cell(row[*c_T]);
        const double s_si =
            c_s ? parse_cell(row[*c_s])
                : photon_flux(parse_cell(row[*c_p]), p.omega_d);
        const double s = s_si / scaling::flux_unit;

        const double t3 = 4.0 * e.U * e.U * s * s * T * T * T;
        const double t2 = -8.0 * e.Delta * e.U * s * T * T;
        const double t1 = (e.kappa * e.kappa + 4.0 * e.Delta * e.Delta) * T;
        const double t0 = -e.lambda;
        const double scale = std::max(
            {std::abs(t3), std::abs(t2), std::abs(t1), std::abs(t0)});
        const double resid =
            (scale > 0.0) ? std::abs(t3 + t2 + t1 + t0) / scale : 0.0;
        rep.max_residual = std::max(rep.max_residual, resid);
        ++rep.rows_checked;
    }
    rep.ok = rep.max_residual < 1e-8;
    return rep;
}

} // namespace gaom
