#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaom/config.hpp"
#include "gaom/errors.hpp"

namespace gaom {

/// Known reproduction presets. fig2a/b/c and fig5a/b/c are single power
/// sweeps; fig3 is the ceiling-collapse verification across all six sweep
/// sets; fig4 concatenates sweeps over four detuning pairs at optimal
/// coupling; fig_nsr is the noise-to-signal table over the working region.
inline constexpr std::array<std::string_view, 9> preset_ids = {
    "fig2a", "fig2b", "fig2c", "fig3", "fig4",
    "fig5a", "fig5b", "fig5c", "fig_nsr"};

namespace detail {

/// Shared experimental baseline of the sweep figures (user units, /2pi Hz).
inline ParamsHz baseline_params() {
    ParamsHz p;
    p.omega_d = 2.0e11;
    p.omega_m = 2.0e8;
    p.gamma_m = 5.0e4;
    p.g = 8.0e2;
    p.Delta1 = 5.0e7;
    p.Delta2 = 2.0e7;
    p.kappa1_e = 1.0e8;
    p.kappa1_o = 0.0;
    p.kappa2_e = 1.0e8;
    p.kappa2_o = 0.0;
    p.gain = 9.98e7; // kappa_eff/2pi = 0.2 MHz
    return p;
}

/// Optimal coupling in /2pi-Hz units (scale-invariant formula).
inline double j_opt_hz(double keff_hz, double kappa2_hz, double delta2_hz) {
    const double s = kappa2_hz * kappa2_hz + 4.0 * delta2_hz * delta2_hz;
    return std::sqrt(keff_hz * s / (4.0 * kappa2_hz));
}

inline RunConfig fig2_config(double j_hz) {
    RunConfig cfg;
    cfg.params = baseline_params();
    cfg.params.J = j_hz;
    cfg.sweep = {1e-9, 1e-5, 1600, Spacing::Log};
    return cfg;
}

inline RunConfig fig5_config(double kappa1_e_hz) {
    RunConfig cfg;
    cfg.params = baseline_params();
    cfg.params.kappa1_e = kappa1_e_hz;
    cfg.params.kappa1_o = 2.0e8 - kappa1_e_hz;
    cfg.params.gain = 1.998e8; // kappa1/2pi = 200 MHz, kappa_eff/2pi = 0.2 MHz
    cfg.params.Delta2 = 6.0e7;
    cfg.params.J = 2.19e6;
    cfg.sweep = {1e-10, 1e-5, 2000, Spacing::Log};
    return cfg;
}

inline RunConfig fig4_config(double delta1_hz, double delta2_hz) {
    RunConfig cfg;
    cfg.params = baseline_params();
    cfg.params.kappa1_e = 5.0e7;
    cfg.params.kappa1_o = 0.0;
    cfg.params.gain = 4.98e7; // kappa_eff/2pi = 0.2 MHz
    cfg.params.Delta1 = delta1_hz;
    cfg.params.Delta2 = delta2_hz;
    cfg.params.J = j_opt_hz(2.0e5, 1.0e8, delta2_hz);
    cfg.sweep = {1e-10, 1e-4, 2400, Spacing::Log};
    return cfg;
}

} // namespace detail

/// The RunConfig a preset id denotes (for composite presets, the base set).
inline RunConfig preset_config(const std::string& id) {
    if (id == "fig2a") return detail::fig2_config(0.5 * 2.41e6);
    if (id == "fig2b") return detail::fig2_config(2.41e6);
    if (id == "fig2c") return detail::fig2_config(1.5 * 2.41e6);
    if (id == "fig3") return detail::fig2_config(2.41e6);
    if (id == "fig4") return detail::fig4_config(1.0e7, 5.0e6);
    if (id == "fig5a") return detail::fig5_config(2.0e7);
    if (id == "fig5b") return detail::fig5_config(8.0e7);
    if (id == "fig5c") return detail::fig5_config(2.0e8);
    if (id == "fig_nsr") {
        RunConfig cfg = detail::fig2_config(2.41e6);
        cfg.sweep.points = 64; // noise samples across the working region
        cfg.noise.n_m = 100.0;
        cfg.noise.delta_omega_over_2pi_hz = 30.0;
        cfg.noise.n_points = 41;
        return cfg;
    }
    throw config_error("unknown preset id: " + id);
}

/// The labeled parameter sets a composite preset expands into; single-set
/// presets expand to themselves.
inline std::vector<std::pair<std::string, RunConfig>>
preset_variants(const std::string& id) {
    if (id == "fig3") {
        std::vector<std::pair<std::string, RunConfig>> v;
        for (const char* sub :
             {"fig2a", "fig2b", "fig2c", "fig5a", "fig5b", "fig5c"})
            v.emplace_back(sub, preset_config(sub));
        return v;
    }
    if (id == "fig4") {
        // (Delta1, Delta2) in multiples of Delta0/2pi = 1 MHz, optimal J each.
        const std::array<std::pair<double, double>, 4> pairs = {
            {{1.0e7, 5.0e6}, {2.0e7, 1.0e7}, {5.0e7, 2.0e7}, {1.0e8, 4.0e7}}};
        std::vector<std::pair<std::string, RunConfig>> v;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            v.emplace_back("set" + std::to_string(k + 1),
                           detail::fig4_config(pairs[k].first, pairs[k].second));
        return v;
    }
    return {{id, preset_config(id)}};
}

} // namespace gaom
