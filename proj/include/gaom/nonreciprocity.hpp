#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gaom/constants.hpp"
#include "gaom/effective.hpp"
#include "gaom/errors.hpp"
#include "gaom/stability.hpp"
#include "gaom/steady_state.hpp"

namespace gaom {

/// One transmission root with its stability verdict.
struct BranchPoint {
    double T = 0.0;
    Verdict verdict = Verdict::Marginal;
};

/// One power point of a bidirectional sweep.
struct SweepRow {
    double p_in_w = 0.0;
    double s_in = 0.0;
    std::vector<BranchPoint> forward_branches;  ///< ascending T
    std::vector<BranchPoint> backward_branches; ///< ascending T
    /// 10 log10(T_sel / T~_sel) with the largest stable root selected in each
    /// direction; absent when either direction has no stable root.
    std::optional<double> isolation_db;
};

/// Input-power window of unidirectional amplification.
struct WorkingRegion {
    double p_lower_w = 0.0; ///< drive power where the upper branch peaks
    double p_upper_w = 0.0; ///< drive power where the upper branch crosses T=1
    double s_lower = 0.0;   ///< corresponding photon fluxes (1/s)
    double s_upper = 0.0;
    double t_max_theor = 0.0;
    std::string criterion_notes;
};

/// Largest stable transmission among the branches, if any.
inline std::optional<double> selected_T(const std::vector<BranchPoint>& pts) {
    std::optional<double> best;
    for (const auto& pt : pts)
        if (pt.verdict == Verdict::Stable && (!best || pt.T > *best))
            best = pt.T;
    return best;
}

/// Evaluate both directions at one drive power (independent of sweep history).
inline SweepRow sweep_point(const SystemParams& p, double p_in_w) {
    SweepRow row;
    row.p_in_w = p_in_w;
    row.s_in = photon_flux(p_in_w, p.omega_d);

    for (Direction d : {Direction::Forward, Direction::Backward}) {
        auto& dst = (d == Direction::Forward) ? row.forward_branches
                                              : row.backward_branches;
        for (auto& b : classified_branches(p, d, row.s_in))
            dst.push_back({b.T, *b.stable});
    }
    const auto tf = selected_T(row.forward_branches);
    const auto tb = selected_T(row.backward_branches);
    if (tf && tb && *tb > 0.0 && *tf > 0.0)
        row.isolation_db = 10.0 * std::log10(*tf / *tb);
    return row;
}

/// Bidirectional power sweep over an ascending grid of drive powers.
inline std::vector<SweepRow> sweep(const SystemParams& p,
                                   const std::vector<double>& powers_w) {
    std::vector<SweepRow> rows;
    rows.reserve(powers_w.size());
    for (double pw : powers_w) rows.push_back(sweep_point(p, pw));
    return rows;
}

/// Possible maximum of the forward transmission, lambda / kappa^2.
inline double t_max_theor(const SystemParams& p) {
    const EffectiveParams e = effective_params(p, Direction::Forward);
    if (e.Delta <= 0.0)
        throw regime_violation(
            "t_max_theor: requires positive effective detuning");
    return e.lambda / (e.kappa * e.kappa);
}

/// Optimal inter-cavity coupling maximizing the transmission ceiling.
inline double j_opt(const SystemParams& p) {
    const double S =
        p.kappa2() * p.kappa2() + 4.0 * p.Delta2 * p.Delta2;
    return std::sqrt(p.kappa_eff() * S / (4.0 * p.kappa2()));
}

/// Transmission ceiling at the optimal coupling.
inline double t_max_opt(const SystemParams& p) {
    return (p.kappa1_e / p.kappa_eff()) * (p.kappa2_e / p.kappa2());
}

/// Largest effective cavity-1 damping still permitting amplification: the
/// kappa_eff value at which the transmission ceiling crosses unity.
/// Amplification requires 0 < kappa_eff < kappa*.
inline double keff_amplification_bound(const SystemParams& p) {
    const double S =
        p.kappa2() * p.kappa2() + 4.0 * p.Delta2 * p.Delta2;
    const double bound = 4.0 * p.J * std::sqrt(p.kappa1_e * p.kappa2_e / S) -
                         4.0 * p.J * p.J * p.kappa2() / S;
    if (bound <= 0.0)
        throw no_amplification_possible(
            "keff_amplification_bound: no positive damping window");
    return bound;
}

/// Closed-form isolation optimum at J = j_opt.
struct IsolationOptimum {
    double e0_db = 0.0;            ///< full expression
    double e0_db_simplified = 0.0; ///< large-detuning simplification
    bool simplified_regime_ok = false;
};

inline IsolationOptimum isolation_opt(const SystemParams& p) {
    IsolationOptimum iso;
    const double keff = p.kappa_eff();
    const double k2 = p.kappa2();
    const double num = k2 * p.Delta1 - keff * p.Delta2;
    iso.e0_db = 10.0 * std::log10(1.0 + (num * num) / (k2 * k2 * keff * keff));
    iso.e0_db_simplified =
        (p.Delta1 != 0.0)
            ? 10.0 * std::log10(p.Delta1 * p.Delta1 / (keff * keff))
            : -std::numeric_limits<double>::infinity();
    iso.simplified_regime_ok =
        k2 > 100.0 * keff && p.Delta1 > 100.0 * keff && p.Delta2 > 0.0 &&
        p.Delta1 / p.Delta2 > 0.1 && p.Delta1 / p.Delta2 < 10.0;
    return iso;
}

/// Locate the unidirectional-amplification window. Throws NoAmplification
/// when the ceiling never exceeds unity; returns nullopt when the window
/// exists but lies outside the swept range.
inline std::optional<WorkingRegion>
working_region(const std::vector<SweepRow>& rows, const SystemParams& p) {
    const double tmax = t_max_theor(p);
    if (tmax <= 1.0)
        throw no_amplification(
            "working_region: transmission ceiling does not exceed unity");

    bool seen_amplifying = false;
    for (const auto& row : rows) {
        const auto tf = selected_T(row.forward_branches);
        if (tf && *tf > 1.0) {
            seen_amplifying = true;
            break;
        }
    }
    if (!seen_amplifying) return std::nullopt;

    WorkingRegion region;
    region.t_max_theor = tmax;

    // Lower endpoint: drive flux placing the branch exactly at the ceiling
    // (the two inverse roots coincide there).
    const auto sl = s_in_of_T(p, Direction::Forward, tmax, RootSign::Lower);
    if (!sl)
        throw no_amplification("working_region: ceiling flux not reachable");
    region.s_lower = *sl;

    // Upper endpoint: upper-branch crossing of T = 1.
    const auto su = s_in_of_T(p, Direction::Forward, 1.0, RootSign::Upper);
    if (!su)
        throw no_amplification("working_region: unity crossing not reachable");
    region.s_upper = *su;

    const double photon_energy = PhysicalConstants::hbar * p.omega_d;
    region.p_lower_w = region.s_lower * photon_energy;
    region.p_upper_w = region.s_upper * photon_energy;
    region.criterion_notes =
        "lower endpoint at the transmission ceiling, upper endpoint at the "
        "upper-branch crossing of T = 1";
    return region;
}

} // namespace gaom
