#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "gaom/constants.hpp"
#include "gaom/cubic.hpp"
#include "gaom/effective.hpp"
#include "gaom/errors.hpp"
#include "gaom/params.hpp"

namespace gaom {

/// One steady-state solution branch at a given drive flux.
struct SteadyBranch {
    Direction direction = Direction::Forward;
    double s_in = 0.0; ///< input photon flux (1/s)
    double T = 0.0;    ///< power transmission |out|^2 / s_in
    std::complex<double> out_amp; ///< output field amplitude (sqrt flux)
    std::complex<double> alpha1;  ///< cavity-1 steady amplitude
    std::complex<double> alpha2;  ///< cavity-2 steady amplitude
    double q_bar = 0.0;           ///< mechanical displacement (x_zpf units)
    std::optional<Verdict> stable; ///< filled in by the stability pass
};

/// Which root of the inverse (drive-vs-transmission) relation to take.
enum class RootSign { Lower, Upper };

namespace detail {

/// Effective parameters rescaled to the internal working units.
struct ScaledEffective {
    double kappa, Delta, U, lambda;
};

inline ScaledEffective scale(const EffectiveParams& e) {
    using namespace scaling;
    return {e.kappa / rate_unit, e.Delta / rate_unit,
            e.U * flux_unit / rate_unit, e.lambda / (rate_unit * rate_unit)};
}

} // namespace detail

/// All positive real transmission roots of the steady-state cubic
///   4 U^2 s^2 T^3 - 8 Delta U s T^2 + (kappa^2 + 4 Delta^2) T - lambda = 0
/// at input flux s_in, sorted ascending. When the nonlinearity is switched
/// off (s_in = 0 or g = 0) the linear response is the single root.
inline std::vector<double> transmission_roots(const SystemParams& p, Direction d,
                                              double s_in) {
    const EffectiveParams eff = effective_params(p, d);
    const auto [kap, del, u, lam] = detail::scale(eff);
    const double linear = lam / (kap * kap + 4.0 * del * del);

    const double s = s_in / scaling::flux_unit;
    if (s == 0.0 || u == 0.0) return {linear};

    const Cubic c{4.0 * u * u * s * s, -8.0 * del * u * s,
                  kap * kap + 4.0 * del * del, -lam};
    std::vector<double> roots = real_roots(c);
    std::erase_if(roots, [](double t) { return t <= 0.0; });
    if (roots.empty()) return {linear};
    return roots;
}

/// Drive flux that places the selected branch at transmission T; the inverse
/// of the cubic, s_{+/-}(T) = (2 T Delta +/- sqrt(T lambda - T^2 kappa^2))
/// / (2 T^2 U). Returns nullopt when T is outside the reachable window.
inline std::optional<double> s_in_of_T(const SystemParams& p, Direction d,
                                       double T, RootSign sign) {
    const EffectiveParams eff = effective_params(p, d);
    const auto [kap, del, u, lam] = detail::scale(eff);
    if (u == 0.0)
        throw non_positive_nonlinearity(
            "s_in_of_T: vanishing effective nonlinearity");
    if (T <= 0.0) return std::nullopt;

    double disc = T * lam - T * T * kap * kap;
    if (disc < 0.0) {
        // Roundoff guard at the very top of the curve, T -> lambda/kappa^2.
        if (disc > -1e-12 * T * lam)
            disc = 0.0;
        else
            return std::nullopt;
    }
    const double root = (sign == RootSign::Upper) ? std::sqrt(disc) : -std::sqrt(disc);
    const double s = (2.0 * T * del + root) / (2.0 * T * T * u);
    if (s <= 0.0) return std::nullopt;
    return s * scaling::flux_unit;
}

/// Rebuild the full steady field configuration for a (s_in, T) root pair.
/// The drive phase gauge is chosen so the input amplitude is real positive.
inline SteadyBranch reconstruct(const SystemParams& p, Direction d, double s_in,
                                double T) {
    using cd = std::complex<double>;
    const EffectiveParams eff = effective_params(p, d);
    const detail::ScaledEffective se = detail::scale(eff);
    const double s = s_in / scaling::flux_unit;

    SteadyBranch b;
    b.direction = d;
    b.s_in = s_in;
    b.T = T;

    const cd eps_scaled = eff.eps / scaling::rate_unit;
    const cd denom = cd{0.5 * se.kappa, se.Delta - se.U * T * s};
    const cd out_scaled =
        (denom == cd{}) ? cd{} : eps_scaled * std::sqrt(s) / denom;
    b.out_amp = out_scaled * std::sqrt(scaling::flux_unit);

    const double flux_out = std::norm(b.out_amp);
    const double expect = T * s_in;
    if (std::abs(flux_out - expect) >
        1e-8 * std::max({flux_out, expect, 1e-300}))
        throw inconsistent_root(
            "reconstruct: output flux disagrees with the supplied root");

    if (d == Direction::Forward) {
        b.alpha2 = b.out_amp / std::sqrt(p.kappa2_e);
        b.alpha1 = (p.J > 0.0)
                       ? b.alpha2 * cd{0.5 * p.kappa2(), p.Delta2} / cd{0.0, -p.J}
                       : cd{};
        b.q_bar = -p.g * std::norm(b.alpha1) / p.omega_m;
    } else {
        b.alpha1 = b.out_amp / std::sqrt(p.kappa1_e);
        b.q_bar = -p.g * std::norm(b.alpha1) / p.omega_m;
        b.alpha2 = (p.J > 0.0)
                       ? -cd{0.5 * p.kappa_eff(), p.Delta1 + p.g * b.q_bar} *
                             b.alpha1 / cd{0.0, p.J}
                       : cd{};
    }
    return b;
}

/// Solve and reconstruct every branch at the given drive flux, ascending in T.
inline std::vector<SteadyBranch> solve_branches(const SystemParams& p,
                                                Direction d, double s_in) {
    std::vector<SteadyBranch> out;
    for (double t : transmission_roots(p, d, s_in))
        out.push_back(reconstruct(p, d, s_in, t));
    return out;
}

} // namespace gaom
