#pragma once

#include <cmath>
#include <complex>

#include "gaom/params.hpp"

namespace gaom {

/// Direction-dependent effective single-mode parameters obtained by
/// adiabatically eliminating the partner cavity.
///
/// With S = kappa2^2 + 4*Delta2^2:
///   kappa  = kappa_eff + 4 J^2 kappa2 / S            (both directions)
///   Delta  = Delta1 - 4 J^2 Delta2 / S               (both directions)
///   lambda = 16 J^2 kappa1_e kappa2_e / S            (both directions)
///   eps    = -2i J sqrt(kappa1_e kappa2_e) / (kappa2 + 2i Delta2)
///   U      = g^2 S / (4 omega_m J^2 kappa2_e)        (forward)
///   U~     = g^2 / (omega_m kappa1_e)                (backward)
struct EffectiveParams {
    double kappa  = 0.0;           ///< effective total linewidth [rad/s]
    double Delta  = 0.0;           ///< effective detuning [rad/s]
    double U      = 0.0;           ///< Kerr-like nonlinearity [(rad/s) per unit flux]
    std::complex<double> eps;      ///< drive conversion amplitude [rad/s]
    double lambda = 0.0;           ///< transmission numerator [(rad/s)^2]
};

inline EffectiveParams effective_params(const SystemParams& p, Direction d) {
    EffectiveParams e;
    const double k2 = p.kappa2();
    const double S  = k2 * k2 + 4.0 * p.Delta2 * p.Delta2;
    e.kappa  = p.kappa_eff() + 4.0 * p.J * p.J * k2 / S;
    e.Delta  = p.Delta1 - 4.0 * p.J * p.J * p.Delta2 / S;
    e.lambda = 16.0 * p.J * p.J * p.kappa1_e * p.kappa2_e / S;
    e.eps    = std::complex<double>(0.0, -2.0 * p.J) *
               std::sqrt(p.kappa1_e * p.kappa2_e) /
               std::complex<double>(k2, 2.0 * p.Delta2);
    if (d == Direction::Forward) {
        // Decoupled limit J = 0 transmits nothing (lambda = 0); the forward
        // nonlinearity is then irrelevant and pinned to 0 instead of
        // dividing by zero.
        e.U = (p.J > 0.0) ? p.g * p.g * S / (4.0 * p.omega_m * p.J * p.J * p.kappa2_e)
                          : 0.0;
    } else {
        e.U = p.g * p.g / (p.omega_m * p.kappa1_e);
    }
    return e;
}

} // namespace gaom
