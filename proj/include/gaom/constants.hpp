#pragma once

#include <cmath>
#include <numbers>

#include "gaom/errors.hpp"

namespace gaom {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Internal working units used to condition the polynomial and matrix
/// kernels: rates are expressed in units of 2*pi MHz and photon fluxes in
/// units of 1e9 /s before any root finding or eigensolve. All public
/// quantities stay in SI (rad/s, /s).
namespace scaling {
inline constexpr double rate_unit = two_pi * 1e6;
inline constexpr double flux_unit = 1e9;
} // namespace scaling

/// CODATA-fixed physical constants (SI).
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34; ///< reduced Planck constant [J s]
    static constexpr double k_B  = 1.380649e-23;    ///< Boltzmann constant [J/K]
};

/// Photon flux s_in = p/(hbar*omega_d) carried by a beam of power `power_w`
/// at drive angular frequency `omega_d` [rad/s]. Returns 1/s.
inline double photon_flux(double power_w, double omega_d) {
    if (power_w < 0.0) throw negative_power("photon_flux: negative power");
    return power_w / (PhysicalConstants::hbar * omega_d);
}

/// Bose thermal occupancy n_m = 1/(exp(hbar*omega_m/k_B T) - 1) of the
/// mechanical bath; 0 at T = 0.
inline double thermal_occupancy(double temperature_k, double omega_m) {
    if (temperature_k <= 0.0) return 0.0;
    const double x = PhysicalConstants::hbar * omega_m /
                     (PhysicalConstants::k_B * temperature_k);
    // expm1 keeps precision in the high-temperature (small x) limit.
    return 1.0 / std::expm1(x);
}

} // namespace gaom
