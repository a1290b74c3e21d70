#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include "gaom/constants.hpp"
#include "gaom/errors.hpp"
#include "gaom/matrix.hpp"
#include "gaom/quadrature.hpp"
#include "gaom/stability.hpp"
#include "gaom/steady_state.hpp"

namespace gaom {

/// Ordered labels of the 12 noise input/output ports. Port 11 is an
/// identically-zero placeholder; port 12 is the Hermitian mechanical bath.
inline constexpr std::array<std::string_view, 12> port_basis = {
    "a1_e", "a1_e_dag", "a1_o", "a1_o_dag", "a2_e", "a2_e_dag",
    "a2_o", "a2_o_dag", "a_G",  "a_G_dag",  "zero", "zeta"};

/// 6x12 input matrix Gamma coupling the 12 bath ports into the 6-component
/// fluctuation state. Entries in sqrt(rad/s).
inline ComplexMatrix build_input_matrix(const SystemParams& p) {
    ComplexMatrix g(6, 12);
    g(0, 0) = std::sqrt(p.kappa1_e);
    g(0, 2) = std::sqrt(p.kappa1_o);
    g(0, 8) = std::sqrt(p.gain);
    g(1, 1) = std::sqrt(p.kappa1_e);
    g(1, 3) = std::sqrt(p.kappa1_o);
    g(1, 9) = std::sqrt(p.gain);
    g(2, 4) = std::sqrt(p.kappa2_e);
    g(2, 6) = std::sqrt(p.kappa2_o);
    g(3, 5) = std::sqrt(p.kappa2_e);
    g(3, 7) = std::sqrt(p.kappa2_o);
    g(5, 11) = std::sqrt(2.0 * p.gamma_m);
    return g;
}

/// Frequency-resolved scattering matrix of the fluctuations.
struct ScatteringMatrix {
    double omega = 0.0; ///< rad/s
    ComplexMatrix t;    ///< 12x12, dimensionless
};

/// T(omega) = Gamma^T (M - i omega I)^{-1} Gamma - I, evaluated at the
/// steady state of `branch`. Throws singular_matrix when omega coincides
/// with an eigenvalue of -iM (marginally stable point).
inline ScatteringMatrix scattering(const SystemParams& p,
                                   const SteadyBranch& branch, double omega) {
    using cd = std::complex<double>;
    const double ru = scaling::rate_unit;

    ComplexMatrix m = build_drift(p, branch.alpha1, branch.q_bar);
    const cd shift{0.0, omega / ru};
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) m(i, j) /= ru;
        m(i, i) -= shift;
    }

    ComplexMatrix gam = build_input_matrix(p);
    const double root_ru = std::sqrt(ru);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 12; ++j) gam(i, j) /= root_ru;

    ScatteringMatrix s;
    s.omega = omega;
    s.t = gam.transpose() * invert(m) * gam - ComplexMatrix::identity(12);
    return s;
}

/// Output noise spectrum split into the six bath contributions. Values are
/// symmetrized spectral densities with the 1/(2pi) delta-correlator
/// prefactor folded in, so that integrating `total` over omega (rad/s)
/// yields an output noise photon flux.
struct SpectrumDecomposition {
    double s1e = 0.0; ///< cavity-1 external port
    double s1o = 0.0; ///< cavity-1 intrinsic-loss port
    double s2e = 0.0; ///< cavity-2 external port
    double s2o = 0.0; ///< cavity-2 intrinsic-loss port
    double sG = 0.0;  ///< gain bath
    double sm = 0.0;  ///< mechanical bath
    double imag_residue = 0.0; ///< largest |Im| of the composed terms

    double total() const { return s1e + s1o + s2e + s2o + sG + sm; }
};

/// Symmetrized output spectrum at the monitored port for the branch's
/// direction: forward monitors cavity 2 (scattering rows 5-6), backward
/// monitors cavity 1 (rows 1-2). Each contribution pairs T(omega) with
/// T(-omega); the gain bath enters normally ordered (columns 10, 9).
inline SpectrumDecomposition output_spectrum(const SystemParams& p,
                                             const SteadyBranch& branch,
                                             double omega, double n_m) {
    using cd = std::complex<double>;
    const ComplexMatrix tp = scattering(p, branch, omega).t;
    const ComplexMatrix tm = scattering(p, branch, -omega).t;

    const std::size_t r1 = (branch.direction == Direction::Forward) ? 4 : 0;
    const std::size_t r2 = r1 + 1;

    const auto half = [&](std::size_t c1, std::size_t c2) {
        return 0.5 * (tp(r1, c1) * tm(r2, c2) + tp(r2, c1) * tm(r1, c2));
    };

    const cd v1e = half(0, 1);
    const cd v1o = half(2, 3);
    const cd v2e = half(4, 5);
    const cd v2o = half(6, 7);
    const cd vG = 0.5 * (tp(r1, 9) * tm(r2, 8) + tp(r2, 9) * tm(r1, 8));
    const cd vm = tp(r1, 11) * tm(r2, 11) * (n_m + 0.5);

    SpectrumDecomposition s;
    s.s1e = v1e.real() / two_pi;
    s.s1o = v1o.real() / two_pi;
    s.s2e = v2e.real() / two_pi;
    s.s2o = v2o.real() / two_pi;
    s.sG = vG.real() / two_pi;
    s.sm = vm.real() / two_pi;
    s.imag_residue =
        std::max({std::abs(v1e.imag()), std::abs(v1o.imag()),
                  std::abs(v2e.imag()), std::abs(v2o.imag()),
                  std::abs(vG.imag()), std::abs(vm.imag())}) /
        two_pi;
    return s;
}

/// Noise-to-signal ratio: the output noise flux integrated over
/// [-delta_omega, +delta_omega] divided by the steady output signal flux.
inline double nsr(const SystemParams& p, const SteadyBranch& branch,
                  double delta_omega, double n_m, std::size_t n_points) {
    if (n_points < 11)
        throw config_error("nsr: quadrature needs at least 11 points");
    const double signal = std::norm(branch.out_amp);
    if (signal <= 0.0)
        throw zero_signal("nsr: zero output signal flux");
    if (delta_omega == 0.0) return 0.0;

    const double noise_flux = integrate_trapezoid(
        [&](double w) { return output_spectrum(p, branch, w, n_m).total(); },
        -delta_omega, delta_omega, n_points);
    return noise_flux / signal;
}

} // namespace gaom
