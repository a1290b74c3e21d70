#pragma once

#include <stdexcept>
#include <string>

namespace gaom {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameter values (bad configuration).
struct config_error : error {
    using error::error;
};

/// A required-positive rate or frequency is zero/negative.
struct non_positive_rate : config_error {
    using config_error::config_error;
};

/// Gain at or above total cavity-1 loss: kappa_eff = kappa1 - gain <= 0.
struct gain_exceeds_loss : config_error {
    using config_error::config_error;
};

/// External coupling exceeds the supplied total decay (kappa_e > kappa).
struct external_exceeds_total : config_error {
    using config_error::config_error;
};

/// Negative input power.
struct negative_power : config_error {
    using config_error::config_error;
};

/// Parameters outside the regime where a quantity is defined (physics error).
struct regime_violation : error {
    using error::error;
};

/// Maximum transmission never exceeds unity: no amplification window exists.
struct no_amplification : regime_violation {
    using regime_violation::regime_violation;
};

/// No positive kappa_eff admits amplification at the given coupling.
struct no_amplification_possible : regime_violation {
    using regime_violation::regime_violation;
};

/// The inverse map s_in(T) is undefined because the nonlinearity U vanishes.
struct non_positive_nonlinearity : regime_violation {
    using regime_violation::regime_violation;
};

/// Steady-state reconstruction disagrees with the supplied root.
struct inconsistent_root : error {
    using error::error;
};

/// Noise-to-signal ratio requested at a point with zero output signal.
struct zero_signal : regime_violation {
    using regime_violation::regime_violation;
};

/// Numerics: every polynomial coefficient is zero.
struct degenerate_all_zero : error {
    using error::error;
};

/// Numerics: eigenvalue iteration failed to converge within the cap.
struct no_convergence : error {
    using error::error;
};

/// Numerics: matrix numerically singular during elimination.
struct singular_matrix : error {
    using error::error;
};

} // namespace gaom
