#pragma once

#include <cmath>
#include <complex>

#include "gaom/constants.hpp"
#include "gaom/errors.hpp"

namespace gaom {

/// Propagation direction of the signal through the two-cavity chain.
enum class Direction {
    Forward,  ///< input into cavity 1, output from cavity 2
    Backward, ///< input into cavity 2, output from cavity 1
};

inline const char* to_string(Direction d) {
    return d == Direction::Forward ? "forward" : "backward";
}

/// Linear-stability verdict of a steady-state branch.
enum class Verdict {
    Stable,   ///< every drift eigenvalue has a positive real part
    Unstable, ///< at least one eigenvalue real part is negative
    Marginal, ///< smallest real part within tolerance of zero
};

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    default: return "marginal";
    }
}

/// Full physical parameter set of the gain-assisted three-mode system.
/// All rates and frequencies are angular (rad/s, SI).
struct SystemParams {
    double omega_d  = 0.0; ///< drive angular frequency
    double omega_m  = 0.0; ///< mechanical angular frequency
    double gamma_m  = 0.0; ///< mechanical damping
    double g        = 0.0; ///< single-photon optomechanical coupling
    double J        = 0.0; ///< inter-cavity photon hopping
    double Delta1   = 0.0; ///< cavity-1 detuning omega_1 - omega_d
    double Delta2   = 0.0; ///< cavity-2 detuning omega_2 - omega_d
    double kappa1_e = 0.0; ///< cavity-1 external decay
    double kappa1_o = 0.0; ///< cavity-1 intrinsic decay
    double kappa2_e = 0.0; ///< cavity-2 external decay
    double kappa2_o = 0.0; ///< cavity-2 intrinsic decay
    double gain     = 0.0; ///< optical gain rate G in cavity 1

    double kappa1() const { return kappa1_e + kappa1_o; }
    double kappa2() const { return kappa2_e + kappa2_o; }

    /// Net cavity-1 decay after gain compensation; must stay positive
    /// (below the lasing threshold).
    double kappa_eff() const { return kappa1() - gain; }
};

/// Validates a raw parameter set and returns it unchanged on success.
///
/// Positivity rules: omega_d, omega_m, gamma_m and the external couplings
/// kappa_j,e must be strictly positive; kappa_j,o, gain, g and J must be
/// nonnegative (the g = 0 and J = 0 limits are legitimate decoupled cases
/// exercised by the linear-response checks); kappa_eff = kappa1 - gain must
/// be strictly positive.
inline SystemParams validate(const SystemParams& raw) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw non_positive_rate(std::string("validate: ") + name +
                                    " must be strictly positive");
    };
    auto nonnegative = [](double v, const char* name) {
        if (v < 0.0 || !std::isfinite(v))
            throw non_positive_rate(std::string("validate: ") + name +
                                    " must be nonnegative");
    };
    positive(raw.omega_d, "omega_d");
    positive(raw.omega_m, "omega_m");
    positive(raw.gamma_m, "gamma_m");
    positive(raw.kappa1_e, "kappa1_e");
    positive(raw.kappa2_e, "kappa2_e");
    nonnegative(raw.kappa1_o, "kappa1_o");
    nonnegative(raw.kappa2_o, "kappa2_o");
    nonnegative(raw.gain, "gain");
    nonnegative(raw.g, "g");
    nonnegative(raw.J, "J");
    if (!std::isfinite(raw.Delta1) || !std::isfinite(raw.Delta2))
        throw non_positive_rate("validate: detunings must be finite");
    if (!(raw.kappa_eff() > 0.0))
        throw gain_exceeds_loss(
            "validate: kappa_eff = kappa1 - gain must be strictly positive");
    return raw;
}

} // namespace gaom
