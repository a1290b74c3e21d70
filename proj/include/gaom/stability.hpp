#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <string_view>
#include <vector>

#include "gaom/constants.hpp"
#include "gaom/matrix.hpp"
#include "gaom/params.hpp"
#include "gaom/steady_state.hpp"

namespace gaom {

/// Order of the fluctuation state vector used by the drift matrix.
inline constexpr std::array<std::string_view, 6> state_order = {
    "delta_a1", "delta_a1_dag", "delta_a2", "delta_a2_dag",
    "delta_q",  "delta_p"};

/// Drift matrix M of the linearized Langevin equations, du/dt = -M u + noise,
/// evaluated at the steady state (alpha1, q_bar). Entries in rad/s.
inline ComplexMatrix build_drift(const SystemParams& p,
                                 std::complex<double> alpha1, double q_bar) {
    using cd = std::complex<double>;
    const double d1e = p.Delta1 + p.g * q_bar;
    const cd i{0.0, 1.0};

    ComplexMatrix m(6);
    m(0, 0) = 0.5 * p.kappa_eff() + i * d1e;
    m(0, 2) = i * p.J;
    m(0, 4) = i * p.g * alpha1;
    m(1, 1) = 0.5 * p.kappa_eff() - i * d1e;
    m(1, 3) = -i * p.J;
    m(1, 4) = -i * p.g * std::conj(alpha1);
    m(2, 0) = i * p.J;
    m(2, 2) = 0.5 * p.kappa2() + i * p.Delta2;
    m(3, 1) = -i * p.J;
    m(3, 3) = 0.5 * p.kappa2() - i * p.Delta2;
    m(4, 5) = -p.omega_m;
    m(5, 0) = p.g * std::conj(alpha1);
    m(5, 1) = p.g * alpha1;
    m(5, 4) = p.omega_m;
    m(5, 5) = p.gamma_m;
    return m;
}

/// Eigenvalue-level stability report for one steady-state branch.
struct StabilityReport {
    Verdict verdict = Verdict::Marginal;
    std::vector<std::complex<double>> eigenvalues; ///< of M, rad/s
    double min_real = 0.0;  ///< smallest eigenvalue real part (rad/s)
    double tolerance = 0.0; ///< marginality band, 1e-6 x max |eigenvalue|
};

/// Classify a drift matrix: the branch is stable when every eigenvalue of M
/// has a positive real part (all fluctuations decay).
inline StabilityReport classify_drift(const ComplexMatrix& m_rad_s) {
    ComplexMatrix scaled = m_rad_s;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j)
            scaled(i, j) /= scaling::rate_unit;

    StabilityReport rep;
    rep.eigenvalues = eigenvalues(scaled);
    double max_abs = 0.0;
    double min_real = std::numeric_limits<double>::infinity();
    for (auto& ev : rep.eigenvalues) {
        ev *= scaling::rate_unit;
        max_abs = std::max(max_abs, std::abs(ev));
        min_real = std::min(min_real, ev.real());
    }
    rep.min_real = min_real;
    rep.tolerance = 1e-6 * max_abs;
    if (min_real > rep.tolerance)
        rep.verdict = Verdict::Stable;
    else if (min_real < -rep.tolerance)
        rep.verdict = Verdict::Unstable;
    else
        rep.verdict = Verdict::Marginal;
    return rep;
}

/// Classify one reconstructed branch and record the verdict on it.
inline StabilityReport classify(const SystemParams& p, SteadyBranch& branch) {
    const StabilityReport rep =
        classify_drift(build_drift(p, branch.alpha1, branch.q_bar));
    branch.stable = rep.verdict;
    return rep;
}

/// Solve, reconstruct and classify every branch at the given drive flux.
inline std::vector<SteadyBranch> classified_branches(const SystemParams& p,
                                                     Direction d, double s_in) {
    std::vector<SteadyBranch> branches = solve_branches(p, d, s_in);
    for (auto& b : branches) classify(p, b);
    return branches;
}

} // namespace gaom
