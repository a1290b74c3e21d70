#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaom/errors.hpp"

namespace gaom {

/// Real cubic c3 x^3 + c2 x^2 + c1 x + c0. Degree degradation (c3 = 0,
/// c3 = c2 = 0, ...) is handled explicitly by the solver.
struct Cubic {
    double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

    double eval(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
    double deriv(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
};

namespace detail {

/// Newton refinement safeguarded by residual decrease: a step is kept only
/// if it shrinks |p(x)|. Near a multiple root p and p' are both roundoff-
/// dominated and a raw Newton step is garbage of order the root itself;
/// the acceptance test rejects such steps and keeps the closed-form value.
inline double polish_root(const Cubic& c, double x) {
    double f = c.eval(x);
    for (int it = 0; it < 32 && f != 0.0; ++it) {
        const double df = c.deriv(x);
        if (df == 0.0) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        const double y = x - step;
        const double fy = c.eval(y);
        if (!(std::abs(fy) < std::abs(f))) break;
        x = y;
        f = fy;
        if (std::abs(step) <= 1e-15 * std::abs(x)) break;
    }
    return x;
}

inline void solve_quadratic(double a, double b, double c,
                            std::vector<double>& out) {
    if (a == 0.0) {
        if (b == 0.0) {
            if (c == 0.0) throw degenerate_all_zero("real_roots: zero polynomial");
            return; // nonzero constant: no roots
        }
        out.push_back(-c / b);
        return;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    if (disc == 0.0) {
        const double r = -b / (2.0 * a);
        out.push_back(r);
        out.push_back(r); // double root, multiplicity 2
        return;
    }
    // Cancellation-free quadratic formula.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    out.push_back(q / a);
    out.push_back(c / q);
}

/// Divide a known root out of the cubic: p(x) = (x - r)(q2 x^2 + q1 x + q0)
/// plus a discarded remainder of order |p(r)|. Composite deflation: when
/// |r| sits above the geometric root scale the recursion runs from the
/// constant term up so the smaller remaining roots keep their relative
/// accuracy, otherwise from the leading coefficient down (Wilkinson).
inline void deflate(const Cubic& c, double r, double& q2, double& q1,
                    double& q0) {
    q2 = c.c3;
    if (r != 0.0 && std::abs(c.c3 * r * r * r) > std::abs(c.c0)) {
        q0 = -c.c0 / r;
        q1 = (q0 - c.c1) / r;
    } else {
        q1 = c.c2 + r * q2;
        q0 = c.c1 + r * q1;
    }
}

/// Converge a seed on the full cubic, divide the root out, and recover the
/// remaining pair from the deflated quadratic. Each result is polished on
/// the original cubic, so the final accuracy is set by the cubic itself
/// rather than by the deflation. The quadratic also settles honestly
/// whether a borderline pair is real at all.
inline void root_and_deflate(const Cubic& c, double seed,
                             std::vector<double>& roots) {
    const double r = polish_root(c, seed);
    roots.push_back(r);
    double q2 = 0.0, q1 = 0.0, q0 = 0.0;
    deflate(c, r, q2, q1, q0);
    std::vector<double> rest;
    solve_quadratic(q2, q1, q0, rest);
    for (double x : rest) roots.push_back(polish_root(c, x));
}

} // namespace detail

/// All real roots of the cubic, ascending, with multiplicity. Each root is
/// refined by safeguarded Newton iteration; the residual satisfies
/// |p(r)| <= 1e-9 * max(|c3 r^3|, |c2 r^2|, |c1 r|, |c0|).
inline std::vector<double> real_roots(const Cubic& c) {
    std::vector<double> roots;
    if (c.c3 == 0.0) {
        detail::solve_quadratic(c.c2, c.c1, c.c0, roots);
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    // Normalize to monic t^3 + a t^2 + b t + d, then depress with
    // t = x - a/3 to obtain x^3 + p x + q.
    const double a = c.c2 / c.c3;
    const double b = c.c1 / c.c3;
    const double d = c.c0 / c.c3;
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = d - a * b / 3.0 + 2.0 * a * a * a / 27.0;

    const double half_q = 0.5 * q;
    const double third_p = p / 3.0;
    const double disc = half_q * half_q + third_p * third_p * third_p;

    // Classify the root pattern from the discriminant formed directly on
    // the original coefficients: the monic/depressed route above amplifies
    // rounding noise by the normalization, while these five terms carry
    // only a few ulp each, so the sign of delta is trustworthy whenever it
    // clears the noise of its own term scale.
    const double t_a = 18.0 * c.c3 * c.c2 * c.c1 * c.c0;
    const double t_b = -4.0 * c.c2 * c.c2 * c.c2 * c.c0;
    const double t_c = c.c2 * c.c2 * c.c1 * c.c1;
    const double t_d = -4.0 * c.c3 * c.c1 * c.c1 * c.c1;
    const double t_e = -27.0 * c.c3 * c.c3 * c.c0 * c.c0;
    const double delta = t_a + t_b + t_c + t_d + t_e;
    const double delta_scale = std::abs(t_a) + std::abs(t_b) + std::abs(t_c) +
                               std::abs(t_d) + std::abs(t_e);
    const double tol = 1e-14 * delta_scale;

    if (delta < -tol) {
        // One real root (Cardano); choose the cube root that avoids
        // subtractive cancellation. disc agrees with -delta in sign up to
        // its larger noise floor, so clamp it before taking the square root.
        const double s = std::sqrt(std::max(disc, 0.0));
        const double u = std::cbrt(-half_q - std::copysign(s, half_q));
        const double x = (u == 0.0) ? 0.0 : u - third_p / u;
        roots.push_back(detail::polish_root(c, x - shift));
    } else if (delta > tol && third_p < 0.0) {
        // Three distinct real roots. Only the most isolated root is taken
        // from the trigonometric form - it is always well conditioned -
        // while the clustered pair comes from the deflated quadratic,
        // which keeps small roots accurate even when the depression shift
        // dwarfs them. With theta in [0, pi/3] the roots order as
        // t2 <= t1 <= t0; the lower pair merges as theta -> 0 and the
        // upper pair as theta -> pi/3.
        const double m = 2.0 * std::sqrt(-third_p);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        constexpr double tpi3 = 2.0943951023931953;  // 2*pi/3
        constexpr double pi6 = 0.52359877559829887;  // pi/6
        const double iso = (theta < pi6) ? m * std::cos(theta)
                                         : m * std::cos(theta - 2.0 * tpi3);
        detail::root_and_deflate(c, iso - shift, roots);
    } else {
        // Boundary band: delta is below its own rounding noise, so the
        // double/complex-pair split cannot be read off the discriminant.
        if (half_q == 0.0 && third_p == 0.0) {
            roots.assign(3, detail::polish_root(c, -shift)); // triple root
        } else {
            // The simple root -2r (with q = 2 r^3 fixing the sign of r) is
            // well conditioned; the near-double pair is settled by the
            // deflated quadratic.
            const double dbl =
                (half_q >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::abs(third_p));
            detail::root_and_deflate(c, -2.0 * dbl - shift, roots);
        }
    }

    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace gaom
