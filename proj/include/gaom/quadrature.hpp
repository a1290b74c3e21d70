#pragma once

#include <cstddef>

namespace gaom {

/// Composite trapezoid rule with n_points samples (n_points >= 2) on [a, b].
/// Returns 0 for an empty interval.
template <typename F>
double integrate_trapezoid(F&& f, double a, double b, std::size_t n_points) {
    if (a == b || n_points < 2) return 0.0;
    const double h = (b - a) / static_cast<double>(n_points - 1);
    double sum = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i + 1 < n_points; ++i)
        sum += f(a + h * static_cast<double>(i));
    return sum * h;
}

} // namespace gaom
