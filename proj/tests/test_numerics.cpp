#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gaom/gaom.hpp"
#include "test_support.hpp"

using namespace gaom;
using testsup::close;
using cd = std::complex<double>;

namespace {

double cubic_residual_scale(const Cubic& c, double x) {
    return std::max({std::abs(c.c3 * x * x * x), std::abs(c.c2 * x * x),
                     std::abs(c.c1 * x), std::abs(c.c0), 1e-300});
}

/// Independent root finder: bisection on sign changes of the cubic over a
/// bracket grid (oracle for the closed-form solver).
std::vector<double> bisect_roots(const Cubic& c, double lo, double hi) {
    std::vector<double> roots;
    const int n = 20000;
    double x0 = lo, f0 = c.eval(lo);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo + (hi - lo) * i / n;
        const double f1 = c.eval(x1);
        if (f0 == 0.0) roots.push_back(x0);
        if (f0 * f1 < 0.0) {
            double a = x0, b = x1;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (c.eval(a) * c.eval(m) <= 0.0)
                    b = m;
                else
                    a = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

ComplexMatrix random_matrix(std::mt19937& rng, std::size_t n,
                            double diag_boost = 0.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = cd{u(rng), u(rng)} + (i == j ? cd{diag_boost} : cd{});
    return m;
}

} // namespace

TEST_CASE("cubic: distinct real roots", "[numerics]") {
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    const Cubic c{1.0, -6.0, 11.0, -6.0};
    const auto r = real_roots(c);
    REQUIRE(r.size() == 3);
    REQUIRE(close(r[0], 1.0, 1e-12));
    REQUIRE(close(r[1], 2.0, 1e-12));
    REQUIRE(close(r[2], 3.0, 1e-12));
}

TEST_CASE("cubic: double and triple roots", "[numerics]") {
    SECTION("(x-1)^2 (x-5)") {
        const Cubic c{1.0, -7.0, 11.0, -5.0};
        const auto r = real_roots(c);
        REQUIRE(r.size() == 3);
        REQUIRE(close(r[0], 1.0, 1e-7));
        REQUIRE(close(r[1], 1.0, 1e-7));
        REQUIRE(close(r[2], 5.0, 1e-12));
    }
    SECTION("(x+1)^2 (x-2), negative double root") {
        const Cubic c{1.0, 0.0, -3.0, -2.0};
        const auto r = real_roots(c);
        REQUIRE(r.size() == 3);
        REQUIRE(close(r[0], -1.0, 1e-7));
        REQUIRE(close(r[1], -1.0, 1e-7));
        REQUIRE(close(r[2], 2.0, 1e-12));
    }
    SECTION("(x-2)^3") {
        const Cubic c{1.0, -6.0, 12.0, -8.0};
        const auto r = real_roots(c);
        REQUIRE(r.size() == 3);
        for (double x : r) REQUIRE(close(x, 2.0, 1e-5));
    }
}

TEST_CASE("cubic: single real root", "[numerics]") {
    const Cubic c{1.0, 0.0, 1.0, 1.0}; // x^3 + x + 1
    const auto r = real_roots(c);
    REQUIRE(r.size() == 1);
    REQUIRE(close(r[0], -0.6823278038280193, 1e-12));
}

TEST_CASE("cubic: degree degradation", "[numerics]") {
    SECTION("quadratic") {
        const auto r = real_roots(Cubic{0.0, 1.0, -3.0, 2.0});
        REQUIRE(r.size() == 2);
        REQUIRE(close(r[0], 1.0, 1e-12));
        REQUIRE(close(r[1], 2.0, 1e-12));
    }
    SECTION("quadratic without real roots") {
        REQUIRE(real_roots(Cubic{0.0, 1.0, 0.0, 1.0}).empty());
    }
    SECTION("linear") {
        const auto r = real_roots(Cubic{0.0, 0.0, 2.0, -5.0});
        REQUIRE(r.size() == 1);
        REQUIRE(close(r[0], 2.5, 1e-15));
    }
    SECTION("nonzero constant has no roots") {
        REQUIRE(real_roots(Cubic{0.0, 0.0, 0.0, 3.0}).empty());
    }
    SECTION("identically zero polynomial") {
        REQUIRE_THROWS_AS(real_roots(Cubic{0.0, 0.0, 0.0, 0.0}),
                          degenerate_all_zero);
    }
}

TEST_CASE("cubic: residual contract on random polynomials", "[numerics]") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        Cubic c{u(rng), u(rng), u(rng), u(rng)};
        if (c.c3 == 0.0 && c.c2 == 0.0 && c.c1 == 0.0 && c.c0 == 0.0) continue;
        for (double r : real_roots(c))
            REQUIRE(std::abs(c.eval(r)) <= 1e-9 * cubic_residual_scale(c, r));
    }
}

TEST_CASE("cubic: agreement with bisection oracle", "[numerics]") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 100; ++k) {
        // Build a cubic from three random roots so all roots are real.
        double r1 = u(rng), r2 = u(rng), r3 = u(rng);
        const Cubic c{1.0, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3,
                      -r1 * r2 * r3};
        auto got = real_roots(c);
        auto oracle = bisect_roots(c, -12.0, 12.0);
        if (oracle.size() != got.size()) continue; // oracle missed a near-double
        std::sort(oracle.begin(), oracle.end());
        for (std::size_t i = 0; i < got.size(); ++i)
            REQUIRE(std::abs(got[i] - oracle[i]) <= 1e-6);
    }
}

TEST_CASE("cubic: resolves nearly degenerate root pairs", "[numerics]") {
    // Root spacing mirrors the bistable fold: two roots 1.6e-6 apart in
    // relative terms next to a third far below.
    const double r1 = 8.0e-3, r2 = 499.99173, r3 = 499.99976;
    const Cubic c{1.0, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3,
                  -r1 * r2 * r3};
    const auto r = real_roots(c);
    REQUIRE(r.size() == 3);
    REQUIRE(close(r[0], r1, 1e-9));
    REQUIRE(close(r[1], r2, 1e-8));
    REQUIRE(close(r[2], r3, 1e-8));
}

TEST_CASE("matrix: inverse round trip", "[numerics]") {
    std::mt19937 rng(99);
    for (int k = 0; k < 20; ++k) {
        const auto a = random_matrix(rng, 6, 4.0); // well conditioned
        const auto inv = invert(a);
        const auto prod = a * inv;
        const auto eye = ComplexMatrix::identity(6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                REQUIRE(std::abs(prod(i, j) - eye(i, j)) < 1e-11);
    }
}

TEST_CASE("matrix: singular detection", "[numerics]") {
    ComplexMatrix a(3);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(0, 2) = 3.0;
    for (std::size_t j = 0; j < 3; ++j) {
        a(1, j) = a(0, j) * 2.0; // duplicate row
        a(2, j) = cd{0.0, 1.0} * a(0, j);
    }
    REQUIRE_THROWS_AS(invert(a), singular_matrix);
}

TEST_CASE("matrix: determinant identities", "[numerics]") {
    std::mt19937 rng(55);

    SECTION("triangular matrix: product of the diagonal") {
        ComplexMatrix t(4);
        const cd diag[4] = {{2, 1}, {-1, 3}, {0.5, 0}, {0, -2}};
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t i = 0; i < 4; ++i) {
            t(i, i) = diag[i];
            for (std::size_t j = i + 1; j < 4; ++j) t(i, j) = cd{u(rng), u(rng)};
        }
        cd expected = 1.0;
        for (const auto& dv : diag) expected *= dv;
        REQUIRE(close(determinant(t), expected, 1e-12));
    }

    SECTION("multiplicativity det(AB) = det(A) det(B)") {
        for (int k = 0; k < 10; ++k) {
            const auto a = random_matrix(rng, 5);
            const auto b = random_matrix(rng, 5);
            REQUIRE(close(determinant(a * b), determinant(a) * determinant(b),
                          1e-10));
        }
    }
}

TEST_CASE("eigenvalues: diagonal and 2x2 closed forms", "[numerics]") {
    SECTION("diagonal matrix") {
        ComplexMatrix d(4);
        const cd vals[4] = {{1, 0}, {0, 2}, {-3, 1}, {5, -5}};
        for (std::size_t i = 0; i < 4; ++i) d(i, i) = vals[i];
        auto eig = eigenvalues(d);
        REQUIRE(eig.size() == 4);
        for (const auto& v : vals) {
            const bool found = std::any_of(
                eig.begin(), eig.end(),
                [&](cd e) { return std::abs(e - v) < 1e-10; });
            REQUIRE(found);
        }
    }

    SECTION("defective Jordan block") {
        ComplexMatrix j(2);
        j(0, 1) = 1.0;
        auto eig = eigenvalues(j);
        REQUIRE(eig.size() == 2);
        REQUIRE(std::abs(eig[0]) < 1e-8);
        REQUIRE(std::abs(eig[1]) < 1e-8);
    }

    SECTION("mechanical block of the drift matrix") {
        // [[0, -w], [w, gamma]] has eigenvalues gamma/2 +- i sqrt(4w^2-g^2)/2.
        const double w = two_pi * 2.0e8, gm = two_pi * 5.0e4;
        ComplexMatrix m(2);
        m(0, 1) = -w / scaling::rate_unit;
        m(1, 0) = w / scaling::rate_unit;
        m(1, 1) = gm / scaling::rate_unit;
        auto eig = eigenvalues(m);
        REQUIRE(eig.size() == 2);
        std::sort(eig.begin(), eig.end(),
                  [](cd a, cd b) { return a.imag() < b.imag(); });
        const double re = 1.570796326795e+05 / scaling::rate_unit;
        const double im = 1.256637051618e+09 / scaling::rate_unit;
        REQUIRE(close(eig[0], cd{re, -im}, 1e-10));
        REQUIRE(close(eig[1], cd{re, im}, 1e-10));
    }
}

TEST_CASE("eigenvalues: trace and determinant identities", "[numerics]") {
    std::mt19937 rng(2024);
    for (int k = 0; k < 25; ++k) {
        const auto a = random_matrix(rng, 6);
        const auto eig = eigenvalues(a);
        REQUIRE(eig.size() == 6);

        cd tr{};
        for (std::size_t i = 0; i < 6; ++i) tr += a(i, i);
        cd sum{}, prod = 1.0;
        for (const auto& e : eig) {
            sum += e;
            prod *= e;
        }
        REQUIRE(std::abs(sum - tr) < 1e-9 * std::max(1.0, std::abs(tr)));
        const cd det = determinant(a);
        REQUIRE(std::abs(prod - det) < 1e-8 * std::max(1.0, std::abs(det)));
    }
}

TEST_CASE("eigenvalues: similarity invariance", "[numerics]") {
    std::mt19937 rng(31337);
    const auto a = random_matrix(rng, 6);
    const auto p = random_matrix(rng, 6, 3.0);
    const auto b = invert(p) * a * p;

    auto ea = eigenvalues(a);
    auto eb = eigenvalues(b);
    const auto by_parts = [](cd x, cd y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    };
    std::sort(ea.begin(), ea.end(), by_parts);
    std::sort(eb.begin(), eb.end(), by_parts);
    for (std::size_t i = 0; i < 6; ++i)
        REQUIRE(std::abs(ea[i] - eb[i]) < 1e-7);
}

TEST_CASE("trapezoid quadrature", "[numerics]") {
    SECTION("empty interval") {
        REQUIRE(integrate_trapezoid([](double) { return 1.0; }, 2.0, 2.0, 101) ==
                0.0);
    }
    SECTION("linear integrand is exact") {
        const double got = integrate_trapezoid(
            [](double x) { return 3.0 * x + 1.0; }, -1.0, 2.0, 11);
        REQUIRE(close(got, 1.5 * (4.0 - 1.0) + 3.0, 1e-13)); // 7.5
    }
    SECTION("sin over [0, pi] converges at second order") {
        const double c1 = integrate_trapezoid(
            [](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 101);
        const double c2 = integrate_trapezoid(
            [](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 201);
        REQUIRE(std::abs(c1 - 2.0) < 2e-4);
        REQUIRE(std::abs(c2 - 2.0) < std::abs(c1 - 2.0) / 3.5);
    }
}
