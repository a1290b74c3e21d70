#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "gaom/errors.hpp"

namespace gaom {

/// Small dense complex matrix (row-major), sized for the 6x6 drift matrix
/// and the 6x12 input matrix of this model (dimensions capped at 16).
class ComplexMatrix {
public:
    using value_type = std::complex<double>;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    value_type& operator()(std::size_t i, std::size_t j) {
        return a_[i * cols_ + j];
    }
    const value_type& operator()(std::size_t i, std::size_t j) const {
        return a_[i * cols_ + j];
    }

    ComplexMatrix transpose() const {
        ComplexMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        ComplexMatrix r(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const value_type aik = (*this)(i, k);
                if (aik == value_type{}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    r(i, j) += aik * rhs(k, j);
            }
        return r;
    }

    ComplexMatrix operator-(const ComplexMatrix& rhs) const {
        ComplexMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - rhs.a_[i];
        return r;
    }

    /// Maximum entry magnitude.
    double max_norm() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Infinity norm (maximum absolute row sum).
    double inf_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<value_type> a_;
};

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// singular_matrix when a pivot falls below 1e-14 times the row norm.
inline ComplexMatrix invert(const ComplexMatrix& m) {
    using cd = std::complex<double>;
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    ComplexMatrix inv = ComplexMatrix::identity(n);

    std::vector<double> row_norm(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            row_norm[i] = std::max(row_norm[i], std::abs(a(i, j)));

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
        if (std::abs(a(piv, col)) < 1e-14 * std::max(row_norm[piv], 1e-300))
            throw singular_matrix("invert: pivot below tolerance");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
            std::swap(row_norm[piv], row_norm[col]);
        }
        const cd inv_pivot = 1.0 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= inv_pivot;
            inv(col, j) *= inv_pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const cd f = a(i, col);
            if (f == cd{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Determinant by LU with partial pivoting (used as a cross-check oracle for
/// the eigenvalue product identity).
inline std::complex<double> determinant(const ComplexMatrix& m) {
    using cd = std::complex<double>;
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    cd det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
        if (a(piv, col) == cd{}) return cd{};
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const cd f = a(i, col) / a(col, col);
            if (f == cd{}) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return det;
}

namespace detail {

/// Householder reduction to upper Hessenberg form (similarity transform).
inline void hessenberg(ComplexMatrix& a) {
    using cd = std::complex<double>;
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<cd> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const cd x0 = a(k + 1, k);
        const cd phase = (x0 == cd{}) ? cd{1.0} : x0 / std::abs(x0);
        const cd alpha = -phase * xnorm;

        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k) - (i == k + 1 ? alpha : cd{});
            vnorm += std::norm(v[i]);
        }
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // Left-apply P = I - 2 v v^H to rows k+1..n-1.
        for (std::size_t j = k; j < n; ++j) {
            cd s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // Right-apply P to columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            cd s{};
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
        }
        // Entries below the subdiagonal of column k are now zero by
        // construction; clear roundoff explicitly.
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cd{};
    }
}

/// Eigenvalues of a complex 2x2 block; `closer_to_d` picks the Wilkinson shift.
inline std::pair<std::complex<double>, std::complex<double>>
eig2x2(std::complex<double> a, std::complex<double> b, std::complex<double> c,
       std::complex<double> d) {
    using cd = std::complex<double>;
    const cd tr = a + d;
    const cd diff = a - d;
    const cd s = std::sqrt(diff * diff + 4.0 * b * c);
    return {0.5 * (tr + s), 0.5 * (tr - s)};
}

} // namespace detail

/// Eigenvalues (with multiplicity) of a square complex matrix by Hessenberg
/// reduction followed by explicitly shifted QR iteration with Givens
/// rotations. Deflation tolerance: subdiagonal magnitude below 1e-12 times
/// the matrix norm. Throws no_convergence beyond 100 n^2 sweeps.
inline std::vector<std::complex<double>> eigenvalues(const ComplexMatrix& m) {
    using cd = std::complex<double>;
    const std::size_t n = m.rows();
    std::vector<cd> eigs;
    eigs.reserve(n);
    if (n == 0) return eigs;

    ComplexMatrix h = m;
    detail::hessenberg(h);

    const double norm = std::max(m.inf_norm(), 1e-300);
    const double tol = 1e-12 * norm;

    std::size_t hi = n - 1;
    std::size_t sweeps = 0;
    std::size_t stuck = 0; // sweeps since the last deflation
    const std::size_t cap = 100 * n * n;

    std::vector<double> cs(n);
    std::vector<cd> sn(n);

    while (true) {
        if (hi == 0) {
            eigs.push_back(h(0, 0));
            break;
        }
        if (std::abs(h(hi, hi - 1)) <= tol) {
            eigs.push_back(h(hi, hi));
            --hi;
            stuck = 0;
            continue;
        }
        // Active block [lo..hi]: no negligible subdiagonal inside.
        std::size_t lo = hi - 1;
        while (lo > 0 && std::abs(h(lo, lo - 1)) > tol) --lo;

        if (hi - lo == 1) {
            auto [l1, l2] =
                detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eigs.push_back(l1);
            eigs.push_back(l2);
            if (lo == 0) break;
            hi = lo - 1;
            stuck = 0;
            continue;
        }

        if (++sweeps > cap)
            throw no_convergence("eigenvalues: QR iteration cap exceeded");

        // Wilkinson shift: trailing 2x2 eigenvalue nearest h(hi,hi); an
        // occasional exceptional shift breaks rare symmetric stalls.
        cd sigma;
        if (++stuck % 24 == 0) {
            sigma = h(hi, hi) + std::abs(h(hi, hi - 1));
        } else {
            auto [l1, l2] = detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi),
                                           h(hi, hi - 1), h(hi, hi));
            sigma = (std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi))) ? l1 : l2;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= sigma;

        // QR factorization of the shifted Hessenberg block via Givens
        // rotations G_k = [[c, s], [-conj(s), c]] zeroing h(k+1, k)...
        for (std::size_t k = lo; k < hi; ++k) {
            const cd ha = h(k, k);
            const cd hb = h(k + 1, k);
            const double r = std::sqrt(std::norm(ha) + std::norm(hb));
            if (r == 0.0) {
                cs[k] = 1.0;
                sn[k] = cd{};
                continue;
            }
            if (ha == cd{}) {
                cs[k] = 0.0;
                sn[k] = 1.0;
            } else {
                cs[k] = std::abs(ha) / r;
                sn[k] = (ha / std::abs(ha)) * std::conj(hb) / r;
            }
            for (std::size_t j = k; j <= hi; ++j) {
                const cd t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = cs[k] * t1 + sn[k] * t2;
                h(k + 1, j) = -std::conj(sn[k]) * t1 + cs[k] * t2;
            }
        }
        // ...then form RQ by right-multiplying with the adjoints.
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t top = std::min(k + 1, hi);
            for (std::size_t i = lo; i <= top; ++i) {
                const cd t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = cs[k] * t1 + std::conj(sn[k]) * t2;
                h(i, k + 1) = -sn[k] * t1 + cs[k] * t2;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += sigma;
    }
    return eigs;
}

} // namespace gaom
