#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "gaussdisturb/errors.hpp"

namespace gaussdisturb {

// Fixed-size real matrices for two-mode covariance algebra. Everything is
// closed-form cofactor arithmetic; no general eigensolver is involved.

struct Mat2 {
    std::array<double, 4> m{}; // row-major

    double& operator()(std::size_t i, std::size_t j) { return m[2 * i + j]; }
    double operator()(std::size_t i, std::size_t j) const { return m[2 * i + j]; }

    static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
    static Mat2 diag(double x, double y) { return Mat2{{x, 0.0, 0.0, y}}; }
};

struct Mat4 {
    std::array<double, 16> m{}; // row-major

    double& operator()(std::size_t i, std::size_t j) { return m[4 * i + j]; }
    double operator()(std::size_t i, std::size_t j) const { return m[4 * i + j]; }

    static Mat4 identity()
    {
        Mat4 r;
        for (std::size_t i = 0; i < 4; ++i)
            r(i, i) = 1.0;
        return r;
    }
};

inline Mat2 operator+(const Mat2& x, const Mat2& y)
{
    Mat2 r;
    for (std::size_t i = 0; i < 4; ++i)
        r.m[i] = x.m[i] + y.m[i];
    return r;
}

inline Mat2 operator*(const Mat2& x, const Mat2& y)
{
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
}

inline Mat2 transpose(const Mat2& x)
{
    return Mat2{{x.m[0], x.m[2], x.m[1], x.m[3]}};
}

inline double det(const Mat2& x)
{
    return x.m[0] * x.m[3] - x.m[1] * x.m[2];
}

inline double trace(const Mat2& x) { return x.m[0] + x.m[3]; }

inline Mat2 inv(const Mat2& x, double tol = 1e-300)
{
    const double d = det(x);
    if (std::abs(d) <= tol)
        throw Singular("inv: 2x2 determinant below tolerance");
    return Mat2{{x.m[3] / d, -x.m[1] / d, -x.m[2] / d, x.m[0] / d}};
}

/// Single-mode symplectic form J = [[0,1],[-1,0]].
inline Mat2 symplectic_J() { return Mat2{{0.0, 1.0, -1.0, 0.0}}; }

/// Rotation U(theta) used to parameterize pure seed covariances.
inline Mat2 rotation(double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    return Mat2{{c, s, -s, c}};
}

/// Squeezing kernel V(r) = diag(e^{2r}, e^{-2r}).
inline Mat2 squeeze_kernel(double r)
{
    return Mat2::diag(std::exp(2.0 * r), std::exp(-2.0 * r));
}

/// Pure single-mode seed CM gamma = U(theta) V(r) U(theta)^T.
inline Mat2 pure_seed_cm(double r, double theta)
{
    const Mat2 u = rotation(theta);
    return u * squeeze_kernel(r) * transpose(u);
}

inline Mat4 operator+(const Mat4& x, const Mat4& y)
{
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i)
        r.m[i] = x.m[i] + y.m[i];
    return r;
}

inline Mat4 operator*(const Mat4& x, const Mat4& y)
{
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 4; ++k)
                s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Mat4 transpose(const Mat4& x)
{
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            r(i, j) = x(j, i);
    return r;
}

namespace detail {
inline double det3(double a00, double a01, double a02, double a10, double a11,
                   double a12, double a20, double a21, double a22)
{
    return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20)
         + a02 * (a10 * a21 - a11 * a20);
}
} // namespace detail

inline double det(const Mat4& x)
{
    // cofactor expansion along the first row
    double r = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        std::array<double, 9> sub;
        std::size_t k = 0;
        for (std::size_t i = 1; i < 4; ++i)
            for (std::size_t jj = 0; jj < 4; ++jj)
                if (jj != j)
                    sub[k++] = x(i, jj);
        const double c = detail::det3(sub[0], sub[1], sub[2], sub[3], sub[4],
                                      sub[5], sub[6], sub[7], sub[8]);
        r += ((j % 2 == 0) ? 1.0 : -1.0) * x(0, j) * c;
    }
    return r;
}

inline Mat4 inv(const Mat4& x, double tol = 1e-300)
{
    const double d = det(x);
    if (std::abs(d) <= tol)
        throw Singular("inv: 4x4 determinant below tolerance");
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            std::array<double, 9> sub;
            std::size_t k = 0;
            for (std::size_t ii = 0; ii < 4; ++ii) {
                if (ii == i)
                    continue;
                for (std::size_t jj = 0; jj < 4; ++jj) {
                    if (jj == j)
                        continue;
                    sub[k++] = x(ii, jj);
                }
            }
            const double c = detail::det3(sub[0], sub[1], sub[2], sub[3],
                                          sub[4], sub[5], sub[6], sub[7],
                                          sub[8]);
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            r(j, i) = sign * c / d; // adjugate transpose
        }
    return r;
}

/// Direct sum of two single-mode matrices into mode-AB block layout.
inline Mat4 direct_sum(const Mat2& x, const Mat2& y)
{
    Mat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            r(i, j) = x(i, j);
            r(i + 2, j + 2) = y(i, j);
        }
    return r;
}

inline Mat2 block_A(const Mat4& g)
{
    return Mat2{{g(0, 0), g(0, 1), g(1, 0), g(1, 1)}};
}

inline Mat2 block_B(const Mat4& g)
{
    return Mat2{{g(2, 2), g(2, 3), g(3, 2), g(3, 3)}};
}

inline Mat2 block_C(const Mat4& g)
{
    return Mat2{{g(0, 2), g(0, 3), g(1, 2), g(1, 3)}};
}

inline Mat4 assemble_blocks(const Mat2& a, const Mat2& b, const Mat2& c)
{
    Mat4 g = direct_sum(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            g(i, j + 2) = c(i, j);
            g(j + 2, i) = c(i, j);
        }
    return g;
}

inline bool is_symmetric(const Mat4& g, double tol = 1e-9)
{
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(g(i, j) - g(j, i)) > tol * std::max(1.0, std::abs(g(i, j))))
                return false;
    return true;
}

/// Global symplectic eigenvalues of a two-mode CM.
struct SymplecticSpectrum {
    double nu_plus = 1.0;
    double nu_minus = 1.0;
};

/// Computes (nu+, nu-) from 2nu^2 = Delta +- sqrt(Delta^2 - 4 det(gamma)),
/// Delta = det A + det B + 2 det C. The smaller eigenvalue uses the
/// product form nu-^2 = 2 det(gamma) / (Delta + sqrt(disc)) to avoid
/// cancellation for strongly mixed states.
inline SymplecticSpectrum symplectic_eigenvalues(const Mat4& g, double tol = 1e-9)
{
    if (!is_symmetric(g))
        throw NonPhysical("symplectic_eigenvalues: CM not symmetric");
    const double det_a = det(block_A(g));
    const double det_b = det(block_B(g));
    const double det_c = det(block_C(g));
    const double det_g = det(g);
    if (det_g <= 0.0)
        throw NonPhysical("symplectic_eigenvalues: det(gamma) <= 0");
    const double delta = det_a + det_b + 2.0 * det_c;
    double disc = delta * delta - 4.0 * det_g;
    if (disc < -tol * std::max(1.0, delta * delta))
        throw NonPhysical("symplectic_eigenvalues: negative discriminant");
    disc = std::max(disc, 0.0);
    const double root = std::sqrt(disc);
    const double nu_plus_sq = 0.5 * (delta + root);
    const double nu_minus_sq = 2.0 * det_g / (delta + root);
    if (nu_plus_sq <= 0.0 || nu_minus_sq <= 0.0)
        throw NonPhysical("symplectic_eigenvalues: non-positive eigenvalue");
    return SymplecticSpectrum{std::sqrt(nu_plus_sq), std::sqrt(nu_minus_sq)};
}

} // namespace gaussdisturb
