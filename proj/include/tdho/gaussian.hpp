#pragma once

// Two-dimensional complex Gaussian states
//   psi(x) = exp(-x^T A x / 2 + b^T x + c),   A complex symmetric, Re A > 0.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "tdho/errors.hpp"

namespace tdho {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CVec2 = Eigen::Vector2cd;
using CMat2 = Eigen::Matrix2cd;

inline constexpr cplx I{0.0, 1.0};

/// Bilinear (unconjugated) product; Eigen's dot() conjugates its left operand.
inline cplx bdot(const CVec2& u, const CVec2& v) { return u(0) * v(0) + u(1) * v(1); }

namespace detail {

inline bool positiveDefinite(const Mat2& m) {
    return m(0, 0) > 0.0 && m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) > 0.0;
}

/// log of int exp(-x^T M x / 2 + w^T x) d^2x for complex symmetric M with
/// positive-definite real part. The square root of det M is continued from
/// the real positive-definite case: both eigenvalues have positive real part,
/// so principal logs of each give the right branch.
inline cplx logGaussianIntegral(const CMat2& Min, const CVec2& w) {
    const CMat2 M = 0.5 * (Min + Min.transpose());
    if (!positiveDefinite(M.real()))
        throw NonConvergentGaussian("Gaussian integral: real part of the quadratic form is not positive-definite");
    const cplx tr = M(0, 0) + M(1, 1);
    const cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const cplx disc = std::sqrt(0.25 * tr * tr - det);
    const cplx l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
    const CVec2 y = M.inverse() * w;
    return std::log(2.0 * std::numbers::pi) - 0.5 * (std::log(l1) + std::log(l2)) + 0.5 * bdot(w, y);
}

}  // namespace detail

struct GaussianState2D {
    CMat2 A = CMat2::Identity();
    CVec2 b = CVec2::Zero();
    cplx c = 0.0;

    /// Normalized packet centred at x0 with mean momentum p0 and width
    /// matrix A (real part positive-definite).
    static GaussianState2D wavepacket(const Vec2& x0, const Vec2& p0, const CMat2& A, double hbar) {
        GaussianState2D g;
        g.A = 0.5 * (A + A.transpose());
        const CVec2 x0c = x0.cast<cplx>();
        g.b = g.A * x0c + I * p0.cast<cplx>() / hbar;
        g.c = -0.5 * bdot(x0c, g.A * x0c) - I * p0.dot(x0) / hbar;
        g.normalize();
        return g;
    }

    /// Uncorrelated packet, psi ~ exp(-(x_j - x0_j)^2 / (2 sigma_j^2)).
    static GaussianState2D wavepacket(const Vec2& x0, const Vec2& p0, const Vec2& sigma, double hbar) {
        CMat2 A = CMat2::Zero();
        A(0, 0) = 1.0 / (sigma(0) * sigma(0));
        A(1, 1) = 1.0 / (sigma(1) * sigma(1));
        return wavepacket(x0, p0, A, hbar);
    }

    cplx logValue(const Vec2& x) const {
        const CVec2 xc = x.cast<cplx>();
        return -0.5 * bdot(xc, A * xc) + bdot(b, xc) + c;
    }

    cplx value(const Vec2& x) const { return std::exp(logValue(x)); }

    /// log of int |psi|^2.
    double logNormSquared() const {
        const Mat2 R = A.real();
        if (!detail::positiveDefinite(R))
            throw NonConvergentGaussian("Gaussian state: Re A is not positive-definite");
        const Vec2 rb = b.real();
        return std::log(std::numbers::pi) - 0.5 * std::log(R.determinant()) + rb.dot(R.inverse() * rb) +
               2.0 * c.real();
    }

    double normSquared() const { return std::exp(logNormSquared()); }

    void normalize() { c -= 0.5 * logNormSquared(); }

    Vec2 meanPosition() const { return A.real().inverse() * b.real(); }

    Mat2 positionCovariance() const { return 0.5 * A.real().inverse(); }

    Vec2 meanMomentum(double hbar) const {
        const CVec2 mu = meanPosition().cast<cplx>();
        return hbar * (b - A * mu).imag();
    }

    /// Phase of psi at the mean position.
    double phaseAtMean() const { return std::arg(value(meanPosition())); }
};

/// <a|b> = int conj(psi_a) psi_b.
inline cplx overlap(const GaussianState2D& a, const GaussianState2D& b) {
    const CMat2 M = a.A.conjugate() + b.A;
    const CVec2 w = a.b.conjugate() + b.b;
    return std::exp(detail::logGaussianIntegral(M, w) + std::conj(a.c) + b.c);
}

inline double fidelity(const GaussianState2D& a, const GaussianState2D& b) {
    const cplx o = overlap(a, b);
    return std::norm(o) / (a.normSquared() * b.normSquared());
}

}  // namespace tdho
