#pragma once

// Closed-form propagators for constant-coefficient systems. Normal modes come
// from a direct eigendecomposition of the mass-weighted potential matrix.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace tdho::fixtures {

using cplx = std::complex<double>;

/// 1D kernel for y'' = -w2 y + F at unit mass.
inline cplx modeKernel(double w2, double F, double hbar, double T, double a, double b) {
    using std::numbers::pi;
    const cplx i(0.0, 1.0);
    if (w2 > 0.0) {
        const double w = std::sqrt(w2);
        const double y0 = F / w2;
        a -= y0;
        b -= y0;
        const double s = std::sin(w * T), c = std::cos(w * T);
        const int n = static_cast<int>(std::floor(w * T / pi));
        const cplx pre = std::sqrt(w / (2 * pi * hbar * std::abs(s))) * std::exp(-i * (pi / 4) * double(1 + 2 * n));
        return pre * std::exp(i * (w / (2 * hbar * s) * ((a * a + b * b) * c - 2 * a * b) + F * F * T / (2 * w2 * hbar)));
    }
    if (w2 == 0.0) {
        // S = (a-b)^2/2T + F T (a+b)/2 - F^2 T^3 / 24
        const cplx pre = std::sqrt(1.0 / (2 * pi * hbar * T)) * std::exp(-i * pi / 4.0);
        return pre * std::exp(i * ((a - b) * (a - b) / (2 * T) + F * T * (a + b) / 2 - F * F * T * T * T / 24) / hbar);
    }
    const double k = std::sqrt(-w2);
    const double y0 = F / w2;
    a -= y0;
    b -= y0;
    const double s = std::sinh(k * T), c = std::cosh(k * T);
    const cplx pre = std::sqrt(k / (2 * pi * hbar * s)) * std::exp(-i * pi / 4.0);
    return pre * std::exp(i * (k / (2 * hbar * s) * ((a * a + b * b) * c - 2 * a * b) + F * F * T / (2 * w2 * hbar)));
}

/// Lab-frame kernel of two constant-coefficient coupled oscillators with
/// constant forces (accelerations f1, f2).
struct ConstantSystem {
    double m1 = 1, m2 = 1, w1 = 1, w2 = 1, lambda = 0, f1 = 0, f2 = 0, hbar = 1;

    cplx kernel(double T, double xpp1, double xpp2, double xp1, double xp2) const {
        Eigen::Matrix2d W;
        const double r1 = std::sqrt(m1), r2 = std::sqrt(m2);
        W << w1 * w1, lambda / (r1 * r2), lambda / (r1 * r2), w2 * w2;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(W);
        const Eigen::Matrix2d U = es.eigenvectors();
        const Eigen::Vector2d F = U.transpose() * Eigen::Vector2d(r1 * f1, r2 * f2);
        const Eigen::Vector2d zpp = U.transpose() * Eigen::Vector2d(r1 * xpp1, r2 * xpp2);
        const Eigen::Vector2d zp = U.transpose() * Eigen::Vector2d(r1 * xp1, r2 * xp2);
        cplx k = std::sqrt(m1 * m2);
        for (int j = 0; j < 2; ++j) k *= modeKernel(es.eigenvalues()(j), F(j), hbar, T, zpp(j), zp(j));
        return k;
    }
};

}  // namespace tdho::fixtures
