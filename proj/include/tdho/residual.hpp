#pragma once

// Finite-difference check that a kernel solves the lab-frame Schroedinger
// equation in its final arguments:
//   i hbar dK/dt'' = [ -sum_j hbar^2/(2 m_j) d^2/dx_j''^2 + V(x'', t'') ] K.
// Derivatives use five-point central stencils at steps h and h/2 combined by
// Richardson extrapolation.

#include <algorithm>
#include <cmath>
#include <map>

#include "tdho/propagator.hpp"

namespace tdho {

struct ResidualOptions {
    double h_t = 2e-3;
    double h_x = 2e-2;  // upper bound; shrunk by the local wavenumber
};

struct ResidualSample {
    double t = 0.0;
    Vec2 xpp = Vec2::Zero(), xp = Vec2::Zero();
    double absolute = 0.0;
    double relative = 0.0;
    cplx kernel = 0.0;
};

namespace detail {

template <class F>
cplx firstDerivative(F&& f, double h) {
    auto five = [&](double s) { return (f(-2 * s) - 8.0 * f(-s) + 8.0 * f(s) - f(2 * s)) / (12.0 * s); };
    return (16.0 * five(0.5 * h) - five(h)) / 15.0;
}

template <class F>
cplx secondDerivative(F&& f, double h) {
    const cplx f0 = f(0.0);
    auto five = [&](double s) {
        return (-f(-2 * s) + 16.0 * f(-s) - 30.0 * f0 + 16.0 * f(s) - f(2 * s)) / (12.0 * s * s);
    };
    return (16.0 * five(0.5 * h) - five(h)) / 15.0;
}

}  // namespace detail

/// Residuals at final times `times` (each in (t', t_max - 2 h_t]) and
/// position pairs; the auxiliary equation is solved once up to the last
/// stencil time so that every stencil kernel shares the same solutions.
inline std::vector<ResidualSample> schrodingerResidual(const DecoupledSystem& d, double tp,
                                                       const std::vector<double>& times,
                                                       const std::vector<std::pair<Vec2, Vec2>>& points,
                                                       Variant v, const KernelOptions& kopt = {},
                                                       const ResidualOptions& ropt = {}) {
    const auto& s = d.system();
    const double hbar = s.hbar();
    const double ht = ropt.h_t;
    double tlast = tp;
    for (double t : times) {
        if (!(t - 2 * ht > tp)) throw DomainError("residual: stencil reaches t'");
        tlast = std::max(tlast, t + 2 * ht);
    }
    s.requireInDomain(tlast);
    if (v == Variant::corrected && !d.admissible())
        throw InadmissibleSystem("residual: corrected kernel needs an admissible decoupling");
    const auto a1 = solveChannel(d, 1, v, tp, tlast, kopt);
    const auto a2 = solveChannel(d, 2, v, tp, tlast, kopt);

    std::vector<ResidualSample> out;
    for (double t : times) {
        std::map<double, Kernel> kernels;
        for (double off : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
            kernels.emplace(off, buildKernelFrom(d, tp, t + off * ht, v, kopt, a1, a2));
        const Kernel& k0 = kernels.at(0.0);
        const auto act = k0.action();
        const double m1 = s.mass(1).eval(t), m2 = s.mass(2).eval(t);

        for (const auto& [xpp, xp] : points) {
            const cplx K = k0.evaluate(xpp, xp);
            const cplx dKdt = detail::firstDerivative(
                [&](double off) { return kernels.at(off / ht).evaluate(xpp, xp); }, ht);

            // local wavenumber of exp(i S / hbar) sets the spatial step
            const Vec2 grad = act.a * xpp + act.B * xp + act.e;
            double hx = ropt.h_x;
            for (int j = 0; j < 2; ++j) {
                const double kw = std::abs(grad(j)) / hbar + std::sqrt(std::abs(act.a(j, j)) / hbar);
                hx = std::min(hx, 0.25 / std::max(kw, 1e-12));
            }
            const cplx d2x1 = detail::secondDerivative(
                [&](double off) { return k0.evaluate(xpp(0) + off, xpp(1), xp(0), xp(1)); }, hx);
            const cplx d2x2 = detail::secondDerivative(
                [&](double off) { return k0.evaluate(xpp(0), xpp(1) + off, xp(0), xp(1)); }, hx);

            const cplx lhs = I * hbar * dKdt;
            const cplx kin1 = -hbar * hbar / (2.0 * m1) * d2x1;
            const cplx kin2 = -hbar * hbar / (2.0 * m2) * d2x2;
            const cplx pot = s.potentialLab(xpp(0), xpp(1), t) * K;
            const double scale = std::abs(lhs) + std::abs(kin1) + std::abs(kin2) + std::abs(pot);

            ResidualSample r;
            r.t = t;
            r.xpp = xpp;
            r.xp = xp;
            r.kernel = K;
            r.absolute = std::abs(lhs - kin1 - kin2 - pot);
            r.relative = scale > 0.0 ? r.absolute / scale : r.absolute;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace tdho
