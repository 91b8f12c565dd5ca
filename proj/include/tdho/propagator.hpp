#pragma once

// Exact propagator of the two-oscillator system, assembled channel by channel
// in the rotated, mass-scaled coordinates Q_j and mapped back to the lab frame:
//
//   K = prod_j sqrt( (m_j'' m_j')^{1/2} / (2 pi i hbar rho_j'' rho_j' sin phi_j) )
//         exp{ -i/(4 hbar) [mdot_j x_j^2]_{t'}^{t''} }
//         exp{ i/(2 hbar) (rho_j''dot/rho_j'' Q_j''^2 - rho_j'dot/rho_j' Q_j'^2) }
//         exp{ i/(2 hbar sin phi_j) [ (Q_j''^2/rho_j''^2 + Q_j'^2/rho_j'^2) cos phi_j
//               - 2 Q_j'' Q_j' / (rho_j'' rho_j') + 2 (Q_j''/rho_j'') I_j'' + 2 (Q_j'/rho_j') I_j'
//               - 2 D_j ] }
//
// with G_j = F_j rho_j, phi_j(b, a) = int_a^b dt / rho_j^2 and
//   I_j''  = int G_j(t) sin phi_j(t, t') dt,
//   I_j'   = int G_j(t) sin phi_j(t'', t) dt,
//   D_j    = int dt int_{t'}^{t} dtau G_j(t) G_j(tau) sin phi_j(t'', t) sin phi_j(tau, t').

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "tdho/decoupler.hpp"
#include "tdho/ermakov.hpp"
#include "tdho/gaussian.hpp"
#include "tdho/quadrature.hpp"

namespace tdho {

/// Form of the endpoint factor exp{-i/(4 hbar) [c x^2]}. `mass_rate` uses
/// c = mdot, which is what the transformation's generating function produces;
/// `rate_over_mass` uses c = mdot/m (dimensionally inconsistent unless m = 1,
/// kept for comparison).
enum class BoundaryPhase { mass_rate, rate_over_mass };

struct KernelOptions {
    ErmakovInitial ic{};
    ErmakovOptions ermakov{};
    int panels = 64;
    int order = 8;
    double caustic_tol = 1e-8;
    BoundaryPhase boundary = BoundaryPhase::mass_rate;
};

/// Lab-frame action of the kernel, K = amplitude * exp(i S / hbar),
///   S = x''^T a x''/2 + x''^T B x' + x'^T d x'/2 + e.x'' + g.x' + h.
struct QuadraticAction {
    Mat2 a = Mat2::Zero(), B = Mat2::Zero(), d = Mat2::Zero();
    Vec2 e = Vec2::Zero(), g = Vec2::Zero();
    double h = 0.0;
    cplx amplitude = 1.0;
};

struct ChannelEndpointData {
    double rho_p = 1.0, rho_pp = 1.0;    // rho(t'), rho(t'')
    double drho_p = 0.0, drho_pp = 0.0;
    double phi = 0.0;                    // phi(t'', t')
    double sin_phi = 0.0, cos_phi = 1.0;
    double I_pp = 0.0, I_p = 0.0, D = 0.0;
    int maslov = 0;
    std::vector<double> caustics;        // caustic times in (t', t'']
    double m_p = 1.0, m_pp = 1.0;
    double mdot_p = 0.0, mdot_pp = 0.0;
};

class Kernel {
public:
    double tPrime() const noexcept { return tp_; }
    double tDoublePrime() const noexcept { return tpp_; }
    Variant variant() const noexcept { return variant_; }
    const DecoupledSystem& decoupled() const noexcept { return *d_; }
    const SystemSpec& system() const noexcept { return d_->system(); }
    const ChannelEndpointData& channel(int j) const { return ch_[j - 1]; }
    const ErmakovSolution& auxiliary(int j) const { return aux_[j - 1]; }
    const KernelOptions& options() const noexcept { return opt_; }
    int maslovCount(int j) const { return ch_[j - 1].maslov; }

    /// K(x1'', x2'', t''; x1', x2', t'), evaluated factor by factor.
    cplx evaluate(double xq1, double xq2, double xp1, double xp2) const {
        const double hbar = system().hbar();
        const auto& tr = d_->transform();
        const auto Qpp = tr.rotatedPositions(xq1, xq2, tpp_);
        const auto Qp = tr.rotatedPositions(xp1, xp2, tp_);
        const std::array<double, 2> xpp{xq1, xq2}, xp{xp1, xp2};

        cplx amp = 1.0;
        double phase = 0.0;
        for (int j = 0; j < 2; ++j) {
            const auto& c = ch_[j];
            amp *= prefactor(c, hbar);
            if (variant_ == Variant::corrected) {
                const double kpp = boundaryRate(c.mdot_pp, c.m_pp), kp = boundaryRate(c.mdot_p, c.m_p);
                phase += -(kpp * xpp[j] * xpp[j] - kp * xp[j] * xp[j]) / (4.0 * hbar);
            }
            phase += (c.drho_pp / c.rho_pp * Qpp[j] * Qpp[j] - c.drho_p / c.rho_p * Qp[j] * Qp[j]) /
                     (2.0 * hbar);
            const double a = Qpp[j] / c.rho_pp, b = Qp[j] / c.rho_p;
            const double block = (a * a + b * b) * c.cos_phi - 2.0 * a * b + 2.0 * a * c.I_pp +
                                 2.0 * b * c.I_p - 2.0 * c.D;
            phase += block / (2.0 * hbar * c.sin_phi);
        }
        return amp * std::exp(I * phase);
    }

    cplx evaluate(const Vec2& xpp, const Vec2& xp) const { return evaluate(xpp(0), xpp(1), xp(0), xp(1)); }

    /// The same kernel as a quadratic form in the lab coordinates.
    QuadraticAction action() const {
        const auto& s = system();
        const double c = std::cos(d_->alpha()), sn = std::sin(d_->alpha());
        Mat2 R;
        R << c, -sn, sn, c;
        auto scaling = [&](double t) {
            Mat2 T = Mat2::Zero();
            T(0, 0) = std::sqrt(s.mass(1).eval(t));
            T(1, 1) = std::sqrt(s.mass(2).eval(t));
            return Mat2(R * T);
        };
        const Mat2 Tpp = scaling(tpp_), Tp = scaling(tp_);

        Vec2 aQ, dQ, BQ, eQ, gQ;
        QuadraticAction act;
        for (int j = 0; j < 2; ++j) {
            const auto& ch = ch_[j];
            const double sp = ch.sin_phi;
            aQ(j) = ch.drho_pp / ch.rho_pp + ch.cos_phi / (ch.rho_pp * ch.rho_pp * sp);
            dQ(j) = -ch.drho_p / ch.rho_p + ch.cos_phi / (ch.rho_p * ch.rho_p * sp);
            BQ(j) = -1.0 / (ch.rho_pp * ch.rho_p * sp);
            eQ(j) = ch.I_pp / (ch.rho_pp * sp);
            gQ(j) = ch.I_p / (ch.rho_p * sp);
            act.h += -ch.D / sp;
            act.amplitude *= prefactor(ch, s.hbar());
        }
        act.a = Tpp.transpose() * aQ.asDiagonal() * Tpp;
        act.d = Tp.transpose() * dQ.asDiagonal() * Tp;
        act.B = Tpp.transpose() * BQ.asDiagonal() * Tp;
        act.e = Tpp.transpose() * eQ;
        act.g = Tp.transpose() * gQ;
        if (variant_ == Variant::corrected) {
            for (int j = 0; j < 2; ++j) {
                act.a(j, j) -= 0.5 * boundaryRate(ch_[j].mdot_pp, ch_[j].m_pp);
                act.d(j, j) += 0.5 * boundaryRate(ch_[j].mdot_p, ch_[j].m_p);
            }
        }
        return act;
    }

private:
    friend Kernel buildKernelFrom(const DecoupledSystem&, double, double, Variant, const KernelOptions&,
                                  const ErmakovSolution&, const ErmakovSolution&);

    Kernel(const DecoupledSystem& d, double tp, double tpp, Variant v, const KernelOptions& opt,
           std::vector<ErmakovSolution> aux)
        : d_(std::make_shared<const DecoupledSystem>(d)), tp_(tp), tpp_(tpp), variant_(v), opt_(opt),
          aux_(std::move(aux)) {}

    double boundaryRate(double mdot, double m) const {
        return opt_.boundary == BoundaryPhase::mass_rate ? mdot : mdot / m;
    }

    /// sqrt((m'' m')^{1/2} / (2 pi i hbar rho'' rho' sin phi)), branch continued
    /// through caustics by e^{-i pi/2} per passage.
    static cplx prefactor(const ChannelEndpointData& c, double hbar) {
        const double mag = std::pow(c.m_pp * c.m_p, 0.25) /
                           std::sqrt(2.0 * std::numbers::pi * hbar * c.rho_pp * c.rho_p * std::abs(c.sin_phi));
        return mag * std::exp(-I * (std::numbers::pi / 4.0) * (1.0 + 2.0 * c.maslov));
    }

    std::shared_ptr<const DecoupledSystem> d_;
    double tp_, tpp_;
    Variant variant_;
    KernelOptions opt_;
    std::vector<ErmakovSolution> aux_;
    std::array<ChannelEndpointData, 2> ch_{};
};

/// Channel stiffness Omega_j^2(t) for the chosen variant.
inline ScalarFn channelStiffness(const DecoupledSystem& d, int j, Variant v) {
    return [d, j, v](double t) { return d.omegaSq(j, t, v); };
}

inline ErmakovSolution solveChannel(const DecoupledSystem& d, int j, Variant v, double t0, double t1,
                                    const KernelOptions& opt) {
    return solveErmakov(channelStiffness(d, j, v), t0, t1, opt.ic, opt.ermakov, j);
}

/// Assembles a kernel from auxiliary solutions that start at t' and cover t''.
inline Kernel buildKernelFrom(const DecoupledSystem& d, double tp, double tpp, Variant v,
                              const KernelOptions& opt, const ErmakovSolution& aux1,
                              const ErmakovSolution& aux2) {
    const auto& s = d.system();
    Kernel k(d, tp, tpp, v, opt, {aux1, aux2});
    const quad::Composite rule(opt.panels, opt.order);
    auto zeroForce = [&](int j) { return s.force(j).isConstant() && s.force(j).eval(tp) == 0.0; };
    const bool driven = !(zeroForce(1) && zeroForce(2));

    for (int j = 1; j <= 2; ++j) {
        const auto& sol = k.aux_[j - 1];
        auto& c = k.ch_[j - 1];
        c.rho_p = sol.rho(tp);
        c.drho_p = sol.drho(tp);
        c.rho_pp = sol.rho(tpp);
        c.drho_pp = sol.drho(tpp);
        c.phi = sol.phase(tp, tpp);
        c.sin_phi = std::sin(c.phi);
        c.cos_phi = std::cos(c.phi);
        c.maslov = static_cast<int>(std::floor(c.phi / std::numbers::pi));
        c.caustics = sol.causticsIn(tp, tpp);
        if (std::abs(c.sin_phi) <= opt.caustic_tol) {
            const double nearest = c.caustics.empty() ? tpp : c.caustics.back();
            std::ostringstream os;
            os << "caustic: |sin phi_" << j << "| = " << std::abs(c.sin_phi) << " at t''=" << tpp
               << " (nearest caustic near t=" << nearest << ")";
            throw CausticError(os.str(), j, nearest);
        }
        const auto& m = s.mass(j);
        c.m_p = m.eval(tp);
        c.m_pp = m.eval(tpp);
        c.mdot_p = m.deriv1(tp);
        c.mdot_pp = m.deriv1(tpp);

        if (!driven) continue;
        const double phi0 = sol.phi(tp);
        const double phiT = sol.phi(tpp);
        auto G = [&](double t) { return d.drive(j, t) * sol.rho(t); };
        auto forward = [&](double t) { return G(t) * std::sin(sol.phi(t) - phi0); };
        auto backward = [&](double t) { return G(t) * std::sin(phiT - sol.phi(t)); };
        c.I_pp = rule.integrate(forward, tp, tpp);
        c.I_p = rule.integrate(backward, tp, tpp);
        c.D = rule.integrateTriangle(backward, forward, tp, tpp);
    }
    return k;
}

/// Builds the kernel over [t', t'']. The corrected variant requires an
/// admissible decoupling.
inline Kernel buildKernel(const DecoupledSystem& d, double tp, double tpp, Variant v = Variant::corrected,
                          const KernelOptions& opt = {}) {
    const auto& s = d.system();
    if (!(tpp > tp)) throw DomainError("kernel requires t'' > t'");
    s.requireInDomain(tp);
    s.requireInDomain(tpp);
    if (v == Variant::corrected && !d.admissible()) {
        std::ostringstream os;
        os << "system is not decoupled by any constant angle (max |Gamma| = " << d.gammaMax()
           << " at t=" << d.worstTime() << ")";
        throw InadmissibleSystem(os.str());
    }
    const auto a1 = solveChannel(d, 1, v, tp, tpp, opt);
    const auto a2 = solveChannel(d, 2, v, tp, tpp, opt);
    return buildKernelFrom(d, tp, tpp, v, opt, a1, a2);
}

/// psi''(x'') = int K(x'', x') psi'(x') d^2x', done in closed form.
inline GaussianState2D propagateGaussian(const Kernel& k, const GaussianState2D& g) {
    const double hbar = k.system().hbar();
    const auto act = k.action();
    const CMat2 M = g.A - I * act.d.cast<cplx>() / hbar;
    const CVec2 w0 = g.b + I * act.g.cast<cplx>() / hbar;
    const CMat2 Minv = M.inverse();
    const CMat2 Bc = act.B.cast<cplx>();

    GaussianState2D out;
    out.A = -I * act.a.cast<cplx>() / hbar + Bc * Minv * Bc.transpose() / (hbar * hbar);
    out.A = 0.5 * (out.A + out.A.transpose());
    out.b = I * act.e.cast<cplx>() / hbar + I * (Bc * (Minv * w0)) / hbar;
    out.c = g.c + I * act.h / hbar + std::log(act.amplitude) + detail::logGaussianIntegral(M, w0);
    if (!detail::positiveDefinite(out.A.real()))
        throw NonConvergentGaussian("propagated Gaussian lost a positive-definite width (near a caustic?)");
    return out;
}

}  // namespace tdho
