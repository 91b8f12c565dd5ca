#pragma once

// Constant-angle canonical transformation to decoupled channels.
//
//   x1 = ( Q1 cos a + Q2 sin a) / sqrt(m1),   x2 = (-Q1 sin a + Q2 cos a) / sqrt(m2)
//   p1 = sqrt(m1) ( P1 cos a + P2 sin a + beta1 x1)
//   p2 = sqrt(m2) (-P1 sin a + P2 cos a + beta2 x2),   beta_j = -mdot_j / (2 sqrt(m_j))
//
// In the new variables the Hamiltonian is
//   sum_j [P_j^2/2 + Omega_j^2 Q_j^2/2 - F_j Q_j] + Gamma Q1 Q2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tdho/system.hpp"

namespace tdho {

/// Which frequencies feed the channel stiffness: the mass-corrected
/// omega~_j^2 (`corrected`) or the bare omega_j^2 (`lw`).
enum class Variant { corrected, lw };

inline const char* variantName(Variant v) { return v == Variant::corrected ? "corrected" : "lw-variant"; }

struct ChannelValues {
    double OmegaSq1 = 0.0;
    double OmegaSq2 = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;
    double Gamma = 0.0;
};

/// Maps an angle onto the canonical representative in (-pi/4, pi/4].
inline double normalizeAngle(double alpha) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    alpha = std::remainder(alpha, half_pi);  // [-pi/4, pi/4]
    if (alpha <= -quarter_pi) alpha += half_pi;
    return alpha;
}

inline ChannelValues channelQuantities(const SystemSpec& s, double alpha, double t,
                                       Variant variant = Variant::corrected) {
    s.requireInDomain(t);
    double w1, w2;
    if (variant == Variant::corrected) {
        w1 = s.effectiveFrequencySquared(1, t);
        w2 = s.effectiveFrequencySquared(2, t);
    } else {
        const double o1 = s.omega(1).eval(t), o2 = s.omega(2).eval(t);
        w1 = o1 * o1;
        w2 = o2 * o2;
    }
    const double sm1 = std::sqrt(s.mass(1).eval(t));
    const double sm2 = std::sqrt(s.mass(2).eval(t));
    const double kappa = s.lambda().eval(t) / (sm1 * sm2);
    const double c = std::cos(alpha), sn = std::sin(alpha);
    const double s2 = std::sin(2.0 * alpha), c2 = std::cos(2.0 * alpha);
    const double g1 = sm1 * s.force(1).eval(t);
    const double g2 = sm2 * s.force(2).eval(t);

    ChannelValues v;
    v.OmegaSq1 = w1 * c * c + w2 * sn * sn - kappa * s2;
    v.OmegaSq2 = w1 * sn * sn + w2 * c * c + kappa * s2;
    v.Gamma = 0.5 * (w1 - w2) * s2 + kappa * c2;
    v.F1 = g1 * c - g2 * sn;
    v.F2 = g1 * sn + g2 * c;
    return v;
}

class CanonicalTransform {
public:
    CanonicalTransform(SystemSpec spec, double alpha) : spec_(std::move(spec)), alpha_(alpha) {}

    double alpha() const noexcept { return alpha_; }
    const SystemSpec& system() const noexcept { return spec_; }

    /// beta_j(t) = -mdot_j / (2 sqrt(m_j))
    double beta(int j, double t) const {
        const auto& m = spec_.mass(j);
        return -m.deriv1(t) / (2.0 * std::sqrt(m.eval(t)));
    }

    TransformedPhasePoint toRotated(const PhasePoint& pt, double t) const {
        spec_.requireInDomain(t);
        const double sm1 = std::sqrt(spec_.mass(1).eval(t));
        const double sm2 = std::sqrt(spec_.mass(2).eval(t));
        const double c = std::cos(alpha_), s = std::sin(alpha_);
        const double y1 = sm1 * pt.x1, y2 = sm2 * pt.x2;
        const double k1 = pt.p1 / sm1 - beta(1, t) * pt.x1;
        const double k2 = pt.p2 / sm2 - beta(2, t) * pt.x2;
        return {y1 * c - y2 * s, y1 * s + y2 * c, k1 * c - k2 * s, k1 * s + k2 * c};
    }

    PhasePoint fromRotated(const TransformedPhasePoint& q, double t) const {
        spec_.requireInDomain(t);
        const double sm1 = std::sqrt(spec_.mass(1).eval(t));
        const double sm2 = std::sqrt(spec_.mass(2).eval(t));
        const double c = std::cos(alpha_), s = std::sin(alpha_);
        PhasePoint pt;
        pt.x1 = (q.Q1 * c + q.Q2 * s) / sm1;
        pt.x2 = (-q.Q1 * s + q.Q2 * c) / sm2;
        pt.p1 = sm1 * (q.P1 * c + q.P2 * s + beta(1, t) * pt.x1);
        pt.p2 = sm2 * (-q.P1 * s + q.P2 * c + beta(2, t) * pt.x2);
        return pt;
    }

    /// Rotated positions only (momenta are not needed for kernel arguments).
    std::array<double, 2> rotatedPositions(double x1, double x2, double t) const {
        const double y1 = std::sqrt(spec_.mass(1).eval(t)) * x1;
        const double y2 = std::sqrt(spec_.mass(2).eval(t)) * x2;
        const double c = std::cos(alpha_), s = std::sin(alpha_);
        return {y1 * c - y2 * s, y1 * s + y2 * c};
    }

private:
    SystemSpec spec_;
    double alpha_;
};

struct DecoupleOptions {
    int time_samples = 1024;
    int angle_scan = 2048;
    double tol_gamma = 1e-9;
};

class DecoupledSystem {
public:
    DecoupledSystem(CanonicalTransform transform, bool admissible, double gamma_max, double worst_time,
                    double stiffness)
        : transform_(std::move(transform)), admissible_(admissible), gamma_max_(gamma_max),
          worst_time_(worst_time), stiffness_(stiffness) {}

    const CanonicalTransform& transform() const noexcept { return transform_; }
    const SystemSpec& system() const noexcept { return transform_.system(); }
    double alpha() const noexcept { return transform_.alpha(); }
    bool admissible() const noexcept { return admissible_; }
    double gammaMax() const noexcept { return gamma_max_; }
    double worstTime() const noexcept { return worst_time_; }
    /// max over sampled t and j of |Omega_j^2|.
    double maxStiffness() const noexcept { return stiffness_; }

    ChannelValues at(double t, Variant v = Variant::corrected) const {
        return channelQuantities(system(), alpha(), t, v);
    }
    double omegaSq(int j, double t, Variant v = Variant::corrected) const {
        const auto q = at(t, v);
        return j == 1 ? q.OmegaSq1 : q.OmegaSq2;
    }
    double drive(int j, double t) const {
        const auto q = at(t);
        return j == 1 ? q.F1 : q.F2;
    }
    double gamma(double t) const { return at(t).Gamma; }

private:
    CanonicalTransform transform_;
    bool admissible_;
    double gamma_max_;
    double worst_time_;
    double stiffness_;
};

namespace detail {

struct AngleSamples {
    std::vector<double> t, delta, kappa;  // delta = w1~^2 - w2~^2, kappa = lambda/sqrt(m1 m2)

    double gammaMax(double alpha, double* worst = nullptr) const {
        const double s2 = std::sin(2.0 * alpha), c2 = std::cos(2.0 * alpha);
        double g = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double v = std::abs(0.5 * delta[k] * s2 + kappa[k] * c2);
            if (v > g) {
                g = v;
                if (worst) *worst = t[k];
            }
        }
        return g;
    }
};

inline AngleSamples sampleAngleData(const SystemSpec& s, int n) {
    AngleSamples a;
    const auto& dom = s.domain();
    for (int k = 0; k < n; ++k) {
        const double t = n == 1 ? dom.lo : dom.lo + dom.span() * k / (n - 1);
        a.t.push_back(t);
        a.delta.push_back(s.effectiveFrequencySquared(1, t) - s.effectiveFrequencySquared(2, t));
        a.kappa.push_back(s.lambda().eval(t) /
                          std::sqrt(s.mass(1).eval(t) * s.mass(2).eval(t)));
    }
    return a;
}

inline DecoupledSystem finish(const SystemSpec& s, double alpha, const AngleSamples& a,
                              const DecoupleOptions& opt) {
    double worst = a.t.empty() ? s.domain().lo : a.t.front();
    const double gmax = a.gammaMax(alpha, &worst);
    double stiff = 0.0;
    for (double t : a.t) {
        const auto q = channelQuantities(s, alpha, t);
        stiff = std::max({stiff, std::abs(q.OmegaSq1), std::abs(q.OmegaSq2)});
    }
    const bool ok = gmax <= opt.tol_gamma * (1.0 + stiff);
    return DecoupledSystem(CanonicalTransform(s, alpha), ok, gmax, worst, stiff);
}

}  // namespace detail

/// Diagnostics for a caller-chosen angle.
inline DecoupledSystem decoupleWithAngle(const SystemSpec& s, double alpha,
                                         const DecoupleOptions& opt = {}) {
    const auto a = detail::sampleAngleData(s, opt.time_samples);
    return detail::finish(s, normalizeAngle(alpha), a, opt);
}

/// Finds the constant angle minimising max_t |Gamma(t)|: a uniform scan of
/// (-pi/4, pi/4] followed by golden-section refinement, competing against the
/// pointwise closed-form root at the most strongly coupled sample.
inline DecoupledSystem solveAngle(const SystemSpec& s, const DecoupleOptions& opt = {}) {
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    const auto a = detail::sampleAngleData(s, opt.time_samples);

    if (std::all_of(a.kappa.begin(), a.kappa.end(), [](double k) { return k == 0.0; }))
        return detail::finish(s, 0.0, a, opt);

    const double step = 2.0 * quarter_pi / opt.angle_scan;
    int best = 1;
    double best_g = a.gammaMax(-quarter_pi + step);
    for (int i = 2; i <= opt.angle_scan; ++i) {
        const double al = -quarter_pi + i * step;
        const double g = a.gammaMax(al);
        if (g < best_g || (g == best_g && std::abs(al) < std::abs(-quarter_pi + best * step))) {
            best = i;
            best_g = g;
        }
    }

    double lo = -quarter_pi + (best - 1) * step;
    double hi = std::min(quarter_pi, -quarter_pi + (best + 1) * step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double g1 = a.gammaMax(x1), g2 = a.gammaMax(x2);
    while (hi - lo > 1e-15) {
        if (g1 <= g2) {
            hi = x2; x2 = x1; g2 = g1;
            x1 = hi - invphi * (hi - lo);
            g1 = a.gammaMax(x1);
        } else {
            lo = x1; x1 = x2; g1 = g2;
            x2 = lo + invphi * (hi - lo);
            g2 = a.gammaMax(x2);
        }
    }
    double alpha = 0.5 * (lo + hi);
    double galpha = a.gammaMax(alpha);
    if (best_g < galpha) {
        alpha = -quarter_pi + best * step;
        galpha = best_g;
    }

    // Closed-form root tan(2a) = 2 kappa / (w2~^2 - w1~^2) at the sample where
    // the coupling data are largest; exact for admissible systems.
    std::size_t kstar = 0;
    double mag = -1.0;
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        const double m = std::hypot(a.delta[k], 2.0 * a.kappa[k]);
        if (m > mag) { mag = m; kstar = k; }
    }
    const double closed = normalizeAngle(0.5 * std::atan2(2.0 * a.kappa[kstar], -a.delta[kstar]));
    const double gclosed = a.gammaMax(closed);
    if (gclosed <= galpha + 1e-14 * (1.0 + mag)) alpha = closed;

    return detail::finish(s, normalizeAngle(alpha), a, opt);
}

}  // namespace tdho
