#pragma once

// Two coupled, driven oscillators with time-dependent masses and frequencies:
//
//   H(t) = sum_j [ p_j^2 / (2 m_j) + m_j omega_j^2 x_j^2 / 2 - m_j f_j x_j ]
//          + lambda x_1 x_2

#include <array>
#include <cmath>
#include <sstream>

#include "tdho/coefficient.hpp"
#include "tdho/errors.hpp"

namespace tdho {

struct PhasePoint {
    double x1 = 0.0, x2 = 0.0;
    double p1 = 0.0, p2 = 0.0;
};

struct TransformedPhasePoint {
    double Q1 = 0.0, Q2 = 0.0;
    double P1 = 0.0, P2 = 0.0;
};

struct SystemCoefficients {
    Coefficient m1 = Coefficient::constant(1.0);
    Coefficient m2 = Coefficient::constant(1.0);
    Coefficient omega1 = Coefficient::constant(0.0);
    Coefficient omega2 = Coefficient::constant(0.0);
    Coefficient f1 = Coefficient::constant(0.0);
    Coefficient f2 = Coefficient::constant(0.0);
    Coefficient lambda = Coefficient::constant(0.0);
};

class SystemSpec {
public:
    static constexpr int kPositivitySamples = 10000;

    /// Validates hbar > 0, the time domain, and strict positivity of both
    /// masses on a dense sample of the domain. Throws DomainError otherwise.
    SystemSpec(SystemCoefficients c, double hbar, Interval domain)
        : c_(std::move(c)), hbar_(hbar), domain_(domain) {
        if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw DomainError("hbar must be positive");
        if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.hi > domain_.lo))
            throw DomainError("time domain must be a finite interval with t_max > t_min");
        checkPositive(c_.m1, "m1");
        checkPositive(c_.m2, "m2");
    }

    const SystemCoefficients& coefficients() const noexcept { return c_; }
    double hbar() const noexcept { return hbar_; }
    const Interval& domain() const noexcept { return domain_; }

    const Coefficient& mass(int j) const { return j == 1 ? c_.m1 : c_.m2; }
    const Coefficient& omega(int j) const { return j == 1 ? c_.omega1 : c_.omega2; }
    const Coefficient& force(int j) const { return j == 1 ? c_.f1 : c_.f2; }
    const Coefficient& lambda() const noexcept { return c_.lambda; }

    /// True when neither mass varies in time.
    bool constantMasses() const { return c_.m1.isConstant() && c_.m2.isConstant(); }

    void requireInDomain(double t) const {
        if (!domain_.contains(t)) {
            std::ostringstream os;
            os << "time " << t << " outside system domain [" << domain_.lo << ", " << domain_.hi << "]";
            throw DomainError(os.str());
        }
    }

    /// omega~_j^2 = omega_j^2 + (mdot^2/m^2 - 2 mddot/m) / 4. May be negative.
    double effectiveFrequencySquared(int j, double t) const {
        requireInDomain(t);
        const auto& m = mass(j);
        const double mv = m.eval(t);
        const double r1 = m.deriv1(t) / mv;
        const double r2 = m.deriv2(t) / mv;
        const double w = omega(j).eval(t);
        return w * w + 0.25 * (r1 * r1 - 2.0 * r2);
    }

    double potentialLab(double x1, double x2, double t) const {
        requireInDomain(t);
        const double m1 = c_.m1.eval(t), m2 = c_.m2.eval(t);
        const double w1 = c_.omega1.eval(t), w2 = c_.omega2.eval(t);
        return 0.5 * m1 * w1 * w1 * x1 * x1 + 0.5 * m2 * w2 * w2 * x2 * x2 -
               m1 * c_.f1.eval(t) * x1 - m2 * c_.f2.eval(t) * x2 + c_.lambda.eval(t) * x1 * x2;
    }

    double kineticLab(double p1, double p2, double t) const {
        requireInDomain(t);
        return p1 * p1 / (2.0 * c_.m1.eval(t)) + p2 * p2 / (2.0 * c_.m2.eval(t));
    }

    double hamiltonianLab(const PhasePoint& pt, double t) const {
        return kineticLab(pt.p1, pt.p2, t) + potentialLab(pt.x1, pt.x2, t);
    }

private:
    void checkPositive(const Coefficient& m, const char* name) const {
        for (int i = 0; i <= kPositivitySamples; ++i) {
            const double t = domain_.lo + domain_.span() * i / kPositivitySamples;
            const double v = m.eval(t);
            if (!(v > 0.0)) {
                std::ostringstream os;
                os << "mass coefficient " << name << " is not strictly positive at t=" << t
                   << " (value " << v << ")";
                throw DomainError(os.str());
            }
        }
    }

    SystemCoefficients c_;
    double hbar_;
    Interval domain_;
};

}  // namespace tdho
