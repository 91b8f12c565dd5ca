#pragma once

// Auxiliary (Ermakov-Pinney) equation  rho'' + Omega^2(t) rho = 1 / rho^3.
//
// Solutions are assembled from two solutions u, v of the linear equation
// w'' + Omega^2 w = 0 with unit Wronskian u v' - u' v = 1:
//   rho = sqrt(u^2 + v^2),   phi(t) = int_{t0}^{t} ds / rho^2.
// phi is integrated as a fifth component of the same ODE state.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/ode.hpp"

namespace tdho {

using ScalarFn = std::function<double(double)>;

struct ErmakovInitial {
    double rho = 1.0;
    double drho = 0.0;
};

struct ErmakovOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double residual_tol = 1e-9;
    int check_points = 1000;
    int max_refinements = 3;
    double ill_conditioned_rho = 1e8;
};

class ErmakovSolution {
public:
    ErmakovSolution(int channel, double t0, double t1, ErmakovInitial ic, ScalarFn omega_sq,
                    ode::DenseTrajectory<5> traj, double rtol)
        : channel_(channel), t0_(t0), t1_(t1), ic_(ic), omega_sq_(std::move(omega_sq)),
          traj_(std::move(traj)), rtol_(rtol) {}

    int channel() const noexcept { return channel_; }
    double tBegin() const noexcept { return t0_; }
    double tEnd() const noexcept { return t1_; }
    const ErmakovInitial& initial() const noexcept { return ic_; }
    double toleranceUsed() const noexcept { return rtol_; }
    bool illConditioned() const noexcept { return ill_conditioned_; }
    double maxResidual() const noexcept { return max_residual_; }
    std::size_t steps() const noexcept { return traj_.steps(); }

    double rho(double t) const {
        const auto y = state(t);
        return std::sqrt(y[0] * y[0] + y[2] * y[2]);
    }

    double drho(double t) const {
        const auto y = state(t);
        return (y[0] * y[1] + y[2] * y[3]) / std::sqrt(y[0] * y[0] + y[2] * y[2]);
    }

    /// Accumulated phase phi(t) = int_{t0}^{t} ds / rho^2.
    double phi(double t) const { return state(t)[4]; }

    double phase(double ta, double tb) const { return phi(tb) - phi(ta); }

    /// |rho'' + Omega^2 rho - 1/rho^3| with rho'' assembled from the linear
    /// solutions and their equations of motion.
    double residual(double t) const {
        const auto y = state(t);
        const double w2 = omega_sq_(t);
        const double u = y[0], du = y[1], v = y[2], dv = y[3];
        const double r = std::sqrt(u * u + v * v);
        const double dr = (u * du + v * dv) / r;
        const double ddr = (du * du + dv * dv - w2 * (u * u + v * v)) / r - dr * dr / r;
        return std::abs(ddr + w2 * r - 1.0 / (r * r * r));
    }

    /// Times t in (ta, tb] at which sin(phi(t) - phi(ta)) vanishes.
    std::vector<double> causticsIn(double ta, double tb) const {
        std::vector<double> out;
        requireRange(ta);
        requireRange(tb);
        const double pa = phi(ta);
        const double total = phi(tb) - pa;
        for (int k = 1; k * std::numbers::pi <= total; ++k) {
            const double target = pa + k * std::numbers::pi;
            double lo = ta, hi = tb;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (phi(mid) < target) lo = mid; else hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        return out;
    }

    /// Number of caustics passed in (t0, t].
    int maslovCount(double t) const {
        return static_cast<int>(std::floor(phase(t0_, t) / std::numbers::pi));
    }

    ode::State<5> state(double t) const {
        requireRange(t);
        return traj_(t);
    }

private:
    friend ErmakovSolution solveErmakov(ScalarFn, double, double, ErmakovInitial, const ErmakovOptions&,
                                        int);

    void requireRange(double t) const {
        const double slack = 1e-12 * std::max(1.0, std::abs(t1_ - t0_));
        if (t < t0_ - slack || t > t1_ + slack) {
            std::ostringstream os;
            os << "Ermakov solution queried at t=" << t << " outside [" << t0_ << ", " << t1_ << "]";
            throw DomainError(os.str());
        }
    }

    int channel_;
    double t0_, t1_;
    ErmakovInitial ic_;
    ScalarFn omega_sq_;
    ode::DenseTrajectory<5> traj_;
    double rtol_;
    bool ill_conditioned_ = false;
    double max_residual_ = 0.0;
};

/// Pinney construction over [t0, t1]. Tightens the integrator tolerance until
/// the residual is below `residual_tol` on a dense check grid.
inline ErmakovSolution solveErmakov(ScalarFn omega_sq, double t0, double t1, ErmakovInitial ic,
                                    const ErmakovOptions& opt = {}, int channel = 1) {
    if (!(ic.rho > 0.0)) throw DomainError("Ermakov initial rho must be positive");
    if (!(t1 > t0)) throw DomainError("Ermakov interval must satisfy t1 > t0");

    auto rhs = [&omega_sq](double t, const ode::State<5>& y, ode::State<5>& dy) {
        const double w2 = omega_sq(t);
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[3];
        dy[3] = -w2 * y[2];
        dy[4] = 1.0 / (y[0] * y[0] + y[2] * y[2]);
    };
    const ode::State<5> y0{ic.rho, ic.drho, 0.0, 1.0 / ic.rho, 0.0};

    ode::Tolerances tol{opt.rtol, opt.atol};
    double worst = 0.0;
    for (int attempt = 0; attempt <= opt.max_refinements; ++attempt) {
        auto traj = ode::integrate<5>(rhs, t0, t1, y0, tol);
        ErmakovSolution sol(channel, t0, t1, ic, omega_sq, std::move(traj), tol.rtol);
        worst = 0.0;
        double max_rho = 0.0;
        for (int i = 0; i <= opt.check_points; ++i) {
            const double t = t0 + (t1 - t0) * i / opt.check_points;
            const double r = sol.rho(t);
            if (!(r > 0.0) || !std::isfinite(r))
                throw NonPositiveRho("Ermakov solution lost positivity at t=" + std::to_string(t));
            max_rho = std::max(max_rho, r);
            worst = std::max(worst, sol.residual(t));
        }
        if (worst <= opt.residual_tol) {
            sol.max_residual_ = worst;
            sol.ill_conditioned_ = max_rho > opt.ill_conditioned_rho;
            return sol;
        }
        tol.rtol *= 0.1;
        tol.atol *= 0.1;
    }
    std::ostringstream os;
    os << "Ermakov residual " << worst << " exceeds tolerance " << opt.residual_tol
       << " after refinement (channel " << channel << ")";
    throw SolverFailure(os.str());
}

/// Direct integration of the nonlinear equation with the phase as a third
/// component: state (rho, rho', phi). Used as an independent cross-check.
inline ode::DenseTrajectory<3> integrateErmakovDirect(const ScalarFn& omega_sq, double t0, double t1,
                                                       ErmakovInitial ic, const ode::Tolerances& tol) {
    auto rhs = [&omega_sq](double t, const ode::State<3>& y, ode::State<3>& dy) {
        dy[0] = y[1];
        dy[1] = -omega_sq(t) * y[0] + 1.0 / (y[0] * y[0] * y[0]);
        dy[2] = 1.0 / (y[0] * y[0]);
    };
    return ode::integrate<3>(rhs, t0, t1, ode::State<3>{ic.rho, ic.drho, 0.0}, tol);
}

}  // namespace tdho
