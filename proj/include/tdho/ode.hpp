#pragma once

// Dormand-Prince 5(4) integrator with adaptive step control and the
// standard fourth-order continuous extension for dense output.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.0;        // 0: unbounded
    long max_steps = 2000000;
};

template <std::size_t N>
class DenseTrajectory {
public:
    struct Segment {
        double t0 = 0.0;
        double h = 0.0;
        std::array<State<N>, 5> r{};
    };

    double tBegin() const noexcept { return segs_.empty() ? t_end_ : segs_.front().t0; }
    double tEnd() const noexcept { return t_end_; }
    std::size_t steps() const noexcept { return segs_.size(); }
    const std::vector<Segment>& segments() const noexcept { return segs_; }

    State<N> operator()(double t) const {
        if (segs_.empty()) return y_end_;
        const double span = t_end_ - tBegin();
        const double slack = 1e-12 * std::max(1.0, std::abs(span));
        if (t < tBegin() - slack || t > t_end_ + slack)
            throw DomainError("dense output requested outside the integrated interval");
        auto it = std::upper_bound(segs_.begin(), segs_.end(), t,
                                   [](double v, const Segment& s) { return v < s.t0; });
        const Segment& s = it == segs_.begin() ? segs_.front() : *std::prev(it);
        const double th = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
        const double th1 = 1.0 - th;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = s.r[0][i] + th * (s.r[1][i] + th1 * (s.r[2][i] + th * (s.r[3][i] + th1 * s.r[4][i])));
        return y;
    }

    const State<N>& finalState() const noexcept { return y_end_; }

private:
    template <std::size_t M, class F>
    friend DenseTrajectory<M> integrate(F&&, double, double, const State<M>&, const Tolerances&);

    std::vector<Segment> segs_;
    double t_end_ = 0.0;
    State<N> y_end_{};
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0).
template <std::size_t N, class F>
DenseTrajectory<N> integrate(F&& f, double t0, double t1, const State<N>& y0, const Tolerances& tol) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

    DenseTrajectory<N> out;
    out.t_end_ = t0;
    out.y_end_ = y0;
    if (!(t1 > t0)) return out;

    State<N> y = y0, k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    f(t0, y, k1);

    auto scale = [&](double a, double b) {
        return tol.atol + tol.rtol * std::max(std::abs(a), std::abs(b));
    };

    // initial step (Hairer's heuristic, simplified)
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sk = scale(y[i], y[i]);
        dnf += (k1[i] / sk) * (k1[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, t1 - t0);
    if (tol.h_max > 0) h = std::min(h, tol.h_max);

    double t = t0;
    long nsteps = 0;
    while (t < t1) {
        if (++nsteps > tol.max_steps) throw SolverFailure("ode: maximum number of steps exceeded");
        if (t + h > t1 || t1 - (t + h) < 1e-14 * std::abs(t1)) h = t1 - t;

        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk = scale(y[i], ynew[i]);
            err += (e / sk) * (e / sk);
        }
        err = std::sqrt(err / N);
        if (!std::isfinite(err)) throw SolverFailure("ode: non-finite error estimate");

        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 10.0);
        if (err <= 1.0) {
            typename DenseTrajectory<N>::Segment seg;
            seg.t0 = t;
            seg.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double dy = ynew[i] - y[i];
                const double bspl = h * k1[i] - dy;
                seg.r[0][i] = y[i];
                seg.r[1][i] = dy;
                seg.r[2][i] = bspl;
                seg.r[3][i] = dy - h * k7[i] - bspl;
                seg.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            out.segs_.push_back(seg);
            t = (h == t1 - t) ? t1 : t + h;
            y = ynew;
            k1 = k7;
            h *= std::min(fac, 5.0);
        } else {
            h *= std::min(fac, 1.0);
        }
        if (tol.h_max > 0) h = std::min(h, tol.h_max);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) throw SolverFailure("ode: step size underflow");
    }
    out.t_end_ = t1;
    out.y_end_ = y;
    return out;
}

}  // namespace tdho::ode
