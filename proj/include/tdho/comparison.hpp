#pragma once

// Evolves one initial packet three ways (corrected kernel, lw-variant kernel,
// split-operator oracle) and reports how well each kernel result matches the
// oracle state.

#include <chrono>
#include <random>
#include <string>
#include <utility>

#include "tdho/oracle.hpp"
#include "tdho/propagator.hpp"
#include "tdho/residual.hpp"

namespace tdho {

struct ComparisonReport {
    std::string scenario;
    Variant variant = Variant::corrected;
    double fidelity = 0.0;
    double max_residual = 0.0;
    double gamma_max = 0.0;
    double alpha = 0.0;
    std::array<int, 2> maslov{0, 0};
    bool caustic_crossed = false;
    double norm = 0.0;
    double kernel_seconds = 0.0;
    double oracle_seconds = 0.0;
    int grid_points = 0;
    double grid_extent = 0.0;
    int steps = 0;
};

struct ComparisonOptions {
    int residual_times = 4;
    int residual_positions = 5;
    double residual_box = 2.0;  // half-width of the box positions are drawn from
    std::uint64_t seed = 12345;
    ResidualOptions residual{};
};

/// Deterministic residual probes: `times` final times in (t', t''] that keep
/// every channel away from caustics, and random position pairs.
inline std::vector<ResidualSample> residualProbe(const DecoupledSystem& d, double tp, double tpp, Variant v,
                                                 const KernelOptions& kopt, const ComparisonOptions& copt) {
    const double h = copt.residual.h_t;
    const double lo = tp + 0.25 * (tpp - tp);
    const double hi = std::min(tpp, d.system().domain().hi - 2.0 * h);
    const auto a1 = solveChannel(d, 1, v, tp, tpp, kopt);
    const auto a2 = solveChannel(d, 2, v, tp, tpp, kopt);

    std::vector<double> times;
    const int candidates = 8 * copt.residual_times;
    for (int i = 0; i < candidates && static_cast<int>(times.size()) < copt.residual_times; ++i) {
        const double t = hi - (hi - lo) * i / candidates;
        const double tc = std::min(t, tpp);
        const double s1 = std::abs(std::sin(a1.phase(tp, tc)));
        const double s2 = std::abs(std::sin(a2.phase(tp, tc)));
        if (s1 > 0.1 && s2 > 0.1) times.push_back(t);
    }
    std::mt19937_64 rng(copt.seed);
    std::uniform_real_distribution<double> u(-copt.residual_box, copt.residual_box);
    std::vector<std::pair<Vec2, Vec2>> pts;
    for (int i = 0; i < copt.residual_positions; ++i) {
        const Vec2 a(u(rng), u(rng));
        const Vec2 b(u(rng), u(rng));
        pts.emplace_back(a, b);
    }
    return schrodingerResidual(d, tp, times, pts, v, kopt, copt.residual);
}

inline double maxRelative(const std::vector<ResidualSample>& r) {
    double m = 0.0;
    for (const auto& s : r) m = std::max(m, s.relative);
    return m;
}

struct ComparisonResult {
    ComparisonReport corrected;
    ComparisonReport lw;
    oracle::GridState oracle_state;
    GaussianState2D corrected_state;
    GaussianState2D lw_state;
};

inline ComparisonResult runComparison(const std::string& id, const DecoupledSystem& d, double tp, double tpp,
                                      const GaussianState2D& initial, const oracle::Grid2D& grid, int nSteps,
                                      const KernelOptions& kopt = {}, const ComparisonOptions& copt = {}) {
    using clock = std::chrono::steady_clock;
    const auto& s = d.system();
    auto seconds = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };

    auto t0 = clock::now();
    const Kernel kc = buildKernel(d, tp, tpp, Variant::corrected, kopt);
    const GaussianState2D gc = propagateGaussian(kc, initial);
    auto t1 = clock::now();
    const Kernel kl = buildKernel(d, tp, tpp, Variant::lw, kopt);
    const GaussianState2D gl = propagateGaussian(kl, initial);
    auto t2 = clock::now();

    oracle::GridState psi0 = oracle::sample(grid, initial, tp);
    oracle::GridState psi = oracle::evolve(s, psi0, tp, tpp, nSteps);
    auto t3 = clock::now();

    const auto sc = oracle::sample(grid, gc, tpp);
    const auto sl = oracle::sample(grid, gl, tpp);

    auto report = [&](Variant v, const Kernel& k, const GaussianState2D& g, const oracle::GridState& sampled,
                      double kernel_s) {
        ComparisonReport r;
        r.scenario = id;
        r.variant = v;
        r.fidelity = oracle::fidelity(sampled, psi);
        r.max_residual = maxRelative(residualProbe(d, tp, tpp, v, kopt, copt));
        r.gamma_max = d.gammaMax();
        r.alpha = d.alpha();
        r.maslov = {k.maslovCount(1), k.maslovCount(2)};
        r.caustic_crossed = r.maslov[0] > 0 || r.maslov[1] > 0;
        r.norm = g.normSquared();
        r.kernel_seconds = kernel_s;
        r.oracle_seconds = seconds(t2, t3);
        r.grid_points = grid.points[0];
        r.grid_extent = grid.extent[0];
        r.steps = nSteps;
        return r;
    };
    ComparisonResult out{report(Variant::corrected, kc, gc, sc, seconds(t0, t1)),
                         report(Variant::lw, kl, gl, sl, seconds(t1, t2)), std::move(psi), gc, gl};
    return out;
}

/// Acceptance thresholds applied to the corrected variant.
struct ComparisonThresholds {
    double min_fidelity = 1.0 - 1e-4;
    double max_residual = 1e-4;
};

inline bool passes(const ComparisonReport& r, const ComparisonThresholds& th = {}) {
    return r.fidelity >= th.min_fidelity && r.max_residual <= th.max_residual;
}

}  // namespace tdho
