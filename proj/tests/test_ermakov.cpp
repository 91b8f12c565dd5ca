#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tdho/ermakov.hpp"

using namespace tdho;
using std::numbers::pi;

TEST(Ermakov, EquilibriumOfConstantFrequency) {
    const double w = 1.7;
    const auto sol = solveErmakov([w](double) { return w * w; }, 0.0, 5.0, {1.0 / std::sqrt(w), 0.0});
    for (double t : {0.0, 1.3, 2.9, 5.0}) {
        EXPECT_NEAR(sol.rho(t), 1.0 / std::sqrt(w), 1e-10);
        EXPECT_NEAR(sol.phi(t), w * t, 1e-9);
    }
}

TEST(Ermakov, FreeChannel) {
    const auto sol = solveErmakov([](double) { return 0.0; }, 0.0, 4.0, {1.0, 0.0});
    for (double tau : {0.5, 1.0, 2.0, 4.0}) {
        EXPECT_NEAR(sol.rho(tau), std::sqrt(1 + tau * tau), 1e-8);
        EXPECT_NEAR(sol.phi(tau), std::atan(tau), 1e-8);
    }
}

TEST(Ermakov, OffEquilibriumUnitFrequency) {
    // rho^2 = 4 cos^2 t + sin^2 t / 4,  tan phi = tan(t) / 4
    const auto sol = solveErmakov([](double) { return 1.0; }, 0.0, 1.4, {2.0, 0.0});
    for (double t : {0.2, 0.7, 1.1, 1.4}) {
        const double c = std::cos(t), s = std::sin(t);
        EXPECT_NEAR(sol.rho(t), std::sqrt(4 * c * c + s * s / 4), 1e-10);
        EXPECT_NEAR(sol.phi(t), std::atan(std::tan(t) / 4), 1e-9);
    }
}

TEST(Ermakov, PhaseAdditivity) {
    const auto sol = solveErmakov([](double t) { return 1.0 + 0.5 * std::sin(2 * t); }, 0.0, 6.0, {1.2, 0.3});
    const double t1 = 0.7, t2 = 2.9, t3 = 5.6;
    EXPECT_NEAR(sol.phase(t1, t3), sol.phase(t1, t2) + sol.phase(t2, t3), 1e-13);
}

TEST(Ermakov, CausticsOfStaticOscillator) {
    const double w = 2.0;
    const auto sol = solveErmakov([w](double) { return w * w; }, 0.0, 4.0, {1.0 / std::sqrt(w), 0.0});
    const auto c = sol.causticsIn(0.0, 4.0);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0], pi / 2, 1e-8);
    EXPECT_NEAR(c[1], pi, 1e-8);
    EXPECT_EQ(sol.maslovCount(1.0), 0);
    EXPECT_EQ(sol.maslovCount(2.0), 1);
    EXPECT_EQ(sol.maslovCount(3.5), 2);
    EXPECT_TRUE(sol.causticsIn(0.0, 1.5).empty());
}

TEST(Ermakov, FreeChannelNeverFocuses) {
    const auto sol = solveErmakov([](double) { return 0.0; }, 0.0, 50.0, {1.0, 0.0});
    EXPECT_TRUE(sol.causticsIn(0.0, 50.0).empty());
    EXPECT_LT(sol.phi(50.0), pi / 2);
}

TEST(Ermakov, ResidualBelowTolerance) {
    const auto sol = solveErmakov([](double t) { return 2.0 + std::cos(3 * t); }, 0.0, 10.0, {0.8, -0.2});
    EXPECT_LE(sol.maxResidual(), 1e-9);
    for (int i = 0; i <= 997; ++i) EXPECT_LE(sol.residual(10.0 * i / 997), 1e-9);
}

TEST(Ermakov, PinneyAgreesWithDirectIntegration) {
    auto w2 = [](double t) { return 1.5 + 0.8 * std::sin(1.3 * t + 0.4); };
    const ErmakovInitial ic{0.9, 0.25};
    const auto sol = solveErmakov(w2, 0.0, 8.0, ic);
    const auto direct = integrateErmakovDirect(w2, 0.0, 8.0, ic, {1e-13, 1e-14});
    for (int i = 0; i <= 80; ++i) {
        const double t = 0.1 * i;
        const auto y = direct(t);
        EXPECT_NEAR(sol.rho(t), y[0], 1e-8 * y[0]) << t;
        EXPECT_NEAR(sol.drho(t), y[1], 1e-8 * (1 + std::abs(y[1]))) << t;
        EXPECT_NEAR(sol.phi(t), y[2], 1e-8 * (1 + y[2])) << t;
    }
}

TEST(ErmakovProperty, LewisInvariantOfClassicalSolutions) {
    // For x'' + Omega^2 x = 0, I = (x/rho)^2 + (rho x' - rho' x)^2 is constant.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = u(rng), b = 0.5 * u(rng), nu = u(rng);
        auto w2 = [=](double t) { return a + b * std::cos(nu * t); };
        const auto sol = solveErmakov(w2, 0.0, 6.0, {u(rng), u(rng) - 0.8});
        auto rhs = [&](double t, const ode::State<2>& y, ode::State<2>& dy) {
            dy[0] = y[1];
            dy[1] = -w2(t) * y[0];
        };
        const auto x = ode::integrate<2>(rhs, 0.0, 6.0, {u(rng), u(rng)}, {1e-12, 1e-14});
        auto inv = [&](double t) {
            const auto y = x(t);
            const double r = sol.rho(t), dr = sol.drho(t);
            return std::pow(y[0] / r, 2) + std::pow(r * y[1] - dr * y[0], 2);
        };
        const double i0 = inv(0.0);
        for (double t : {1.0, 2.5, 4.0, 6.0}) EXPECT_NEAR(inv(t), i0, 1e-8 * i0);
    }
}

TEST(ErmakovProperty, PhaseIsIncreasing) {
    const auto sol = solveErmakov([](double t) { return 0.3 + std::sin(t); }, 0.0, 12.0, {1.0, 0.5});
    double prev = sol.phi(0.0);
    for (int i = 1; i <= 1200; ++i) {
        const double p = sol.phi(0.01 * i);
        EXPECT_GT(p, prev);
        prev = p;
    }
}

TEST(Ermakov, IllConditionedFlag) {
    ErmakovOptions opt;
    opt.ill_conditioned_rho = 10.0;
    const auto inverted = solveErmakov([](double) { return -1.0; }, 0.0, 5.0, {1.0, 0.0}, opt);
    EXPECT_TRUE(inverted.illConditioned());
    const auto bounded = solveErmakov([](double) { return 1.0; }, 0.0, 5.0, {1.0, 0.0}, opt);
    EXPECT_FALSE(bounded.illConditioned());
}

TEST(Ermakov, Errors) {
    EXPECT_THROW(solveErmakov([](double) { return 1.0; }, 0.0, 1.0, {0.0, 0.0}), DomainError);
    EXPECT_THROW(solveErmakov([](double) { return 1.0; }, 1.0, 1.0, {1.0, 0.0}), DomainError);
    const auto sol = solveErmakov([](double) { return 1.0; }, 0.0, 1.0, {1.0, 0.0});
    EXPECT_THROW(sol.rho(1.5), DomainError);
    ErmakovOptions impossible;
    impossible.residual_tol = 0.0;
    impossible.max_refinements = 1;
    EXPECT_THROW(solveErmakov([](double) { return 1.0; }, 0.0, 1.0, {1.0, 0.0}, impossible), SolverFailure);
}
