#include <gtest/gtest.h>

#include <random>

#include "tdho/coefficient.hpp"

using namespace tdho;

TEST(Coefficient, ConstantEvaluates) {
    const auto c = Coefficient::constant(2.5);
    EXPECT_EQ(c.eval(7.0), 2.5);
    EXPECT_EQ(c.deriv1(7.0), 0.0);
    EXPECT_EQ(c.deriv2(-3.0), 0.0);
    EXPECT_TRUE(c.isConstant());
}

TEST(Coefficient, ExponentialAtOrigin) {
    const auto c = Coefficient::exponential(1.0, 0.3);
    EXPECT_DOUBLE_EQ(c.eval(0.0), 1.0);
    EXPECT_NEAR(c.deriv2(0.0), 0.09, 1e-15);
    EXPECT_FALSE(c.isConstant());
}

TEST(Coefficient, PowerArithmetic) {
    const auto c = Coefficient::power(1.0, 0.5, 2.0);
    EXPECT_DOUBLE_EQ(c.eval(2.0), 4.0);  // (1 + 0.5 * 2)^2
    EXPECT_DOUBLE_EQ(c.deriv1(2.0), 2.0 * 0.5 * 2.0);
    EXPECT_DOUBLE_EQ(c.deriv2(2.0), 2.0 * 0.25);
}

TEST(Coefficient, SinusoidalSlopeVanishesAtZeroPhase) {
    const auto c = Coefficient::sinusoidal(0.0, 1.0, 2.0, 0.0);
    EXPECT_EQ(c.deriv1(0.0), 0.0);
    EXPECT_DOUBLE_EQ(c.eval(0.0), 1.0);
    EXPECT_DOUBLE_EQ(c.deriv2(0.0), -4.0);
}

TEST(Coefficient, PolynomialDerivatives) {
    const auto c = Coefficient::polynomial({1.0, -2.0, 0.5, 3.0});  // 1 - 2t + t^2/2 + 3t^3
    const double t = 1.7;
    EXPECT_NEAR(c.eval(t), 1 - 2 * t + 0.5 * t * t + 3 * t * t * t, 1e-13);
    EXPECT_NEAR(c.deriv1(t), -2 + t + 9 * t * t, 1e-13);
    EXPECT_NEAR(c.deriv2(t), 1 + 18 * t, 1e-13);
}

TEST(Coefficient, PowerNonIntegerOutsideDomainThrows) {
    const auto c = Coefficient::power(1.0, -1.0, 0.5);
    EXPECT_NO_THROW(c.eval(0.5));
    EXPECT_THROW(c.eval(2.0), DomainError);
}

TEST(Coefficient, SplineOutsideKnotsThrows) {
    const auto c = Coefficient::spline({0.0, 1.0, 2.0}, {1.0, 2.0, 0.5});
    EXPECT_THROW(c.eval(-0.1), DomainError);
    EXPECT_THROW(c.deriv1(2.5), DomainError);
    EXPECT_NO_THROW(c.eval(2.0));
}

TEST(Coefficient, SplineRejectsBadKnots) {
    EXPECT_THROW(Coefficient::spline({0.0, 0.0, 1.0}, {1, 2, 3}), DomainError);
    EXPECT_THROW(Coefficient::spline({0.0}, {1.0}), DomainError);
    EXPECT_THROW(Coefficient::spline({0.0, 1.0}, {1.0}), DomainError);
}

TEST(Coefficient, SplineReproducesKnots) {
    std::vector<double> t, y;
    for (int i = 0; i <= 12; ++i) {
        t.push_back(0.3 * i + 0.01 * i * i);
        y.push_back(std::sin(t.back()) + 2.0);
    }
    for (auto ends : {coeff::SplineEnds::natural, coeff::SplineEnds::clamped}) {
        const auto c = Coefficient::spline(t, y, ends, std::cos(t.front()), std::cos(t.back()));
        for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(c.eval(t[i]), y[i], 1e-14);
    }
}

TEST(Coefficient, SplineNaturalEndsHaveZeroCurvature) {
    const auto c = Coefficient::spline({0.0, 0.5, 1.5, 2.0}, {1.0, 3.0, 2.0, 2.5});
    EXPECT_NEAR(c.deriv2(0.0), 0.0, 1e-14);
    EXPECT_NEAR(c.deriv2(2.0), 0.0, 1e-14);
}

TEST(Coefficient, SplineClampedEndSlopes) {
    const auto c = Coefficient::spline({0.0, 0.5, 1.5, 2.0}, {1.0, 3.0, 2.0, 2.5}, coeff::SplineEnds::clamped,
                                       -1.0, 0.75);
    EXPECT_NEAR(c.deriv1(0.0), -1.0, 1e-13);
    EXPECT_NEAR(c.deriv1(2.0), 0.75, 1e-13);
}

TEST(Coefficient, SplineIsC2AcrossKnots) {
    const auto c = Coefficient::spline({0.0, 0.4, 1.1, 1.5, 2.3}, {1.0, 1.4, 0.7, 0.9, 1.6});
    for (double knot : {0.4, 1.1, 1.5}) {
        const double e = 1e-9;
        EXPECT_NEAR(c.eval(knot - e), c.eval(knot + e), 1e-8);
        EXPECT_NEAR(c.deriv1(knot - e), c.deriv1(knot + e), 1e-7);
        EXPECT_NEAR(c.deriv2(knot - e), c.deriv2(knot + e), 1e-7);
    }
}

// Analytic derivatives against central differences for random members of
// every analytic family.
TEST(CoefficientProperty, DerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double span = 10.0;
    const double h = 1e-4 * span;
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Coefficient> family{
            Coefficient::constant(3 * u(rng)),
            Coefficient::polynomial({u(rng), u(rng), 0.5 * u(rng), 0.1 * u(rng)}),
            Coefficient::exponential(1 + 0.5 * u(rng), 0.3 * u(rng)),
            Coefficient::sinusoidal(u(rng), u(rng), 1.5 + u(rng), 3 * u(rng)),
            Coefficient::power(2.0 + 0.5 * u(rng), 0.1 * u(rng), 2.5 * u(rng)),
        };
        const double t = 5.0 + 4.0 * u(rng);
        for (const auto& c : family) {
            const double d1 = c.deriv1(t), d2 = c.deriv2(t);
            const double fd1 = (c.eval(t + h) - c.eval(t - h)) / (2 * h);
            const double fd2 = (c.eval(t + h) - 2 * c.eval(t) + c.eval(t - h)) / (h * h);
            EXPECT_LE(std::abs(d1 - fd1), 1e-6 * (1 + std::abs(d1))) << c.kind() << " t=" << t;
            EXPECT_LE(std::abs(d2 - fd2), 1e-6 * (1 + std::abs(d2))) << c.kind() << " t=" << t;
            ++checked;
        }
    }
    EXPECT_EQ(checked, 500);
}
