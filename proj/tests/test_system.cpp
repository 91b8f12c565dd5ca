#include <gtest/gtest.h>

#include <random>

#include "tdho/system.hpp"

using namespace tdho;

namespace {

SystemSpec unitSpec(double omega, double lambda, double f1 = 0.0) {
    SystemCoefficients c;
    c.omega1 = Coefficient::constant(omega);
    c.omega2 = Coefficient::constant(omega);
    c.lambda = Coefficient::constant(lambda);
    c.f1 = Coefficient::constant(f1);
    return SystemSpec(c, 1.0, {0.0, 10.0});
}

}  // namespace

TEST(System, FreeParticleHamiltonian) {
    const auto s = unitSpec(0.0, 0.0);
    EXPECT_DOUBLE_EQ(s.hamiltonianLab({0.3, -1.0, 1.5, -2.0}, 1.0), 0.5 * 1.5 * 1.5 + 0.5 * 4.0);
}

TEST(System, OscillatorPotentialEnergy) {
    EXPECT_DOUBLE_EQ(unitSpec(1.0, 0.0).hamiltonianLab({1.0, 0.0, 0.0, 0.0}, 3.7), 0.5);
    EXPECT_DOUBLE_EQ(unitSpec(2.0, 0.0).potentialLab(1.0, 0.0, 0.0), 2.0);
}

TEST(System, CouplingAndDriveTerms) {
    EXPECT_DOUBLE_EQ(unitSpec(0.0, 2.0).hamiltonianLab({1.0, 3.0, 0.0, 0.0}, 0.0), 6.0);
    EXPECT_DOUBLE_EQ(unitSpec(0.0, 0.0, 3.0).potentialLab(2.0, 0.0, 0.0), -6.0);
    EXPECT_EQ(unitSpec(0.0, 0.0).potentialLab(0.0, 0.0, 0.0), 0.0);
}

TEST(System, RejectsNonPositiveMass) {
    SystemCoefficients c;
    c.m1 = Coefficient::sinusoidal(0.5, 1.0, 1.0, 0.0);
    EXPECT_THROW(SystemSpec(c, 1.0, {0.0, 5.0}), DomainError);
    c.m1 = Coefficient::constant(1.0);
    c.m2 = Coefficient::constant(0.0);
    EXPECT_THROW(SystemSpec(c, 1.0, {0.0, 5.0}), DomainError);
}

TEST(System, RejectsBadHbarAndDomain) {
    SystemCoefficients c;
    EXPECT_THROW(SystemSpec(c, 0.0, {0.0, 1.0}), DomainError);
    EXPECT_THROW(SystemSpec(c, 1.0, {1.0, 1.0}), DomainError);
}

TEST(System, OutsideDomainThrows) {
    const auto s = unitSpec(1.0, 0.0);
    EXPECT_THROW(s.potentialLab(0.0, 0.0, 11.0), DomainError);
    EXPECT_THROW(s.effectiveFrequencySquared(1, -1.0), DomainError);
}

TEST(System, EffectiveFrequencyExponentialMass) {
    const double gamma = 0.4, w0 = 1.3;
    SystemCoefficients c;
    c.m1 = Coefficient::exponential(1.0, gamma);
    c.omega1 = Coefficient::constant(w0);
    const SystemSpec s(c, 1.0, {0.0, 5.0});
    // finite-difference route for mdot/m and mddot/m
    for (double t : {0.0, 1.3, 4.2}) {
        const double h = 1e-4;
        const auto& m = s.mass(1);
        const double r1 = (m.eval(t + h) - m.eval(t - h)) / (2 * h) / m.eval(t);
        const double r2 = (m.eval(t + h) - 2 * m.eval(t) + m.eval(t - h)) / (h * h) / m.eval(t);
        const double fd = w0 * w0 + 0.25 * (r1 * r1 - 2 * r2);
        EXPECT_NEAR(s.effectiveFrequencySquared(1, t), w0 * w0 - gamma * gamma / 4, 1e-13);
        EXPECT_NEAR(fd, w0 * w0 - gamma * gamma / 4, 1e-6);
    }
}

TEST(System, EffectiveFrequencyQuadraticMassIsUncorrected) {
    // m = (1 + b t)^2: mdot^2/m^2 = 4b^2/(1+bt)^2 = 2 mddot/m
    SystemCoefficients c;
    c.m2 = Coefficient::power(1.0, 0.7, 2.0);
    c.omega2 = Coefficient::constant(0.9);
    const SystemSpec s(c, 1.0, {0.0, 5.0});
    for (double t : {0.0, 0.5, 2.0, 5.0}) EXPECT_NEAR(s.effectiveFrequencySquared(2, t), 0.81, 1e-13);
}

TEST(System, EffectiveFrequencyMayBeNegative) {
    SystemCoefficients c;
    c.m1 = Coefficient::exponential(1.0, 3.0);
    c.omega1 = Coefficient::constant(1.0);
    const SystemSpec s(c, 1.0, {0.0, 1.0});
    EXPECT_LT(s.effectiveFrequencySquared(1, 0.5), 0.0);
}

TEST(SystemProperty, HamiltonianIsKineticPlusPotential) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    SystemCoefficients c;
    c.m1 = Coefficient::exponential(1.0, 0.2);
    c.m2 = Coefficient::sinusoidal(2.0, 0.5, 1.0, 0.3);
    c.omega1 = Coefficient::constant(1.1);
    c.omega2 = Coefficient::polynomial({0.5, 0.1});
    c.f1 = Coefficient::sinusoidal(0.0, 0.4, 2.0, 0.0);
    c.lambda = Coefficient::constant(0.3);
    const SystemSpec s(c, 0.7, {0.0, 3.0});
    for (int i = 0; i < 100; ++i) {
        const PhasePoint p{u(rng), u(rng), u(rng), u(rng)};
        const double t = 1.5 + 0.75 * u(rng);
        EXPECT_EQ(s.hamiltonianLab(p, t), s.kineticLab(p.p1, p.p2, t) + s.potentialLab(p.x1, p.x2, t));
    }
}

TEST(SystemProperty, ConstantMassLeavesFrequencyUnchanged) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    SystemCoefficients c;
    c.m1 = Coefficient::constant(2.3);
    c.omega1 = Coefficient::sinusoidal(1.0, 0.3, 0.7, 0.1);
    const SystemSpec s(c, 1.0, {0.0, 10.0});
    for (int i = 0; i < 100; ++i) {
        const double t = u(rng);
        const double w = c.omega1.eval(t);
        EXPECT_EQ(s.effectiveFrequencySquared(1, t), w * w);
    }
}
