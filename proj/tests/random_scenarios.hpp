#pragma once

// Random admissible systems for property tests: both masses share m(t) and
// the coupling is a constant multiple of it, or the effective frequencies
// coincide so that any coupling decouples at pi/4.

#include <random>

#include "tdho/system.hpp"

namespace tdho::fixtures {

inline SystemSpec randomAdmissible(std::mt19937_64& rng, double t_max = 3.0, bool driven = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    SystemCoefficients c;
    const int kind = static_cast<int>(4 * u(rng));
    const double kappa = in(-0.5, 0.5);
    switch (kind) {
        case 0: {
            const double a = in(0.7, 1.5), g = in(-0.4, 0.4);
            c.m1 = c.m2 = Coefficient::exponential(a, g);
            c.lambda = Coefficient::exponential(kappa * a, g);
            break;
        }
        case 1: {
            const double a = in(0.8, 1.5), b = in(-0.3, 0.3) * a, nu = in(0.5, 2.0), th = in(0.0, 6.0);
            c.m1 = c.m2 = Coefficient::sinusoidal(a, b, nu, th);
            c.lambda = Coefficient::sinusoidal(kappa * a, kappa * b, nu, th);
            break;
        }
        case 2: {
            const double a = in(0.8, 1.2), b = in(0.0, 0.3);
            c.m1 = c.m2 = Coefficient::power(a, b, 2.0);
            c.lambda = Coefficient::polynomial({kappa * a * a, 2 * kappa * a * b, kappa * b * b});
            break;
        }
        default: {
            // unequal masses, equal effective frequencies
            const double g = in(-0.4, 0.4), w2 = in(0.6, 1.6);
            c.m1 = Coefficient::exponential(1.0, g);
            c.m2 = Coefficient::constant(in(0.7, 1.4));
            c.omega1 = Coefficient::constant(std::sqrt(w2 * w2 + 0.25 * g * g));
            c.omega2 = Coefficient::constant(w2);
            c.lambda = Coefficient::sinusoidal(in(-0.4, 0.4), in(-0.2, 0.2), in(0.5, 2.0), in(0.0, 6.0));
            break;
        }
    }
    if (kind != 3) {
        c.omega1 = Coefficient::constant(in(0.5, 1.5));
        c.omega2 = Coefficient::constant(in(0.8, 2.0));
    }
    if (driven) {
        c.f1 = Coefficient::sinusoidal(in(-0.3, 0.3), in(-0.5, 0.5), in(0.5, 2.0), in(0.0, 6.0));
        c.f2 = Coefficient::sinusoidal(in(-0.3, 0.3), in(-0.5, 0.5), in(0.5, 2.0), in(0.0, 6.0));
    }
    return SystemSpec(c, in(0.6, 1.4), {0.0, t_max});
}

}  // namespace tdho::fixtures
