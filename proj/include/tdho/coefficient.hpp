#pragma once

// Time-dependent scalar coefficients m_j(t), omega_j(t), f_j(t), lambda(t).
// Every coefficient is drawn from a closed family of C^2 functions whose first
// and second derivatives are available analytically (or, for the tabulated
// variant, by differentiating the cubic spline).

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const noexcept { return t >= lo && t <= hi; }
    double span() const noexcept { return hi - lo; }
};

namespace coeff {

struct Constant {
    double value = 0.0;
};

/// c0 + c1 t + c2 t^2 + ...
struct Polynomial {
    std::vector<double> coeffs;
};

/// a e^{gamma t}
struct Exponential {
    double a = 1.0;
    double gamma = 0.0;
};

/// a + b cos(nu t + theta)
struct Sinusoidal {
    double a = 0.0;
    double b = 0.0;
    double nu = 0.0;
    double theta = 0.0;
};

/// (a + b t)^n
struct Power {
    double a = 1.0;
    double b = 0.0;
    double n = 1.0;
};

enum class SplineEnds { natural, clamped };

/// Cubic interpolating spline through (t_i, y_i).
struct Spline {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> m;  // second derivatives at the knots
    SplineEnds ends = SplineEnds::natural;
    double slope_lo = 0.0;  // used for clamped ends only
    double slope_hi = 0.0;
};

}  // namespace coeff

class Coefficient {
public:
    using Variant = std::variant<coeff::Constant, coeff::Polynomial, coeff::Exponential,
                                 coeff::Sinusoidal, coeff::Power, coeff::Spline>;

    Coefficient() : rep_(coeff::Constant{0.0}) {}

    static Coefficient constant(double v) { return Coefficient(coeff::Constant{v}); }

    static Coefficient polynomial(std::vector<double> c) {
        if (c.empty()) c.push_back(0.0);
        return Coefficient(coeff::Polynomial{std::move(c)});
    }

    static Coefficient exponential(double a, double gamma) {
        return Coefficient(coeff::Exponential{a, gamma});
    }

    static Coefficient sinusoidal(double a, double b, double nu, double theta) {
        return Coefficient(coeff::Sinusoidal{a, b, nu, theta});
    }

    static Coefficient power(double a, double b, double n) {
        return Coefficient(coeff::Power{a, b, n});
    }

    /// Cubic spline through the knots. Knot times must be strictly increasing
    /// and at least two knots are required.
    static Coefficient spline(std::vector<double> t, std::vector<double> y,
                              coeff::SplineEnds ends = coeff::SplineEnds::natural,
                              double slope_lo = 0.0, double slope_hi = 0.0) {
        if (t.size() != y.size()) throw DomainError("spline: knot and value counts differ");
        if (t.size() < 2) throw DomainError("spline: at least two knots are required");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1])) throw DomainError("spline: knot times must be strictly increasing");
        coeff::Spline s{std::move(t), std::move(y), {}, ends, slope_lo, slope_hi};
        s.m = secondDerivatives(s);
        Coefficient c(std::move(s));
        const auto& sp = std::get<coeff::Spline>(c.rep_);
        c.domain_ = Interval{sp.t.front(), sp.t.back()};
        return c;
    }

    const Variant& variant() const noexcept { return rep_; }
    const Interval& domain() const noexcept { return domain_; }

    std::string kind() const {
        return std::visit(
            [](const auto& v) -> std::string {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, coeff::Constant>) return "constant";
                else if constexpr (std::is_same_v<T, coeff::Polynomial>) return "polynomial";
                else if constexpr (std::is_same_v<T, coeff::Exponential>) return "exponential";
                else if constexpr (std::is_same_v<T, coeff::Sinusoidal>) return "sinusoidal";
                else if constexpr (std::is_same_v<T, coeff::Power>) return "power";
                else return "spline";
            },
            rep_);
    }

    /// True when every derivative vanishes identically.
    bool isConstant() const {
        return std::visit(
            [](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, coeff::Constant>) return true;
                else if constexpr (std::is_same_v<T, coeff::Polynomial>) {
                    for (std::size_t i = 1; i < v.coeffs.size(); ++i)
                        if (v.coeffs[i] != 0.0) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, coeff::Exponential>) return v.gamma == 0.0 || v.a == 0.0;
                else if constexpr (std::is_same_v<T, coeff::Sinusoidal>) return v.b == 0.0 || v.nu == 0.0;
                else if constexpr (std::is_same_v<T, coeff::Power>) return v.b == 0.0 || v.n == 0.0;
                else return false;
            },
            rep_);
    }

    double eval(double t) const { return evalOrder(t, 0); }
    double deriv1(double t) const { return evalOrder(t, 1); }
    double deriv2(double t) const { return evalOrder(t, 2); }

    double operator()(double t) const { return eval(t); }

private:
    explicit Coefficient(Variant v) : rep_(std::move(v)) {}

    double evalOrder(double t, int order) const {
        if (!domain_.contains(t))
            throw DomainError(kind() + " coefficient evaluated at t=" + std::to_string(t) +
                              " outside its domain");
        return std::visit([&](const auto& v) { return evalVariant(v, t, order); }, rep_);
    }

    static double evalVariant(const coeff::Constant& c, double, int order) {
        return order == 0 ? c.value : 0.0;
    }

    static double evalVariant(const coeff::Polynomial& p, double t, int order) {
        // Horner on the differentiated coefficient list.
        double acc = 0.0;
        const auto n = p.coeffs.size();
        for (std::size_t k = n; k-- > static_cast<std::size_t>(order);) {
            double c = p.coeffs[k];
            for (int d = 0; d < order; ++d) c *= static_cast<double>(k - d);
            acc = acc * t + c;
        }
        return acc;
    }

    static double evalVariant(const coeff::Exponential& e, double t, int order) {
        return e.a * std::pow(e.gamma, order) * std::exp(e.gamma * t);
    }

    static double evalVariant(const coeff::Sinusoidal& s, double t, int order) {
        const double arg = s.nu * t + s.theta;
        switch (order) {
            case 0: return s.a + s.b * std::cos(arg);
            case 1: return -s.b * s.nu * std::sin(arg);
            default: return -s.b * s.nu * s.nu * std::cos(arg);
        }
    }

    static double evalVariant(const coeff::Power& p, double t, int order) {
        const double base = p.a + p.b * t;
        const bool integral = std::floor(p.n) == p.n;
        if (!integral && base <= 0.0)
            throw DomainError("power coefficient: a + b t must be positive for non-integer exponent");
        if (integral && p.n - order < 0.0 && base == 0.0)
            throw DomainError("power coefficient: singular at a + b t = 0");
        switch (order) {
            case 0: return std::pow(base, p.n);
            case 1: return p.n * p.b * std::pow(base, p.n - 1.0);
            default: return p.n * (p.n - 1.0) * p.b * p.b * std::pow(base, p.n - 2.0);
        }
    }

    static double evalVariant(const coeff::Spline& s, double t, int order) {
        const std::size_t n = s.t.size();
        std::size_t i = 0;
        if (t >= s.t[n - 1]) {
            i = n - 2;
        } else {
            std::size_t lo = 0, hi = n - 1;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (s.t[mid] <= t) lo = mid; else hi = mid;
            }
            i = lo;
        }
        const double h = s.t[i + 1] - s.t[i];
        const double A = (s.t[i + 1] - t) / h;
        const double B = (t - s.t[i]) / h;
        switch (order) {
            case 0:
                return A * s.y[i] + B * s.y[i + 1] +
                       ((A * A * A - A) * s.m[i] + (B * B * B - B) * s.m[i + 1]) * h * h / 6.0;
            case 1:
                return (s.y[i + 1] - s.y[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * s.m[i] +
                       (3.0 * B * B - 1.0) / 6.0 * h * s.m[i + 1];
            default:
                return A * s.m[i] + B * s.m[i + 1];
        }
    }

    static std::vector<double> secondDerivatives(const coeff::Spline& s) {
        const std::size_t n = s.t.size();
        std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = s.t[i] - s.t[i - 1];
            const double h1 = s.t[i + 1] - s.t[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((s.y[i + 1] - s.y[i]) / h1 - (s.y[i] - s.y[i - 1]) / h0);
        }
        if (s.ends == coeff::SplineEnds::clamped) {
            const double h0 = s.t[1] - s.t[0];
            diag[0] = 2.0 * h0;
            sup[0] = h0;
            rhs[0] = 6.0 * ((s.y[1] - s.y[0]) / h0 - s.slope_lo);
            const double hn = s.t[n - 1] - s.t[n - 2];
            sub[n - 1] = hn;
            diag[n - 1] = 2.0 * hn;
            rhs[n - 1] = 6.0 * (s.slope_hi - (s.y[n - 1] - s.y[n - 2]) / hn);
        }
        // Thomas algorithm
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        std::vector<double> m(n);
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        return m;
    }

    Variant rep_;
    Interval domain_{};
};

}  // namespace tdho
