#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace tdho::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order) : nodes(order), weights(order) {
        const int n = order;
        // P_n(x) and P_n'(x) by the three-term recurrence
        auto legendre = [n](double x) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
        };
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                const auto [p, dp] = legendre(x);
                const double dx = p / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            const double dp = legendre(x).second;
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    int order() const noexcept { return static_cast<int>(nodes.size()); }

    /// Single-panel rule on [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
        return s * half;
    }
};

/// Composite Gauss-Legendre rule: `panels` equal panels of the given order.
class Composite {
public:
    Composite(int panels, int order) : panels_(panels), rule_(order) {}

    int panels() const noexcept { return panels_; }
    const GaussLegendre& rule() const noexcept { return rule_; }

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double h = (b - a) / panels_;
        double s = 0.0;
        for (int p = 0; p < panels_; ++p) s += rule_.integrate(f, a + p * h, a + (p + 1) * h);
        return s;
    }

    /// All (node, weight) pairs of the composite rule on [a, b].
    std::vector<std::pair<double, double>> points(double a, double b) const {
        std::vector<std::pair<double, double>> out;
        out.reserve(static_cast<std::size_t>(panels_) * rule_.nodes.size());
        const double h = (b - a) / panels_;
        for (int p = 0; p < panels_; ++p) {
            const double mid = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
                out.emplace_back(mid + 0.5 * h * rule_.nodes[i], 0.5 * h * rule_.weights[i]);
        }
        return out;
    }

    /// Iterated rule for int_a^b dt g(t) int_a^t dtau h(tau). The inner
    /// integral is carried as a cumulative antiderivative across panels; within
    /// a panel the partial piece [panel start, t] gets its own mapped rule.
    template <class G, class H>
    double integrateTriangle(G&& outer, H&& inner, double a, double b) const {
        const double h = (b - a) / panels_;
        double cumulative = 0.0;
        double total = 0.0;
        for (int p = 0; p < panels_; ++p) {
            const double lo = a + p * h;
            const double mid = lo + 0.5 * h;
            for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
                const double t = mid + 0.5 * h * rule_.nodes[i];
                const double partial = rule_.integrate(inner, lo, t);
                total += 0.5 * h * rule_.weights[i] * outer(t) * (cumulative + partial);
            }
            cumulative += rule_.integrate(inner, lo, lo + h);
        }
        return total;
    }

private:
    int panels_;
    GaussLegendre rule_;
};

}  // namespace tdho::quad
