#pragma once

// Scenario documents (JSON). Parsing is strict: unknown fields are rejected
// and every violation found is reported together.

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tdho/coefficient.hpp"
#include "tdho/decoupler.hpp"
#include "tdho/ermakov.hpp"
#include "tdho/errors.hpp"
#include "tdho/gaussian.hpp"
#include "tdho/oracle.hpp"
#include "tdho/propagator.hpp"
#include "tdho/system.hpp"

namespace tdho {

struct InitialPacket {
    Vec2 center = Vec2::Zero();
    Vec2 momentum = Vec2::Zero();
    Vec2 sigma = Vec2::Ones();

    GaussianState2D state(double hbar) const {
        return GaussianState2D::wavepacket(center, momentum, sigma, hbar);
    }
};

struct GridConfig {
    int points = 256;
    std::optional<double> extent;  // auto-suggested when absent
    std::optional<Vec2> center;
};

struct Scenario {
    std::string name;
    std::string description;
    SystemSpec system;
    double t_prime = 0.0;
    double t_double_prime = 1.0;
    std::optional<double> alpha;
    KernelOptions kernel;
    GridConfig grid;
    int steps = 4096;
    InitialPacket initial;
};

namespace detail {

using nlohmann::json;

class Collector {
public:
    void add(std::string msg) { errors_.push_back(std::move(msg)); }
    bool empty() const { return errors_.empty(); }
    std::vector<std::string> take() { return std::move(errors_); }

    void rejectUnknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || it.key() == a;
            if (!ok) add(where + ": unknown field \"" + it.key() + "\"");
        }
    }

    std::optional<double> number(const json& obj, const char* key, const std::string& where, bool required) {
        if (!obj.contains(key)) {
            if (required) add(where + ": missing required field \"" + key + "\"");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            add(where + "." + key + ": expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            add(where + "." + key + ": must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::vector<double>> numbers(const json& obj, const char* key, const std::string& where,
                                               bool required, std::size_t exact = 0) {
        if (!obj.contains(key)) {
            if (required) add(where + ": missing required field \"" + key + "\"");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_array()) {
            add(where + "." + key + ": expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                add(where + "." + key + ": expected an array of numbers");
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        if (exact && out.size() != exact) {
            add(where + "." + key + ": expected exactly " + std::to_string(exact) + " numbers");
            return std::nullopt;
        }
        return out;
    }

private:
    std::vector<std::string> errors_;
};

inline std::optional<Coefficient> parseCoefficient(const json& j, const std::string& where, Collector& err) {
    if (j.is_number()) return Coefficient::constant(j.get<double>());
    if (!j.is_object()) {
        err.add(where + ": expected a number or a coefficient object");
        return std::nullopt;
    }
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        err.add(where + ": missing string field \"kind\"");
        return std::nullopt;
    }
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "constant") {
            err.rejectUnknown(j, where, {"kind", "value"});
            auto v = err.number(j, "value", where, true);
            if (v) return Coefficient::constant(*v);
        } else if (kind == "polynomial") {
            err.rejectUnknown(j, where, {"kind", "coeffs"});
            auto c = err.numbers(j, "coeffs", where, true);
            if (c) return Coefficient::polynomial(*c);
        } else if (kind == "exponential") {
            err.rejectUnknown(j, where, {"kind", "a", "gamma"});
            auto a = err.number(j, "a", where, true);
            auto g = err.number(j, "gamma", where, true);
            if (a && g) return Coefficient::exponential(*a, *g);
        } else if (kind == "sinusoidal") {
            err.rejectUnknown(j, where, {"kind", "a", "b", "nu", "theta"});
            auto a = err.number(j, "a", where, true);
            auto b = err.number(j, "b", where, true);
            auto nu = err.number(j, "nu", where, true);
            auto th = err.number(j, "theta", where, false);
            if (a && b && nu) return Coefficient::sinusoidal(*a, *b, *nu, th.value_or(0.0));
        } else if (kind == "power") {
            err.rejectUnknown(j, where, {"kind", "a", "b", "n"});
            auto a = err.number(j, "a", where, true);
            auto b = err.number(j, "b", where, true);
            auto n = err.number(j, "n", where, true);
            if (a && b && n) return Coefficient::power(*a, *b, *n);
        } else if (kind == "spline") {
            err.rejectUnknown(j, where, {"kind", "t", "y", "ends", "slope_lo", "slope_hi"});
            auto t = err.numbers(j, "t", where, true);
            auto y = err.numbers(j, "y", where, true);
            auto ends = coeff::SplineEnds::natural;
            if (j.contains("ends")) {
                const auto& e = j.at("ends");
                if (e == "clamped") ends = coeff::SplineEnds::clamped;
                else if (e != "natural") err.add(where + ".ends: expected \"natural\" or \"clamped\"");
            }
            const bool clamped = ends == coeff::SplineEnds::clamped;
            auto lo = err.number(j, "slope_lo", where, clamped);
            auto hi = err.number(j, "slope_hi", where, clamped);
            if (t && y) return Coefficient::spline(*t, *y, ends, lo.value_or(0.0), hi.value_or(0.0));
        } else {
            err.add(where + ": unknown coefficient kind \"" + kind + "\"");
        }
    } catch (const DomainError& e) {
        err.add(where + ": " + e.what());
    }
    return std::nullopt;
}

}  // namespace detail

/// Parses and validates a scenario document. Throws SchemaError listing every
/// violation found.
inline Scenario parseScenario(const std::string& text) {
    using nlohmann::json;
    detail::Collector err;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError({std::string("invalid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw SchemaError({"scenario: top level must be an object"});

    err.rejectUnknown(doc, "scenario",
                      {"name", "description", "m1", "m2", "omega1", "omega2", "f1", "f2", "lambda", "hbar",
                       "t_min", "t_max", "window", "alpha", "solver", "quadrature", "grid", "steps", "initial",
                       "ermakov_initial"});

    SystemCoefficients coeffs;
    auto field = [&](const char* key, Coefficient& slot, bool required) {
        if (!doc.contains(key)) {
            if (required) err.add(std::string("scenario: missing required field \"") + key + "\"");
            return;
        }
        if (auto c = detail::parseCoefficient(doc.at(key), key, err)) slot = *c;
    };
    field("m1", coeffs.m1, true);
    field("m2", coeffs.m2, true);
    field("omega1", coeffs.omega1, true);
    field("omega2", coeffs.omega2, true);
    field("f1", coeffs.f1, false);
    field("f2", coeffs.f2, false);
    field("lambda", coeffs.lambda, false);

    const double hbar = err.number(doc, "hbar", "scenario", false).value_or(1.0);
    const double tmin = err.number(doc, "t_min", "scenario", false).value_or(0.0);
    const auto tmax = err.number(doc, "t_max", "scenario", true);

    std::string name = doc.value("name", std::string("unnamed"));
    std::string description = doc.contains("description") && doc.at("description").is_string()
                                  ? doc.at("description").get<std::string>()
                                  : std::string();

    double tp = tmin, tpp = tmax.value_or(tmin + 1.0);
    if (auto w = err.numbers(doc, "window", "scenario", false, 2)) {
        tp = (*w)[0];
        tpp = (*w)[1];
        if (!(tpp > tp)) err.add("scenario.window: need t'' > t'");
        if (tmax && (tp < tmin || tpp > *tmax)) err.add("scenario.window: outside [t_min, t_max]");
    }

    std::optional<double> alpha = err.number(doc, "alpha", "scenario", false);

    KernelOptions kopt;
    if (doc.contains("solver")) {
        const auto& s = doc.at("solver");
        if (!s.is_object()) err.add("scenario.solver: expected an object");
        else {
            err.rejectUnknown(s, "solver", {"rtol", "atol", "residual_tol", "caustic_tol"});
            kopt.ermakov.rtol = err.number(s, "rtol", "solver", false).value_or(kopt.ermakov.rtol);
            kopt.ermakov.atol = err.number(s, "atol", "solver", false).value_or(kopt.ermakov.atol);
            kopt.ermakov.residual_tol =
                err.number(s, "residual_tol", "solver", false).value_or(kopt.ermakov.residual_tol);
            kopt.caustic_tol = err.number(s, "caustic_tol", "solver", false).value_or(kopt.caustic_tol);
        }
    }
    if (doc.contains("ermakov_initial")) {
        const auto& s = doc.at("ermakov_initial");
        if (!s.is_object()) err.add("scenario.ermakov_initial: expected an object");
        else {
            err.rejectUnknown(s, "ermakov_initial", {"rho", "drho"});
            kopt.ic.rho = err.number(s, "rho", "ermakov_initial", false).value_or(1.0);
            kopt.ic.drho = err.number(s, "drho", "ermakov_initial", false).value_or(0.0);
            if (!(kopt.ic.rho > 0.0)) err.add("ermakov_initial.rho: must be positive");
        }
    }
    if (doc.contains("quadrature")) {
        const auto& q = doc.at("quadrature");
        if (!q.is_object()) err.add("scenario.quadrature: expected an object");
        else {
            err.rejectUnknown(q, "quadrature", {"panels", "order"});
            kopt.panels = static_cast<int>(err.number(q, "panels", "quadrature", false).value_or(kopt.panels));
            kopt.order = static_cast<int>(err.number(q, "order", "quadrature", false).value_or(kopt.order));
            if (kopt.panels < 1 || kopt.order < 1) err.add("quadrature: panels and order must be >= 1");
        }
    }

    GridConfig grid;
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (!g.is_object()) err.add("scenario.grid: expected an object");
        else {
            err.rejectUnknown(g, "grid", {"points", "extent", "center"});
            grid.points = static_cast<int>(err.number(g, "points", "grid", false).value_or(grid.points));
            if (grid.points < 32 || (grid.points & (grid.points - 1)) != 0)
                err.add("grid.points: must be a power of two >= 32");
            grid.extent = err.number(g, "extent", "grid", false);
            if (auto c = err.numbers(g, "center", "grid", false, 2)) grid.center = Vec2((*c)[0], (*c)[1]);
        }
    }
    const int steps = static_cast<int>(err.number(doc, "steps", "scenario", false).value_or(4096));
    if (steps < 1) err.add("scenario.steps: must be >= 1");

    InitialPacket init;
    if (doc.contains("initial")) {
        const auto& g = doc.at("initial");
        if (!g.is_object()) err.add("scenario.initial: expected an object");
        else {
            err.rejectUnknown(g, "initial", {"center", "momentum", "sigma"});
            if (auto v = err.numbers(g, "center", "initial", false, 2)) init.center = Vec2((*v)[0], (*v)[1]);
            if (auto v = err.numbers(g, "momentum", "initial", false, 2)) init.momentum = Vec2((*v)[0], (*v)[1]);
            if (auto v = err.numbers(g, "sigma", "initial", false, 2)) {
                init.sigma = Vec2((*v)[0], (*v)[1]);
                if (!(init.sigma.minCoeff() > 0.0)) err.add("initial.sigma: widths must be positive");
            }
        }
    }

    if (!(hbar > 0.0)) err.add("scenario.hbar: must be positive");
    if (tmax && !(*tmax > tmin)) err.add("scenario: t_max must exceed t_min");

    // coefficient domains must cover the system domain
    if (tmax) {
        const std::pair<const char*, const Coefficient*> all[] = {
            {"m1", &coeffs.m1}, {"m2", &coeffs.m2}, {"omega1", &coeffs.omega1}, {"omega2", &coeffs.omega2},
            {"f1", &coeffs.f1}, {"f2", &coeffs.f2}, {"lambda", &coeffs.lambda}};
        for (const auto& [key, c] : all) {
            if (!c->domain().contains(tmin) || !c->domain().contains(*tmax))
                err.add(std::string(key) + ": coefficient domain does not cover [t_min, t_max]");
        }
    }

    if (!err.empty() || !tmax) throw SchemaError(err.take());

    std::optional<SystemSpec> sys;
    try {
        sys.emplace(coeffs, hbar, Interval{tmin, *tmax});
    } catch (const DomainError& e) {
        err.add(e.what());
    }
    if (!err.empty()) throw SchemaError(err.take());

    return Scenario{std::move(name), std::move(description), *sys, tp, tpp, alpha, kopt, grid, steps, init};
}

inline Scenario loadScenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parseScenario(ss.str());
}

/// Decoupling for a scenario: the explicit angle when given, else solved.
inline DecoupledSystem decouple(const Scenario& sc) {
    return sc.alpha ? decoupleWithAngle(sc.system, *sc.alpha) : solveAngle(sc.system);
}

/// Oracle grid for a scenario: the configured extent when given, else one
/// suggested from the states the grid has to hold.
inline oracle::Grid2D gridFor(const Scenario& sc, int points, const std::vector<GaussianState2D>& states) {
    if (sc.grid.extent) {
        const Vec2 c = sc.grid.center.value_or(Vec2::Zero());
        return oracle::Grid2D({points, points}, {*sc.grid.extent, *sc.grid.extent}, {c(0), c(1)});
    }
    return oracle::suggestGrid(states, points);
}

}  // namespace tdho
