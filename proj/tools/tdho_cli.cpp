// tdho: command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 numerical failure
// (caustic, solver), 3 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "tdho/tdho.hpp"

namespace {

using namespace tdho;

constexpr int kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3;

/// Output sink: a file when a path is given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Variant parseVariant(const std::string& v) {
    if (v == "corrected") return Variant::corrected;
    if (v == "lw" || v == "lw-variant") return Variant::lw;
    throw SchemaError({"--variant must be corrected or lw"});
}

struct Common {
    std::string scenario;
    std::string out;
};

int runDecouple(const Common& o, int samples) {
    const auto sc = loadScenario(o.scenario);
    const auto d = decouple(sc);
    std::cout << "alpha," << csv::number(d.alpha()) << '\n'
              << "gamma_max," << csv::number(d.gammaMax()) << '\n'
              << "worst_t," << csv::number(d.worstTime()) << '\n'
              << "admissible," << (d.admissible() ? 1 : 0) << '\n';
    Output out(o.out);
    auto& os = o.out.empty() ? (std::cout << '\n') : out.stream();
    csv::Writer w(os);
    w.header({"t", "OmegaSq1", "OmegaSq2", "F1", "F2", "Gamma"});
    const auto& dom = sc.system.domain();
    for (int i = 0; i < samples; ++i) {
        const double t = dom.lo + dom.span() * i / std::max(1, samples - 1);
        const auto q = d.at(t);
        w.row(t, q.OmegaSq1, q.OmegaSq2, q.F1, q.F2, q.Gamma);
    }
    return kOk;
}

std::vector<std::array<double, 4>> readPoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read points file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<std::array<double, 4>> pts;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
            for (const auto& p : j) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                                   p.at(2).get<double>(), p.at(3).get<double>()});
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError({"points file: " + std::string(e.what())});
        }
        return pts;
    }
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line.find_first_of("abcdfghijklmnopqrstuvwxyz") != std::string::npos) continue;  // header
        std::array<double, 4> p{};
        std::istringstream ls(line);
        std::string cell;
        int n = 0;
        while (std::getline(ls, cell, ',') && n < 4) {
            try {
                p[n++] = std::stod(cell);
            } catch (const std::exception&) {
                throw SchemaError({"points file line " + std::to_string(lineno) + ": not a number"});
            }
        }
        if (n != 4) throw SchemaError({"points file line " + std::to_string(lineno) + ": expected 4 columns"});
        pts.push_back(p);
    }
    return pts;
}

int runKernel(const Common& o, const std::string& points, int random, std::uint64_t seed, double box,
              const std::string& variant, const std::string& dump_aux, int samples) {
    const auto sc = loadScenario(o.scenario);
    const auto d = decouple(sc);
    const Variant v = parseVariant(variant);
    const Kernel k = buildKernel(d, sc.t_prime, sc.t_double_prime, v, sc.kernel);

    std::vector<std::array<double, 4>> pts;
    if (!points.empty()) pts = readPoints(points);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-box, box);
    for (int i = 0; i < random; ++i) pts.push_back({u(rng), u(rng), u(rng), u(rng)});
    if (points.empty() && random == 0) pts.push_back({0.0, 0.0, 0.0, 0.0});

    Output out(o.out);
    csv::Writer w(out.stream());
    w.header({"x1q", "x2q", "x1p", "x2p", "ReK", "ImK"});
    for (const auto& p : pts) {
        const cplx K = k.evaluate(p[0], p[1], p[2], p[3]);
        w.row(p[0], p[1], p[2], p[3], K.real(), K.imag());
    }

    if (!dump_aux.empty()) {
        Output aux(dump_aux);
        csv::Writer a(aux.stream());
        a.header({"t", "rho1", "drho1", "phi1", "rho2", "drho2", "phi2"});
        const auto& s1 = k.auxiliary(1);
        const auto& s2 = k.auxiliary(2);
        for (int i = 0; i < samples; ++i) {
            const double t = sc.t_prime + (sc.t_double_prime - sc.t_prime) * i / std::max(1, samples - 1);
            a.row(t, s1.rho(t), s1.drho(t), s1.phi(t), s2.rho(t), s2.drho(t), s2.phi(t));
        }
    }
    return kOk;
}

int runEvolve(const Common& o, int frames, const std::string& variant) {
    const auto sc = loadScenario(o.scenario);
    const auto d = decouple(sc);
    const Variant v = parseVariant(variant);
    const double hbar = sc.system.hbar();
    GaussianState2D g = sc.initial.state(hbar);

    Output out(o.out);
    csv::Writer w(out.stream());
    w.header({"t", "x1", "x2", "p1", "p2", "cov11", "cov12", "cov22", "norm", "phase"});
    auto emit = [&](double t) {
        const Vec2 mu = g.meanPosition(), p = g.meanMomentum(hbar);
        const Mat2 cov = g.positionCovariance();
        w.row(t, mu(0), mu(1), p(0), p(1), cov(0, 0), cov(0, 1), cov(1, 1), g.normSquared(), g.phaseAtMean());
    };
    emit(sc.t_prime);
    // frame-to-frame propagation keeps every kernel window short
    for (int f = 1; f <= frames; ++f) {
        const double ta = sc.t_prime + (sc.t_double_prime - sc.t_prime) * (f - 1) / frames;
        const double tb = sc.t_prime + (sc.t_double_prime - sc.t_prime) * f / frames;
        g = propagateGaussian(buildKernel(d, ta, tb, v, sc.kernel), g);
        emit(tb);
    }
    return kOk;
}

int runOracle(const Common& o, int points, int steps, int frames, const std::string& dump) {
    const auto sc = loadScenario(o.scenario);
    const double hbar = sc.system.hbar();
    const auto g0 = sc.initial.state(hbar);
    std::vector<GaussianState2D> states{g0};
    try {
        const auto d = decouple(sc);
        if (d.admissible())
            states.push_back(propagateGaussian(
                buildKernel(d, sc.t_prime, sc.t_double_prime, Variant::corrected, sc.kernel), g0));
    } catch (const NumericalError&) {
        // grid suggestion falls back to the initial state alone
    }
    const auto grid = gridFor(sc, points > 0 ? points : sc.grid.points, states);
    const int n = steps > 0 ? steps : sc.steps;
    const int every = std::max(1, n / std::max(1, frames));

    Output out(o.out);
    csv::Writer w(out.stream());
    w.header({"t", "norm", "x1", "x2", "x1sq", "x2sq", "energy"});
    auto write = [&](const oracle::GridState& st) {
        const auto ob = oracle::observables(sc.system, st);
        w.row(ob.t, ob.norm, ob.x1, ob.x2, ob.x1sq, ob.x2sq, ob.energy);
    };
    struct Observer {
        int every, n;
        decltype(write)& fn;
        bool wants(int k) const { return k % every == 0 || k == n; }
        void operator()(int, const oracle::GridState& st) const { fn(st); }
    };
    const auto psi0 = oracle::sample(grid, g0, sc.t_prime);
    write(psi0);
    const auto psi = oracle::evolve(sc.system, psi0, sc.t_prime, sc.t_double_prime, n, Observer{every, n, write});
    const double edge = oracle::boundaryDensity(psi);
    if (edge > 1e-12)
        std::cerr << "warning: boundary density " << edge << " exceeds 1e-12; enlarge the grid extent\n";
    if (!dump.empty()) oracle::writeDensity(psi, dump);
    return kOk;
}

int runCompare(const Common& o, int points, int steps, std::uint64_t seed, bool timings) {
    const auto sc = loadScenario(o.scenario);
    const auto d = decouple(sc);
    const double hbar = sc.system.hbar();
    const auto g0 = sc.initial.state(hbar);
    std::vector<GaussianState2D> states{g0};
    for (auto v : {Variant::corrected, Variant::lw})
        states.push_back(propagateGaussian(buildKernel(d, sc.t_prime, sc.t_double_prime, v, sc.kernel), g0));
    const auto grid = gridFor(sc, points > 0 ? points : sc.grid.points, states);
    ComparisonOptions copt;
    copt.seed = seed;
    const auto res = runComparison(sc.name, d, sc.t_prime, sc.t_double_prime, g0, grid,
                                   steps > 0 ? steps : sc.steps, sc.kernel, copt);

    Output out(o.out);
    csv::Writer w(out.stream());
    std::vector<std::string_view> cols{"scenario", "variant", "fidelity", "infidelity", "max_residual",
                                       "gamma_max", "alpha", "maslov1", "maslov2", "caustic_crossed",
                                       "norm", "grid", "extent", "steps"};
    if (timings) {
        cols.push_back("kernel_seconds");
        cols.push_back("oracle_seconds");
    }
    w.header(cols);
    for (const auto* r : {&res.corrected, &res.lw}) {
        std::ostringstream line;
        csv::Writer lw(line);
        lw.row(r->scenario, std::string(variantName(r->variant)), r->fidelity, 1.0 - r->fidelity, r->max_residual,
               r->gamma_max, r->alpha, r->maslov[0], r->maslov[1], r->caustic_crossed, r->norm, r->grid_points,
               r->grid_extent, r->steps);
        std::string s = line.str();
        if (timings) {
            s.pop_back();
            s += "," + csv::number(r->kernel_seconds) + "," + csv::number(r->oracle_seconds) + "\n";
        }
        out.stream() << s;
    }
    const bool ok = passes(res.corrected);
    std::cerr << "corrected: fidelity " << res.corrected.fidelity << ", residual " << res.corrected.max_residual
              << (ok ? " (pass)" : " (FAIL)") << "\nlw-variant: fidelity " << res.lw.fidelity << ", residual "
              << res.lw.max_residual << '\n';
    return ok ? kOk : kValidation;
}

int runResidual(const Common& o, int count, std::uint64_t seed, const std::string& variant) {
    const auto sc = loadScenario(o.scenario);
    const auto d = decouple(sc);
    ComparisonOptions copt;
    copt.seed = seed;
    copt.residual_times = std::max(1, count / 5);
    copt.residual_positions = std::max(1, count / copt.residual_times);
    const auto r = residualProbe(d, sc.t_prime, sc.t_double_prime, parseVariant(variant), sc.kernel, copt);
    Output out(o.out);
    csv::Writer w(out.stream());
    w.header({"t", "x1q", "x2q", "x1p", "x2p", "absolute", "relative"});
    for (const auto& s : r) w.row(s.t, s.xpp(0), s.xpp(1), s.xp(0), s.xp(1), s.absolute, s.relative);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact propagator of two coupled, driven oscillators with time-dependent masses"};
    app.require_subcommand(1);

    Common common;
    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--scenario", common.scenario, "scenario JSON file")->required();
        sub->add_option("--out", common.out, "output CSV file (default: stdout)");
    };

    int samples = 201;
    auto* dec = app.add_subcommand("decouple", "solve the decoupling angle; CSV t,OmegaSq1,OmegaSq2,F1,F2,Gamma");
    addCommon(dec);
    dec->add_option("--samples", samples, "number of CSV rows over [t_min, t_max]");

    std::string points, variant = "corrected", dump_aux;
    int random = 0;
    std::uint64_t seed = 12345;
    double box = 2.0;
    auto* ker = app.add_subcommand("kernel", "evaluate K; CSV x1q,x2q,x1p,x2p,ReK,ImK");
    addCommon(ker);
    ker->add_option("--points", points, "CSV (x1q,x2q,x1p,x2p) or JSON array of 4-tuples");
    ker->add_option("--random", random, "number of random position tuples to add");
    ker->add_option("--seed", seed, "seed for --random");
    ker->add_option("--box", box, "half-width of the box for --random");
    ker->add_option("--variant", variant, "corrected | lw");
    ker->add_option("--dump-aux", dump_aux, "write CSV t,rho1,drho1,phi1,rho2,drho2,phi2");
    ker->add_option("--samples", samples, "rows in the --dump-aux table");

    int frames = 50;
    auto* evo = app.add_subcommand(
        "evolve", "Gaussian-state evolution; CSV t,x1,x2,p1,p2,cov11,cov12,cov22,norm,phase");
    addCommon(evo);
    evo->add_option("--frames", frames, "number of output frames");
    evo->add_option("--variant", variant, "corrected | lw");

    int grid = 0, steps = 0;
    std::string dump;
    auto* orc = app.add_subcommand("oracle", "split-operator reference; CSV t,norm,x1,x2,x1sq,x2sq,energy");
    addCommon(orc);
    orc->add_option("--grid", grid, "points per axis (power of two)");
    orc->add_option("--steps", steps, "number of time steps");
    orc->add_option("--frames", frames, "number of output rows (approximate)");
    orc->add_option("--dump-density", dump, "binary dump of the final |psi|^2");

    bool timings = false;
    auto* cmp = app.add_subcommand(
        "compare", "corrected and lw-variant kernels against the oracle; exit 0 iff the corrected variant passes");
    addCommon(cmp);
    cmp->add_option("--grid", grid, "points per axis (power of two)");
    cmp->add_option("--steps", steps, "number of oracle time steps");
    cmp->add_option("--seed", seed, "seed for residual probe positions");
    cmp->add_flag("--timings", timings, "append runtime columns (not deterministic)");

    int count = 20;
    auto* res = app.add_subcommand("residual", "Schroedinger residual of the kernel; CSV t,x1q,x2q,x1p,x2p,absolute,relative");
    addCommon(res);
    res->add_option("--points", count, "number of probe points");
    res->add_option("--seed", seed, "seed for probe positions");
    res->add_option("--variant", variant, "corrected | lw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*dec) return runDecouple(common, samples);
        if (*ker) return runKernel(common, points, random, seed, box, variant, dump_aux, samples);
        if (*evo) return runEvolve(common, frames, variant);
        if (*orc) return runOracle(common, grid, steps, frames, dump);
        if (*cmp) return runCompare(common, grid, steps, seed, timings);
        if (*res) return runResidual(common, count, seed, variant);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const SchemaError& e) {
        std::cerr << "invalid scenario:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    }
    return kValidation;
}
