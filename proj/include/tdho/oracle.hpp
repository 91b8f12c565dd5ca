#pragma once

// Split-operator (Strang) reference solver for the lab-frame Schroedinger
// equation on a periodic 2D grid. Coefficients are sampled at the midpoint of
// every step; the kinetic factor is applied exactly in momentum space.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/gaussian.hpp"
#include "tdho/system.hpp"

namespace tdho::oracle {

struct Grid2D {
    std::array<int, 2> points{128, 128};
    std::array<double, 2> extent{20.0, 20.0};
    std::array<double, 2> center{0.0, 0.0};

    Grid2D() = default;
    Grid2D(int n, double extent_all) : points{n, n}, extent{extent_all, extent_all} { validate(); }
    Grid2D(std::array<int, 2> n, std::array<double, 2> ext, std::array<double, 2> c = {0.0, 0.0})
        : points(n), extent(ext), center(c) {
        validate();
    }

    void validate() const {
        for (int a = 0; a < 2; ++a) {
            const int n = points[a];
            if (n < 32 || (n & (n - 1)) != 0)
                throw DomainError("grid: points per axis must be a power of two >= 32");
            if (!(extent[a] > 0.0)) throw DomainError("grid: extent must be positive");
        }
    }

    std::size_t size() const { return static_cast<std::size_t>(points[0]) * points[1]; }
    double spacing(int axis) const { return extent[axis] / points[axis]; }
    double cellArea() const { return spacing(0) * spacing(1); }
    double coord(int axis, int i) const { return center[axis] - 0.5 * extent[axis] + i * spacing(axis); }
    double wavenumber(int axis, int i) const {
        const int n = points[axis];
        return 2.0 * std::numbers::pi / extent[axis] * (i < n / 2 ? i : i - n);
    }

    bool operator==(const Grid2D& o) const {
        return points == o.points && extent == o.extent && center == o.center;
    }
};

/// Row-major samples psi(x1_i, x2_k) at index i * n2 + k.
struct GridState {
    Grid2D grid;
    std::vector<cplx> psi;
    double t = 0.0;

    double normSquared() const {
        double s = 0.0;
        for (const auto& z : psi) s += std::norm(z);
        return s * grid.cellArea();
    }
};

inline GridState sample(const Grid2D& grid, const GaussianState2D& g, double t) {
    GridState st{grid, std::vector<cplx>(grid.size()), t};
    for (int i = 0; i < grid.points[0]; ++i)
        for (int k = 0; k < grid.points[1]; ++k)
            st.psi[static_cast<std::size_t>(i) * grid.points[1] + k] =
                g.value(Vec2(grid.coord(0, i), grid.coord(1, k)));
    return st;
}

/// |<a|b>|^2 / (|a|^2 |b|^2) by grid quadrature.
inline double fidelity(const GridState& a, const GridState& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("fidelity: states live on different grids");
    cplx o = 0.0;
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.psi.size(); ++i) {
        o += std::conj(a.psi[i]) * b.psi[i];
        na += std::norm(a.psi[i]);
        nb += std::norm(b.psi[i]);
    }
    return std::min(1.0, std::norm(o) / (na * nb));
}

/// Largest |psi|^2 on the grid boundary relative to the peak.
inline double boundaryDensity(const GridState& st) {
    const int n1 = st.grid.points[0], n2 = st.grid.points[1];
    double peak = 0.0, edge = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n2; ++k) {
            const double p = std::norm(st.psi[static_cast<std::size_t>(i) * n2 + k]);
            peak = std::max(peak, p);
            if (i == 0 || k == 0 || i == n1 - 1 || k == n2 - 1) edge = std::max(edge, p);
        }
    return peak > 0.0 ? edge / peak : 0.0;
}

/// Extent covering `sigmas` widths of the widest state, centred on the mean
/// positions. The width is that of psi itself, sqrt(2) times the position
/// standard deviation.
inline Grid2D suggestGrid(const std::vector<GaussianState2D>& states, int n, double sigmas = 12.0) {
    std::array<double, 2> lo{1e300, 1e300}, hi{-1e300, -1e300};
    double widest = 0.0;
    for (const auto& g : states) {
        const Vec2 mu = g.meanPosition();
        const Mat2 cov = g.positionCovariance();
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], mu(a));
            hi[a] = std::max(hi[a], mu(a));
            widest = std::max(widest, std::sqrt(2.0 * cov(a, a)));
        }
    }
    std::array<double, 2> ext{}, c{};
    for (int a = 0; a < 2; ++a) {
        ext[a] = hi[a] - lo[a] + sigmas * widest;
        c[a] = 0.5 * (lo[a] + hi[a]);
    }
    const double L = std::max(ext[0], ext[1]);
    return Grid2D({n, n}, {L, L}, c);
}

namespace detail {

class Fft2D {
public:
    explicit Fft2D(const Grid2D& g) : n1_(g.points[0]), n2_(g.points[1]), buf_(g.size()) {
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_2d(n1_, n2_, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_2d(n1_, n2_, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~Fft2D() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void forward(std::vector<cplx>& v) const { run(fwd_, v); }
    /// Unnormalized inverse.
    void backward(std::vector<cplx>& v) const { run(bwd_, v); }

private:
    static void run(fftw_plan p, std::vector<cplx>& v) {
        auto* d = reinterpret_cast<fftw_complex*>(v.data());
        fftw_execute_dft(p, d, d);
    }

    int n1_, n2_;
    std::vector<cplx> buf_;
    fftw_plan fwd_{}, bwd_{};
};

struct Coeffs {
    double m1, m2, k1, k2, g1, g2, lambda;  // V = k1 x1^2/2 + k2 x2^2/2 - g1 x1 - g2 x2 + lambda x1 x2

    static Coeffs at(const SystemSpec& s, double t) {
        const auto& c = s.coefficients();
        Coeffs r{};
        r.m1 = c.m1.eval(t);
        r.m2 = c.m2.eval(t);
        const double w1 = c.omega1.eval(t), w2 = c.omega2.eval(t);
        r.k1 = r.m1 * w1 * w1;
        r.k2 = r.m2 * w2 * w2;
        r.g1 = r.m1 * c.f1.eval(t);
        r.g2 = r.m2 * c.f2.eval(t);
        r.lambda = c.lambda.eval(t);
        return r;
    }

    double potential(double x1, double x2) const {
        return 0.5 * k1 * x1 * x1 + 0.5 * k2 * x2 * x2 - g1 * x1 - g2 * x2 + lambda * x1 * x2;
    }
};

/// psi *= exp(-i tau_a V_a / hbar - i tau_b V_b / hbar)
inline void applyPotential(GridState& st, const Coeffs& a, double tau_a, const Coeffs* b, double tau_b,
                           double hbar) {
    const auto& g = st.grid;
    const int n2 = g.points[1];
    for (int i = 0; i < g.points[0]; ++i) {
        const double x1 = g.coord(0, i);
        for (int k = 0; k < n2; ++k) {
            const double x2 = g.coord(1, k);
            double theta = tau_a * a.potential(x1, x2);
            if (b) theta += tau_b * b->potential(x1, x2);
            st.psi[static_cast<std::size_t>(i) * n2 + k] *= std::polar(1.0, -theta / hbar);
        }
    }
}

inline void applyKinetic(GridState& st, const Fft2D& fft, const Coeffs& c, double dt, double hbar) {
    const auto& g = st.grid;
    const int n2 = g.points[1];
    fft.forward(st.psi);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (int i = 0; i < g.points[0]; ++i) {
        const double q1 = g.wavenumber(0, i);
        for (int k = 0; k < n2; ++k) {
            const double q2 = g.wavenumber(1, k);
            const double e = hbar * (q1 * q1 / (2.0 * c.m1) + q2 * q2 / (2.0 * c.m2));
            st.psi[static_cast<std::size_t>(i) * n2 + k] *= std::polar(inv, -e * dt);
        }
    }
    fft.backward(st.psi);
}

}  // namespace detail

/// One Strang step of length dt starting at st.t.
inline GridState step(const SystemSpec& s, const GridState& st, double dt) {
    if (!(dt > 0.0)) throw DomainError("oracle step: dt must be positive");
    GridState out = st;
    const double hbar = s.hbar();
    const auto c = detail::Coeffs::at(s, st.t + 0.5 * dt);
    detail::Fft2D fft(out.grid);
    detail::applyPotential(out, c, 0.5 * dt, nullptr, 0.0, hbar);
    detail::applyKinetic(out, fft, c, dt, hbar);
    detail::applyPotential(out, c, 0.5 * dt, nullptr, 0.0, hbar);
    out.t = st.t + dt;
    return out;
}

/// nSteps uniform Strang steps from t0 to t1; adjacent potential half-steps
/// are fused into a single phase multiplication.
template <class Observer>
GridState evolve(const SystemSpec& s, const GridState& st0, double t0, double t1, int nSteps,
                 Observer&& observe) {
    if (nSteps < 1) throw DomainError("oracle evolve: nSteps must be >= 1");
    GridState st = st0;
    st.t = t0;
    if (t1 == t0) return st;
    const double hbar = s.hbar();
    const double dt = (t1 - t0) / nSteps;
    detail::Fft2D fft(st.grid);
    auto c = detail::Coeffs::at(s, t0 + 0.5 * dt);
    detail::applyPotential(st, c, 0.5 * dt, nullptr, 0.0, hbar);
    for (int n = 0; n < nSteps; ++n) {
        detail::applyKinetic(st, fft, c, dt, hbar);
        st.t = t0 + (n + 1) * dt;
        if (n + 1 < nSteps && !observe.wants(n + 1)) {
            const auto next = detail::Coeffs::at(s, t0 + (n + 1.5) * dt);
            detail::applyPotential(st, c, 0.5 * dt, &next, 0.5 * dt, hbar);
            c = next;
        } else {
            detail::applyPotential(st, c, 0.5 * dt, nullptr, 0.0, hbar);
            observe(n + 1, st);
            if (n + 1 < nSteps) {
                c = detail::Coeffs::at(s, t0 + (n + 1.5) * dt);
                detail::applyPotential(st, c, 0.5 * dt, nullptr, 0.0, hbar);
            }
        }
    }
    st.t = t1;
    return st;
}

struct NoObserver {
    bool wants(int) const { return false; }
    void operator()(int, const GridState&) const {}
};

inline GridState evolve(const SystemSpec& s, const GridState& st0, double t0, double t1, int nSteps) {
    return evolve(s, st0, t0, t1, nSteps, NoObserver{});
}

struct Observables {
    double t = 0.0;
    double norm = 0.0;
    double x1 = 0.0, x2 = 0.0, x1sq = 0.0, x2sq = 0.0;
    double energy = 0.0;
};

inline Observables observables(const SystemSpec& s, const GridState& st) {
    const auto& g = st.grid;
    const int n2 = g.points[1];
    const auto c = detail::Coeffs::at(s, st.t);
    Observables o;
    o.t = st.t;
    double n = 0.0, pot = 0.0;
    for (int i = 0; i < g.points[0]; ++i) {
        const double x1 = g.coord(0, i);
        for (int k = 0; k < n2; ++k) {
            const double x2 = g.coord(1, k);
            const double p = std::norm(st.psi[static_cast<std::size_t>(i) * n2 + k]);
            n += p;
            o.x1 += p * x1;
            o.x2 += p * x2;
            o.x1sq += p * x1 * x1;
            o.x2sq += p * x2 * x2;
            pot += p * c.potential(x1, x2);
        }
    }
    std::vector<cplx> spec = st.psi;
    detail::Fft2D fft(g);
    fft.forward(spec);
    double kin = 0.0, nk = 0.0;
    const double hbar = s.hbar();
    for (int i = 0; i < g.points[0]; ++i) {
        const double q1 = g.wavenumber(0, i);
        for (int k = 0; k < n2; ++k) {
            const double q2 = g.wavenumber(1, k);
            const double p = std::norm(spec[static_cast<std::size_t>(i) * n2 + k]);
            nk += p;
            kin += p * hbar * hbar * (q1 * q1 / (2.0 * c.m1) + q2 * q2 / (2.0 * c.m2));
        }
    }
    o.norm = n * g.cellArea();
    o.x1 /= n;
    o.x2 /= n;
    o.x1sq /= n;
    o.x2sq /= n;
    o.energy = pot / n + kin / nk;
    return o;
}

/// Writes |psi|^2 as little-endian float64, row-major, after a 16-byte header
/// (int32 n1, int32 n2, two reserved int32 zeros).
inline void writeDensity(const GridState& st, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    auto put32 = [&](std::int32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint32_t>(v) >> (8 * i)) & 0xff);
        os.write(reinterpret_cast<const char*>(b), 4);
    };
    put32(st.grid.points[0]);
    put32(st.grid.points[1]);
    put32(0);
    put32(0);
    for (const auto& z : st.psi) {
        const double p = std::norm(z);
        std::uint64_t bits;
        std::memcpy(&bits, &p, sizeof bits);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
        os.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace tdho::oracle
