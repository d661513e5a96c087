#include "gen.hpp"

#include <algorithm>

#include "fft.hpp"
#include "spectral.hpp"

namespace fluxdiag {

namespace {

void require_2pi_multiple(const Grid& g, const char* what) {
    for (int a = 0; a < 3; ++a) {
        const double q = g.domain.box_len(a) / (2.0 * M_PI);
        if (std::abs(q - std::round(q)) > 1e-12)
            throw ValidationError(std::string(what) +
                                  ": box lengths must be integer multiples of 2*pi");
    }
}

// --- deterministic, order-independent per-mode RNG -------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t zigzag(int m) {
    return m >= 0 ? 2ull * std::uint64_t(m) : 2ull * std::uint64_t(-m) - 1ull;
}

struct ModeRng {
    std::uint64_t h;
    ModeRng(std::uint64_t seed, int m1, int m2, int m3) {
        // Run the full avalanche after every injection: the zigzag values
        // only touch the low bits, and without intermediate mixing distinct
        // (m1, m2, m3) triples routinely collapse to the same state, which
        // correlates modes and corrupts triad statistics such as J_eps.
        h = seed;
        splitmix64(h);
        h = splitmix64(h ^= zigzag(m1));
        h = splitmix64(h ^= zigzag(m2));
        h = splitmix64(h ^= zigzag(m3));
    }
    double uniform() {  // in (0, 1]
        return (double(splitmix64(h) >> 11) + 1.0) * 0x1p-53;
    }
    // Standard normal pair via Box-Muller.
    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1)), t = 2.0 * M_PI * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }
    // Unit-variance complex Gaussian 3-vector for this mode.
    std::array<cplx, 3> gauss3() {
        std::array<cplx, 3> z;
        for (int c = 0; c < 3; ++c) {
            double a, b;
            normal_pair(a, b);
            z[c] = cplx(a, b) / std::sqrt(2.0);
        }
        return z;
    }
};

// Hermitian-symmetrized complex Gaussian for integer mode m:
// xi(m) = (z(m) + conj(z(-m))) / sqrt(2), so xi(-m) = conj(xi(m)) exactly
// and each component has unit variance.
std::array<cplx, 3> hermitian_gauss(std::uint64_t seed, int m1, int m2, int m3) {
    auto zp = ModeRng(seed, m1, m2, m3).gauss3();
    auto zm = ModeRng(seed, -m1, -m2, -m3).gauss3();
    std::array<cplx, 3> xi;
    for (int c = 0; c < 3; ++c) xi[c] = (zp[c] + std::conj(zm[c])) / std::sqrt(2.0);
    return xi;
}

// Fill a spectral field with the shell-band rough spectrum; `extra_decay`
// raises the exponent (used for vector potentials, which gain a |k| on curl).
void fill_rough_spectrum(SpectralField& s, const RoughSpec& spec, double extra_decay) {
    const Grid& g = s.grid;
    const int n3h = g.N[2] / 2 + 1;
    const int kmax = spec.kmax > 0 ? spec.kmax
                                   : std::min({g.N[0], g.N[1], g.N[2]}) / 3;
    const double p = (spec.alpha + 1.5 + extra_decay) / 2.0;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1) {
        const int m1 = wavenumber_int(g, 0, i1);
        for (int i2 = 0; i2 < g.N[1]; ++i2) {
            const int m2 = wavenumber_int(g, 1, i2);
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                const int m3 = i3;
                const long mm = long(m1) * m1 + long(m2) * m2 + long(m3) * m3;
                const double kmag = std::sqrt(double(mm));
                if (kmag < spec.kmin || kmag > kmax) continue;
                const double amp = spec.amplitude * std::pow(double(mm), -p);
                auto xi = hermitian_gauss(spec.seed, m1, m2, m3);
                for (int c = 0; c < 3; ++c) s.c[c][i] = amp * xi[c];
            }
        }
    }
}

}  // namespace

void RoughSpec::validate(const Grid& g) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("RoughSpec: alpha must lie in (0,1)");
    const int lim = std::min({g.N[0], g.N[1], g.N[2]}) / 3;
    if (kmax > lim)
        throw ValidationError("RoughSpec: kmax exceeds dealias-safe bound N/3");
    if (kmin < 1 || (kmax > 0 && kmax < kmin))
        throw ValidationError("RoughSpec: invalid band");
}

VelocityField gen_taylor_green(const Grid& g) {
    g.validate();
    if (g.domain.kind != DomainKind::Periodic3)
        throw ValidationError("gen_taylor_green: Periodic3 grid required");
    require_2pi_multiple(g, "gen_taylor_green");
    VelocityField u(g);
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1) {
        const double x1 = g.coord(0, i1);
        for (int i2 = 0; i2 < g.N[1]; ++i2) {
            const double x2 = g.coord(1, i2);
            for (int i3 = 0; i3 < g.N[2]; ++i3, ++i) {
                const double x3 = g.coord(2, i3);
                u.c[0][i] = std::sin(x1) * std::cos(x2) * std::cos(x3);
                u.c[1][i] = -std::cos(x1) * std::sin(x2) * std::cos(x3);
                u.c[2][i] = 0.0;
            }
        }
    }
    return u;
}

VelocityField gen_abc(const Grid& g, double A, double B, double C) {
    g.validate();
    if (g.domain.kind != DomainKind::Periodic3)
        throw ValidationError("gen_abc: Periodic3 grid required");
    require_2pi_multiple(g, "gen_abc");
    VelocityField u(g);
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1) {
        const double x1 = g.coord(0, i1);
        for (int i2 = 0; i2 < g.N[1]; ++i2) {
            const double x2 = g.coord(1, i2);
            for (int i3 = 0; i3 < g.N[2]; ++i3, ++i) {
                const double x3 = g.coord(2, i3);
                u.c[0][i] = A * std::sin(x3) + C * std::cos(x2);
                u.c[1][i] = B * std::sin(x1) + A * std::cos(x3);
                u.c[2][i] = C * std::sin(x2) + B * std::cos(x1);
            }
        }
    }
    return u;
}

double seam_window(double z, double L3) {
    const double a = 0.60 * L3, b = 0.85 * L3, az = std::abs(z);
    if (az <= a) return 1.0;
    if (az >= b) return 0.0;
    const double t = (az - a) / (b - a);
    auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    return f(1.0 - t) / (f(1.0 - t) + f(t));
}

double seam_mass_fraction(const VelocityField& f) {
    const Grid& g = f.grid;
    if (g.domain.kind == DomainKind::Periodic3) return 0.0;
    const double L3 = g.domain.L[2];
    const double total = energy(f);
    if (total <= 0.0) return 0.0;
    double near = 0.0;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < g.N[2]; ++i3, ++i) {
                double z = g.coord(2, i3);
                // distance from the seam plane |x3| = L3 (hybrid box wraps at 2*L3)
                double d;
                if (g.domain.kind == DomainKind::HybridSlab)
                    d = std::abs(z - L3);
                else  // HalfSlab: seam is the top of the box
                    d = L3 - z;
                if (d < L3 / 8.0) {
                    double q = f.c[0][i] * f.c[0][i] + f.c[1][i] * f.c[1][i] +
                               f.c[2][i] * f.c[2][i];
                    near += 0.5 * g.cell_volume() * q;
                }
            }
    return near / total;
}

VelocityField gen_rough(const Grid& g, const RoughSpec& spec) {
    g.validate();
    spec.validate(g);
    if (g.domain.kind == DomainKind::Periodic3) {
        SpectralField s(g);
        fill_rough_spectrum(s, spec, 0.0);
        VelocityField u = leray_project(inverse(s));
        return u;
    }
    if (g.domain.kind != DomainKind::HybridSlab)
        throw ValidationError("gen_rough: Periodic3 or HybridSlab grid required");
    // Windowed vector potential: A rough with one extra power of decay,
    // u = curl(W(x3) A) is exactly divergence-free (spectral curl) and
    // decays toward the truncation seam. The window must be small at the
    // seam zone in real space AND have negligible spectral content beyond
    // the grid Nyquist (otherwise the band-limited curl leaks back into the
    // zone). A Gaussian optimizes that trade-off: both tails are e^{-E}
    // with E = d*K/2 at the balanced width, d the center-to-zone distance
    // and K the Nyquist margin above the synthesis band.
    SpectralField As(g);
    fill_rough_spectrum(As, spec, 1.0);
    VelocityField A = inverse(As);
    const double L3 = g.domain.L[2];
    const double d = 0.875 * L3;  // seam zone starts at |z| = 7*L3/8
    const int bm = spec.kmax > 0 ? spec.kmax
                                 : std::min({g.N[0], g.N[1], g.N[2]}) / 3;
    const double knyq = M_PI * g.N[2] / (2.0 * L3);
    const double margin = std::max(knyq - M_PI * bm / L3, 1e-12);
    const double E0 = 18.0;  // target exponent: amplitude e^-18 per tail
    double sigma = d / std::sqrt(2.0 * E0);
    if (0.5 * sigma * sigma * margin * margin < E0)
        sigma = std::sqrt(d / margin);  // balanced width, best achievable
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < g.N[2]; ++i3, ++i) {
                double z = g.coord(2, i3);
                if (z > L3) z -= 2.0 * L3;
                const double w = std::exp(-0.5 * (z / sigma) * (z / sigma));
                for (int c = 0; c < 3; ++c) A.c[c][i] *= w;
            }
    SpectralField WA = forward(A);
    SpectralField curl(g);
    const int n3h = g.N[2] / 2 + 1;
    i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                const double k1 = wavenumber(g, 0, i1);
                const double k2 = wavenumber(g, 1, i2);
                const double k3 = wavenumber(g, 2, i3);
                const cplx I(0.0, 1.0);
                curl.c[0][i] = I * (k2 * WA.c[2][i] - k3 * WA.c[1][i]);
                curl.c[1][i] = I * (k3 * WA.c[0][i] - k1 * WA.c[2][i]);
                curl.c[2][i] = I * (k1 * WA.c[1][i] - k2 * WA.c[0][i]);
                // the analytic curl is divergence-free, but the products
                // above do not cancel exactly in floating point; project out
                // the O(eps*|k|^2*|A|) residual mode by mode
                const double kk = k1 * k1 + k2 * k2 + k3 * k3;
                if (kk > 0.0) {
                    const cplx kd = (k1 * curl.c[0][i] + k2 * curl.c[1][i] +
                                     k3 * curl.c[2][i]) / kk;
                    curl.c[0][i] -= k1 * kd;
                    curl.c[1][i] -= k2 * kd;
                    curl.c[2][i] -= k3 * kd;
                }
            }
    VelocityField u = inverse(curl);
    const double frac = seam_mass_fraction(u);
    if (frac > 1e-10)
        throw NumericalError(
            "gen_rough: seam mass constraint violated (fraction " +
            std::to_string(frac) + "); enlarge L3 or narrow the band");
    return u;
}

Grid hybrid_of_half(const Grid& half) {
    if (half.domain.kind != DomainKind::HalfSlab)
        throw ValidationError("hybrid_of_half: HalfSlab grid required");
    Grid g = half;
    g.domain.kind = DomainKind::HybridSlab;
    g.N[2] = 2 * half.N[2];
    return g;
}

Grid half_of_hybrid(const Grid& hybrid) {
    if (hybrid.domain.kind != DomainKind::HybridSlab)
        throw ValidationError("half_of_hybrid: HybridSlab grid required");
    Grid g = hybrid;
    g.domain.kind = DomainKind::HalfSlab;
    g.N[2] = hybrid.N[2] / 2;
    return g;
}

VelocityField gen_halfspace(const Grid& half_grid, const RoughSpec& spec) {
    if (half_grid.domain.kind != DomainKind::HalfSlab)
        throw ValidationError("gen_halfspace: HalfSlab grid required");
    const Grid hyb = hybrid_of_half(half_grid);
    VelocityField w = gen_rough(hyb, spec);
    // u = (w + w_R)/2 restricted to x3 >= 0; reflection z -> -z is index
    // j -> (N3 - j) mod N3 on the hybrid grid.
    VelocityField u(half_grid);
    const int N3 = hyb.N[2];
    std::size_t i = 0;
    for (int i1 = 0; i1 < half_grid.N[0]; ++i1)
        for (int i2 = 0; i2 < half_grid.N[1]; ++i2)
            for (int i3 = 0; i3 < half_grid.N[2]; ++i3, ++i) {
                const int jr = (N3 - i3) % N3;
                const std::size_t a = hyb.idx(i1, i2, i3), b = hyb.idx(i1, i2, jr);
                u.c[0][i] = 0.5 * (w.c[0][a] + w.c[0][b]);
                u.c[1][i] = 0.5 * (w.c[1][a] + w.c[1][b]);
                u.c[2][i] = 0.5 * (w.c[2][a] - w.c[2][b]);
            }
    return u;
}

}  // namespace fluxdiag
