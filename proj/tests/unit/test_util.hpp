#pragma once
// Shared helpers for the unit tests.

#include <random>

#include "core/gen.hpp"
#include "core/spectral.hpp"
#include "core/types.hpp"

namespace testutil {

using namespace fluxdiag;

inline Grid cube(int n, double L = 2.0 * M_PI,
                 DomainKind kind = DomainKind::Periodic3) {
    Grid g;
    g.domain.kind = kind;
    g.domain.L = {L, L, L};
    g.N = {n, n, n};
    g.validate();
    return g;
}

// Band-limited random divergence-free field (the production generator with
// a mid-range exponent; tests that need a specific alpha call gen_rough
// themselves).
inline VelocityField random_divfree(int n, std::uint64_t seed, int kmax = 0) {
    RoughSpec spec;
    spec.alpha = 0.5;
    spec.seed = seed;
    spec.kmin = 1;
    spec.kmax = kmax;
    return gen_rough(cube(n), spec);
}

// Plain smooth (not divergence-free) random field from a few low modes.
inline VelocityField random_smooth(int n, std::uint64_t seed) {
    Grid g = cube(n);
    VelocityField f(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    struct Mode { int m[3]; double a[3], p[3]; };
    std::vector<Mode> modes(6);
    for (auto& md : modes)
        for (int a = 0; a < 3; ++a) {
            md.m[a] = int(rng() % 4);
            md.a[a] = uni(rng);
            md.p[a] = M_PI * uni(rng);
        }
    std::size_t i = 0;
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3, ++i) {
                const double x[3] = {g.coord(0, i1), g.coord(1, i2), g.coord(2, i3)};
                for (const auto& md : modes) {
                    const double ph = md.m[0] * x[0] + md.m[1] * x[1] + md.m[2] * x[2];
                    for (int c = 0; c < 3; ++c)
                        f.c[c][i] += md.a[c] * std::cos(ph + md.p[c]);
                }
            }
    return f;
}

inline double max_abs_diff(const VelocityField& a, const VelocityField& b) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.c[c].size(); ++i)
            m = std::max(m, std::abs(a.c[c][i] - b.c[c][i]));
    return m;
}

inline double linf(const VelocityField& a) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : a.c[c]) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace testutil
