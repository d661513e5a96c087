#include "euler.hpp"

#include <algorithm>

#include "fft.hpp"
#include "spectral.hpp"

namespace fluxdiag {

namespace {

struct State {  // spectral coefficients of the three components
    Grid grid;
    std::array<std::vector<cplx>, 3> c;
};

bool in_band(const Grid& g, int i1, int i2, int i3) {
    const int m1 = std::abs(wavenumber_int(g, 0, i1));
    const int m2 = std::abs(wavenumber_int(g, 1, i2));
    return m1 <= g.N[0] / 3 && m2 <= g.N[1] / 3 && i3 <= g.N[2] / 3;
}

void dealias(State& s) {
    const Grid& g = s.grid;
    const int n3h = g.N[2] / 2 + 1;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i)
                if (!in_band(g, i1, i2, i3))
                    for (int c = 0; c < 3; ++c) s.c[c][i] = cplx(0.0);
}

// N(u) = -P[ sum_j i k_j (u_i u_j)^ ], dealiased.
State rhs_spectral(const State& s) {
    const Grid& g = s.grid;
    const std::size_t nc = SpectralField::ncoeff(g);
    std::array<std::vector<double>, 3> u;
    for (int c = 0; c < 3; ++c) {
        u[c].resize(g.npoints());
        fft_inverse(g, s.c[c].data(), u[c].data());
    }
    static const int II[6] = {0, 1, 2, 0, 0, 1};
    static const int JJ[6] = {0, 1, 2, 1, 2, 2};
    std::array<std::vector<cplx>, 6> vv;
    {
        std::vector<double> prod(g.npoints());
        for (int q = 0; q < 6; ++q) {
            for (std::size_t i = 0; i < g.npoints(); ++i)
                prod[i] = u[II[q]][i] * u[JJ[q]][i];
            vv[q].resize(nc);
            fft_forward(g, prod.data(), vv[q].data());
        }
    }
    static const int sym[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    State out;
    out.grid = g;
    for (int c = 0; c < 3; ++c) out.c[c].assign(nc, cplx(0.0));
    const int n3h = g.N[2] / 2 + 1;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1) {
        const double k1 = wavenumber(g, 0, i1);
        for (int i2 = 0; i2 < g.N[1]; ++i2) {
            const double k2 = wavenumber(g, 1, i2);
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                if (!in_band(g, i1, i2, i3)) continue;
                const double k[3] = {k1, k2, wavenumber(g, 2, i3)};
                cplx n[3];
                for (int a = 0; a < 3; ++a) {
                    cplx acc(0.0);
                    for (int j = 0; j < 3; ++j)
                        acc += cplx(0.0, k[j]) * vv[sym[a][j]][i];
                    n[a] = -acc;
                }
                const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (kk > 0.0) {  // Leray projection
                    const cplx kd = (k[0] * n[0] + k[1] * n[1] + k[2] * n[2]) / kk;
                    for (int a = 0; a < 3; ++a) n[a] -= k[a] * kd;
                }
                for (int a = 0; a < 3; ++a) out.c[a][i] = n[a];
            }
        }
    }
    return out;
}

double state_energy(const State& s) {
    const Grid& g = s.grid;
    const int n3h = g.N[2] / 2 + 1;
    double acc = 0.0;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                const double w = herm_weight(g, i3);
                for (int c = 0; c < 3; ++c) acc += w * std::norm(s.c[c][i]);
            }
    return 0.5 * acc * g.cell_volume();
}

double state_top_shell_fraction(const State& s) {
    const Grid& g = s.grid;
    const int n3h = g.N[2] / 2 + 1;
    // Top third of the resolvable |k| range [0, N/2], i.e. |k| > N/3. Within
    // the 2/3-rule band only the corner modes reach it; energy accumulating
    // there signals that the cascade has hit the grid.
    const double kthresh = std::min({g.N[0], g.N[1], g.N[2]}) / 3.0;
    double top = 0.0, tot = 0.0;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                const int m1 = wavenumber_int(g, 0, i1);
                const int m2 = wavenumber_int(g, 1, i2);
                const double km = std::sqrt(double(m1) * m1 + double(m2) * m2 +
                                            double(i3) * i3);
                const double w = herm_weight(g, i3);
                double e = 0.0;
                for (int c = 0; c < 3; ++c) e += w * std::norm(s.c[c][i]);
                tot += e;
                if (km > kthresh) top += e;
            }
    return tot > 0.0 ? top / tot : 0.0;
}

}  // namespace

VelocityField euler_rhs(const VelocityField& u) {
    if (u.grid.domain.kind != DomainKind::Periodic3)
        throw ValidationError("euler_rhs: Periodic3 field required");
    State s;
    s.grid = u.grid;
    SpectralField sf = forward(u);
    for (int c = 0; c < 3; ++c) s.c[c] = std::move(sf.c[c]);
    dealias(s);
    State n = rhs_spectral(s);
    SpectralField out(u.grid);
    for (int c = 0; c < 3; ++c) out.c[c] = std::move(n.c[c]);
    return inverse(out);
}

double top_shell_fraction(const VelocityField& u) {
    State s;
    s.grid = u.grid;
    SpectralField sf = forward(u);
    for (int c = 0; c < 3; ++c) s.c[c] = std::move(sf.c[c]);
    return state_top_shell_fraction(s);
}

SnapshotSeries integrate(const VelocityField& u0, double t_end, double dt,
                         const IntegrateOptions& opts) {
    if (u0.grid.domain.kind != DomainKind::Periodic3)
        throw ValidationError("integrate: Periodic3 initial data required");
    if (!(dt > 0.0 && t_end > 0.0)) throw ValidationError("integrate: dt, T must be > 0");
    double umax = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : u0.c[c]) umax = std::max(umax, std::abs(v));
    const double hmin = std::min({u0.grid.h(0), u0.grid.h(1), u0.grid.h(2)});
    if (umax > 0.0 && dt > opts.cfl * hmin / umax)
        throw ValidationError("integrate: dt violates the CFL bound");

    State s;
    s.grid = u0.grid;
    SpectralField sf = forward(u0);
    for (int c = 0; c < 3; ++c) s.c[c] = std::move(sf.c[c]);
    dealias(s);

    SnapshotSeries series;
    series.dt = dt;
    auto emit = [&](double t) {
        SpectralField out(s.grid);
        for (int c = 0; c < 3; ++c) out.c[c] = s.c[c];
        series.times.push_back(t);
        series.fields.push_back(inverse(out));
        series.energies.push_back(state_energy(s));
    };
    emit(0.0);

    const long nsteps = std::lround(t_end / dt);
    const std::size_t nc = SpectralField::ncoeff(s.grid);
    auto axpy = [&](State& dst, const State& base, const State& k, double a) {
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < nc; ++i)
                dst.c[c][i] = base.c[c][i] + a * k.c[c][i];
    };
    State tmp = s;
    for (long step = 1; step <= nsteps; ++step) {
        const State k1 = rhs_spectral(s);
        axpy(tmp, s, k1, 0.5 * dt);
        const State k2 = rhs_spectral(tmp);
        axpy(tmp, s, k2, 0.5 * dt);
        const State k3 = rhs_spectral(tmp);
        axpy(tmp, s, k3, dt);
        const State k4 = rhs_spectral(tmp);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < nc; ++i)
                s.c[c][i] += dt / 6.0 *
                             (k1.c[c][i] + 2.0 * k2.c[c][i] + 2.0 * k3.c[c][i] + k4.c[c][i]);
        // rhs output is already projected and dealiased; re-projection each
        // step guards against drift from round-off
        const double frac = state_top_shell_fraction(s);
        if (frac > opts.top_shell_limit)
            throw NumericalError("integrate: resolution loss (top-shell fraction " +
                                 std::to_string(frac) + ")");
        if (step % opts.stride == 0 || step == nsteps) emit(step * dt);
    }
    return series;
}

}  // namespace fluxdiag
