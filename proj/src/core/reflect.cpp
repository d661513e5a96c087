#include "reflect.hpp"

#include <algorithm>

#include "fit.hpp"
#include "flux.hpp"
#include "gen.hpp"
#include "spectral.hpp"

namespace fluxdiag {

namespace {

void require_half(const Grid& g, const char* what) {
    if (g.domain.kind != DomainKind::HalfSlab)
        throw ValidationError(std::string(what) + ": HalfSlab field required");
}

}  // namespace

VelocityField reflect(const VelocityField& f) {
    require_half(f.grid, "reflect");
    VelocityField r = f;
    for (double& v : r.c[2]) v = -v;
    return r;
}

double boundary_trace(const VelocityField& f) {
    require_half(f.grid, "boundary_trace");
    const Grid& g = f.grid;
    double m = 0.0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            m = std::max(m, std::abs(f.c[2][g.idx(i1, i2, 0)]));
    return m;
}

double boundary_sup(const VelocityField& f) {
    require_half(f.grid, "boundary_sup");
    const Grid& g = f.grid;
    const int jmax = std::max(1, g.N[2] / 8);
    double m = 0.0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 <= jmax; ++i3) {
                const std::size_t i = g.idx(i1, i2, i3);
                m = std::max(m, std::sqrt(f.c[0][i] * f.c[0][i] + f.c[1][i] * f.c[1][i] +
                                          f.c[2][i] * f.c[2][i]));
            }
    return m;
}

VelocityField extend(const VelocityField& half, bool* warned) {
    require_half(half.grid, "extend");
    const Grid gh = hybrid_of_half(half.grid);
    const int N3 = gh.N[2], N3half = half.grid.N[2];
    if (warned) *warned = false;
    if (boundary_trace(half) > kTraceTolFactor * std::max(boundary_sup(half), 1e-300)) {
        if (warned) *warned = true;
    }
    VelocityField e(gh);
    for (int i1 = 0; i1 < gh.N[0]; ++i1)
        for (int i2 = 0; i2 < gh.N[1]; ++i2) {
            for (int i3 = 0; i3 < N3half; ++i3) {
                const std::size_t s = half.grid.idx(i1, i2, i3);
                const std::size_t d = gh.idx(i1, i2, i3);
                e.c[0][d] = half.c[0][s];
                e.c[1][d] = half.c[1][s];
                e.c[2][d] = half.c[2][s];
                if (i3 == 0) {
                    e.c[2][d] = 0.0;  // pointwise boundary value (f1, f2, 0)
                } else {
                    const std::size_t dm = gh.idx(i1, i2, N3 - i3);
                    e.c[0][dm] = half.c[0][s];
                    e.c[1][dm] = half.c[1][s];
                    e.c[2][dm] = -half.c[2][s];
                }
            }
            // seam row x3 = +-L3 stays zero (fields decay there by contract)
        }
    return e;
}

VelocityField restrict_half(const VelocityField& hybrid) {
    if (hybrid.grid.domain.kind != DomainKind::HybridSlab)
        throw ValidationError("restrict_half: HybridSlab field required");
    const Grid gh = half_of_hybrid(hybrid.grid);
    VelocityField r(gh);
    for (int i1 = 0; i1 < gh.N[0]; ++i1)
        for (int i2 = 0; i2 < gh.N[1]; ++i2)
            for (int i3 = 0; i3 < gh.N[2]; ++i3) {
                const std::size_t s = hybrid.grid.idx(i1, i2, i3);
                const std::size_t d = gh.idx(i1, i2, i3);
                for (int c = 0; c < 3; ++c) r.c[c][d] = hybrid.c[c][s];
            }
    return r;
}

namespace {

// Spatial derivatives of a HalfSlab field along its own array axes,
// computed through the hybrid extension (spectrally).
std::array<VelocityField, 3> half_derivatives(const VelocityField& f) {
    VelocityField fe = extend(f);
    SpectralField s = forward(fe);
    std::array<VelocityField, 3> d;
    for (int a = 0; a < 3; ++a) d[a] = restrict_half(inverse(derivative(s, a + 1)));
    return d;
}

double half_quad_weight(const Grid& g, int i3) {
    double w = g.cell_volume();
    if (i3 == 0) w *= 0.5;
    return w;
}

}  // namespace

double nonlinear_identity_check(const VelocityField& u, const VelocityField& psi) {
    require_half(u.grid, "nonlinear_identity_check");
    if (!u.grid.same_as(psi.grid))
        throw ValidationError("nonlinear_identity_check: grid mismatch");
    const Grid& g = u.grid;

    // RHS over D+ with u, psi as given.
    auto dpsi = half_derivatives(psi);
    double rhs = 0.0, scale = 0.0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < g.N[2]; ++i3) {
                const std::size_t q = g.idx(i1, i2, i3);
                const double w = half_quad_weight(g, i3);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const double term = u.c[i][q] * u.c[j][q] * dpsi[j].c[i][q];
                        rhs += w * term;
                        scale += w * std::abs(term);
                    }
            }

    // LHS over D- with the reflected fields; the array x3-axis measures
    // distance below the plane, so d/dz = -(array d3).
    VelocityField uR = reflect(u), psiR = reflect(psi);
    auto dpsiR = half_derivatives(psiR);
    double lhs = 0.0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < g.N[2]; ++i3) {
                const std::size_t q = g.idx(i1, i2, i3);
                const double w = half_quad_weight(g, i3);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const double sgn = (j == 2) ? -1.0 : 1.0;
                        lhs += w * uR.c[i][q] * uR.c[j][q] * sgn * dpsiR[j].c[i][q];
                    }
            }
    const double floor = 1e-12 * scale + 1e-300;
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + floor);
}

namespace {

// Deterministic direction design: 32-point golden-angle spiral on the upper
// hemisphere plus 8 horizontal directions (40 total, >= 26 required).
std::vector<Vec3> hemisphere_design() {
    std::vector<Vec3> dirs;
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int q = 0; q < 32; ++q) {
        const double c = (q + 0.5) / 32.0;
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double p = ga * q;
        dirs.push_back({s * std::cos(p), s * std::sin(p), c});
    }
    for (int q = 0; q < 8; ++q) {
        const double p = 2.0 * M_PI * q / 8.0;
        dirs.push_back({std::cos(p), std::sin(p), 0.0});
    }
    return dirs;
}

}  // namespace

ContinuityModulus continuity_modulus(const VelocityField& f,
                                     const std::vector<double>& radii) {
    if (radii.empty()) throw ValidationError("continuity_modulus: empty radius list");
    const bool half = f.grid.domain.kind == DomainKind::HalfSlab;
    if (!half && f.grid.domain.kind != DomainKind::HybridSlab)
        throw ValidationError("continuity_modulus: HalfSlab or HybridSlab field required");
    for (double r : radii)
        if (!(r > 0.0 && r <= f.grid.domain.L[2] / 4.0))
            throw ValidationError("continuity_modulus: radii must lie in (0, L3/4]");
    VelocityField rep = half ? extend(f) : f;
    const Grid& g = rep.grid;

    std::vector<Vec3> dirs = hemisphere_design();
    if (!half) {  // interior plane: probe both sides
        const std::size_t n = dirs.size();
        for (std::size_t q = 0; q < n; ++q)
            if (dirs[q][2] > 0.0) dirs.push_back({dirs[q][0], dirs[q][1], -dirs[q][2]});
    }

    ContinuityModulus mod;
    mod.radii = radii;
    std::sort(mod.radii.begin(), mod.radii.end());
    double running = 0.0;
    for (double r : mod.radii) {
        double sup = 0.0;
        for (const auto& d : dirs) {
            VelocityField sh = shift_sample(rep, {r * d[0], r * d[1], r * d[2]});
            for (int i1 = 0; i1 < g.N[0]; ++i1)
                for (int i2 = 0; i2 < g.N[1]; ++i2) {
                    const std::size_t i = g.idx(i1, i2, 0);
                    const double d0 = sh.c[0][i] - rep.c[0][i];
                    const double d1 = sh.c[1][i] - rep.c[1][i];
                    const double d2 = sh.c[2][i] - rep.c[2][i];
                    sup = std::max(sup, std::sqrt(d0 * d0 + d1 * d1 + d2 * d2));
                }
        }
        running = std::max(running, sup);  // w(r) = sup over |z| <= r
        mod.w.push_back(running);
    }
    SlopeFit fit = fit_loglog(mod.radii, mod.w);
    mod.fit_slope = fit.slope;
    mod.fit_ci95 = fit.ci95;
    return mod;
}

CriterionReport halfspace_criterion(const std::vector<VelocityField>& snapshots,
                                    const std::vector<double>& weights,
                                    const std::vector<double>& shifts) {
    if (snapshots.empty() || snapshots.size() != weights.size())
        throw ValidationError("halfspace_criterion: snapshots/weights mismatch");
    if (shifts.size() < 4)
        throw ValidationError("halfspace_criterion: need >= 4 shifts");
    for (const auto& f : snapshots) require_half(f.grid, "halfspace_criterion");

    CriterionReport rep;
    rep.mode = "half";
    rep.shifts = shifts;
    std::sort(rep.shifts.begin(), rep.shifts.end(), std::greater<double>());
    const Grid& g = snapshots[0].grid;

    for (const auto& f : snapshots) {
        if (boundary_trace(f) >
            kTraceTolFactor * std::max(boundary_sup(f), 1e-300))
            rep.trace_warning = true;
    }

    // bulk term (Eq. (10)): direction-averaged, time-summed S3_half / |y|
    const auto dirs = shift_directions();
    rep.directions = dirs;
    for (double ell : rep.shifts) {
        double avg = 0.0;
        for (const auto& d : dirs) {
            const Vec3 y{d[0] * ell, d[1] * ell, d[2] * ell};
            double tsum = 0.0;
            for (std::size_t t = 0; t < snapshots.size(); ++t)
                tsum += weights[t] * structure_fn_half(snapshots[t], y);
            avg += tsum;
        }
        rep.s3_over_y.push_back(avg / double(dirs.size()) / ell);
    }

    // strip term: |T^2| * w(2|y|)^3 per snapshot, time-summed
    std::vector<double> radii;
    for (double ell : rep.shifts) radii.push_back(2.0 * ell);
    std::sort(radii.begin(), radii.end());
    const double area = g.domain.L[0] * g.domain.L[1];
    std::vector<std::vector<double>> mods;
    for (const auto& f : snapshots) mods.push_back(continuity_modulus(f, radii).w);
    for (double ell : rep.shifts) {
        const double r = 2.0 * ell;
        const std::size_t ri =
            std::lower_bound(radii.begin(), radii.end(), r * (1 - 1e-12)) - radii.begin();
        double v = 0.0;
        for (std::size_t t = 0; t < snapshots.size(); ++t)
            v += weights[t] * area * std::pow(mods[t][ri], 3.0);
        rep.strip_values.push_back(v);
    }

    const auto band = inertial_band(g);
    rep.fit_band = band;
    std::vector<double> fx, fb, fs;
    for (std::size_t i = 0; i < rep.shifts.size(); ++i)
        if (rep.shifts[i] >= band[0] * (1 - 1e-9) && rep.shifts[i] <= band[1] * (1 + 1e-9)) {
            fx.push_back(rep.shifts[i]);
            fb.push_back(rep.s3_over_y[i]);
            fs.push_back(rep.strip_values[i]);
        }
    if (fx.size() < 3) {
        fx = rep.shifts;
        fb = rep.s3_over_y;
        fs = rep.strip_values;
    }
    SlopeFit bulk = fit_loglog(fx, fb);
    SlopeFit strip = fit_loglog(fx, fs);
    rep.slope = bulk.slope;
    rep.ci95 = bulk.ci95;
    rep.strip_slope = strip.slope;
    if (rep.trace_warning)
        rep.verdict = "inconclusive";
    else if (bulk.slope - bulk.ci95 > 0.0 && strip.slope > 0.0)
        rep.verdict = "conserving";
    else
        rep.verdict = "inconclusive";
    return rep;
}

}  // namespace fluxdiag
