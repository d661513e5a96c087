#include <doctest.h>

#include "core/fit.hpp"
#include "core/flux.hpp"
#include "core/gen.hpp"
#include "core/mollifier.hpp"
#include "core/spectral.hpp"
#include "test_util.hpp"

using namespace fluxdiag;
using testutil::cube;

namespace {

double l3_cubed(const VelocityField& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.c[0].size(); ++i) {
        const double q = u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] +
                         u.c[2][i] * u.c[2][i];
        acc += std::pow(q, 1.5);
    }
    return acc * u.grid.cell_volume();
}

}  // namespace

TEST_CASE("structure function: closed form, symmetry, zero shift, bound") {
    Grid g = cube(32);
    VelocityField u(g);
    std::size_t i = 0;
    for (int i1 = 0; i1 < 32; ++i1)
        for (int i2 = 0; i2 < 32; ++i2)
            for (int i3 = 0; i3 < 32; ++i3, ++i) u.c[1][i] = std::sin(g.coord(0, i1));
    // [DERIVED] S3((pi,0,0)) = (2pi)^2 * int |2 sin t|^3 dt = (2pi)^2 * 64/3
    const double expect = 4.0 * M_PI * M_PI * 64.0 / 3.0;
    CHECK(structure_fn(u, Vec3{M_PI, 0, 0}) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(structure_fn(u, Vec3{0, 0, 0}) == 0.0);

    const VelocityField w = testutil::random_divfree(32, 31);
    // grid-aligned shift: S3(y) and S3(-y) then sum over identical pairs
    // and agree to round-off (off-grid shifts only agree to quadrature
    // accuracy because |du|^3 is not band-limited)
    const double hg = g.h(0);
    const Vec3 y{2.0 * hg, -hg, 3.0 * hg};
    const double sp = structure_fn(w, y);
    const double sm = structure_fn(w, Vec3{-y[0], -y[1], -y[2]});
    CHECK(std::abs(sp - sm) / (sp + 1e-30) < 1e-11);
    // triangle-inequality bound S3 <= 8 ||u||_{L3}^3
    CHECK(sp <= 8.0 * l3_cubed(w) * (1.0 + 1e-10));
}

TEST_CASE("besov integral: constant field, core divergence, quadrature stability") {
    Grid g = cube(64);
    VelocityField c(g);
    for (auto& v : c.c[0]) v = 2.0;
    CHECK(besov_integral(c, 0.5, M_PI / 2.0) == 0.0);
    CHECK_THROWS_AS((void)besov_integral(c, -0.1, 1.0), ValidationError);
    CHECK_THROWS_AS((void)besov_integral(c, 0.5, 4.0), ValidationError);

    const double h = g.h(0);
    RoughSpec spec;
    spec.alpha = 0.2;
    spec.seed = 8;
    spec.kmin = 4;
    const VelocityField rough = gen_rough(g, spec);
    // [DERIVED] slope arithmetic: radial integrand ~ r^{3 alpha - 2 - delta},
    // exponent -1.9 for alpha=0.2, delta=0.5 -> >= 2x growth per core halving
    const double v12 = besov_integral(rough, 0.5, M_PI / 2.0, 12.0 * h);
    const double v6 = besov_integral(rough, 0.5, M_PI / 2.0, 6.0 * h);
    const double v3 = besov_integral(rough, 0.5, M_PI / 2.0, 3.0 * h);
    CHECK(v6 >= 2.0 * v12);
    CHECK(v3 >= 2.0 * v6);

    spec.alpha = 0.9;
    spec.kmin = 1;
    const VelocityField smooth = gen_rough(g, spec);
    const double a1 = besov_integral(smooth, 0.5, M_PI / 2.0, 3.0 * h);
    const double a2 =
        besov_integral(smooth, 0.5, M_PI / 2.0, 3.0 * h, nullptr, 8, 16);
    CHECK(std::abs(a1 - a2) / a1 < 0.10);
}

TEST_CASE("J_eps identity on a random divergence-free field") {
    const VelocityField u = testutil::random_divfree(32, 77, 8);
    const Grid& g = u.grid;
    FluxWorkspace ws(u);
    CHECK_FALSE(ws.hypothesis_warning());
    for (double fac : {6.0, 8.0}) {
        const Mollifier m = build_mollifier(fac * g.h(0), g);
        const double jd = ws.j_direct(m);
        const double jb = ws.j_bilinear(m);
        const double floor = 1e-14 * std::pow(energy(u), 1.5);
        CHECK(std::abs(jd - jb) / (std::abs(jd) + floor) < 1e-6);
    }
}

TEST_CASE("J_eps: constants vanish, non-divergence-free inputs warn") {
    Grid g = cube(32);
    VelocityField c(g);
    for (auto& v : c.c[1]) v = 1.25;
    const Mollifier m = build_mollifier(6.0 * g.h(0), g);
    CHECK(std::abs(j_eps_bilinear(c, m)) < 1e-12);
    CHECK(std::abs(j_eps_direct(c, m)) < 1e-12);
    const VelocityField bad = testutil::random_smooth(32, 6);
    FluxWorkspace ws(bad);
    CHECK(ws.hypothesis_warning());
}

TEST_CASE("J_eps is invariant under x -> -x composed with v -> -v") {
    const VelocityField u = testutil::random_divfree(32, 55, 8);
    const Grid& g = u.grid;
    VelocityField v(g);
    for (int c = 0; c < 3; ++c) {
        std::size_t i = 0;
        for (int i1 = 0; i1 < 32; ++i1)
            for (int i2 = 0; i2 < 32; ++i2)
                for (int i3 = 0; i3 < 32; ++i3, ++i)
                    v.c[c][i] =
                        -u.c[c][g.idx((32 - i1) % 32, (32 - i2) % 32, (32 - i3) % 32)];
    }
    const Mollifier m = build_mollifier(6.0 * g.h(0), g);
    const double ju = j_eps_bilinear(u, m);
    const double jv = j_eps_bilinear(v, m);
    CHECK(std::abs(ju - jv) / (std::abs(ju) + 1e-30) < 1e-11);
}

TEST_CASE("smooth fields: |J_eps| decays at least as eps^1.8") {
    // generic low-band field: Taylor-Green / ABC have symmetries that make
    // the cubic correlation vanish identically, leaving only round-off.
    // The quadratic small-eps regime needs eps*kmax <~ 1, so keep the band
    // at |k| <= 2 and the eps ladder near the 3h admissibility floor.
    const VelocityField u = testutil::random_divfree(64, 19, 2);
    const Grid& g = u.grid;
    const double h = g.h(0);
    std::vector<double> eps{8 * h, 6 * h, 5 * h, 4 * h, 3.2 * h}, js;
    for (double e : eps)
        js.push_back(std::abs(j_eps_bilinear(u, build_mollifier(e, g))));
    const SlopeFit fit = fit_loglog(eps, js);
    CHECK(fit.slope >= 1.8);
}

TEST_CASE("Hoelder fields: |J_eps| decay exponent tracks 3*alpha - 1") {
    Grid g = cube(64);
    const double h = g.h(0);
    const std::vector<double> eps{16 * h, 12 * h, 8 * h, 6 * h, 4 * h};
    for (double alpha : {0.5, 0.6, 0.75}) {
        RoughSpec spec;
        spec.alpha = alpha;
        spec.kmin = 2;
        std::vector<double> js(eps.size(), 0.0);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            spec.seed = seed;
            const VelocityField u = gen_rough(g, spec);
            for (std::size_t i = 0; i < eps.size(); ++i)
                js[i] += std::abs(j_eps_bilinear(u, build_mollifier(eps[i], g)));
        }
        const SlopeFit fit = fit_loglog(eps, js);
        INFO("alpha = ", alpha, " fitted slope = ", fit.slope);
        CHECK(std::abs(fit.slope - (3.0 * alpha - 1.0)) <= 0.25);
    }
}

TEST_CASE("s_condition: smooth vanishing, rough dichotomy, input checks") {
    Grid g = cube(64);
    const auto band = inertial_band(g);
    // a 12x span keeps the decade precondition while staying resolvable
    std::vector<double> shifts;
    const double hi = band[1], lo = hi / 12.0;
    for (int i = 0; i < 8; ++i) shifts.push_back(hi * std::pow(lo / hi, i / 7.0));

    const VelocityField tg = gen_taylor_green(g);
    const CriterionReport smooth = s_condition({tg}, {1.0}, shifts);
    CHECK(smooth.verdict == "vanishing");
    CHECK(smooth.slope > 1.5);

    RoughSpec spec;
    spec.alpha = 0.2;
    spec.seed = 3;
    spec.kmin = 4;
    const VelocityField rough = gen_rough(g, spec);
    const CriterionReport r = s_condition({rough}, {1.0}, shifts);
    CHECK(r.verdict == "non-vanishing");

    CHECK_THROWS_AS((void)s_condition({tg}, {1.0}, {0.1, 0.2, 0.3}), ValidationError);
}

TEST_CASE("Besov-stable fields get a vanishing s_condition verdict") {
    Grid g = cube(64);
    RoughSpec spec;
    spec.alpha = 0.6;
    spec.seed = 2;
    spec.kmin = 1;
    const VelocityField u = gen_rough(g, spec);
    double rem = 0.0;
    // sub-critical delta within the theorem's admissible range (0, 3a-1]:
    // the measured S3 core slope must exceed 1+delta for a finite remainder
    const double val = besov_integral(u, 0.4, M_PI / 2.0, 0.0, &rem);
    REQUIRE(std::isfinite(rem));
    REQUIRE(rem <= val);
    const auto band = inertial_band(g);
    std::vector<double> shifts;
    const double hi = band[1], lo = hi / 12.0;
    for (int i = 0; i < 8; ++i) shifts.push_back(hi * std::pow(lo / hi, i / 7.0));
    const CriterionReport r = s_condition({u}, {1.0}, shifts);
    CHECK(r.verdict == "vanishing");
}

TEST_CASE("dissipation_estimate: steady series has tiny residual and flux") {
    const VelocityField u = gen_abc(cube(32), 1.0, 1.0, 1.0);
    SnapshotSeries s;
    s.dt = 0.1;
    s.times = {0.0, 0.1, 0.2};
    s.fields = {u, u, u};
    const Grid& g = u.grid;
    const double h = g.h(0);
    const FluxReport rep = dissipation_estimate(s, {10 * h, 8 * h, 6 * h}, false);
    REQUIRE(rep.energy_residual.has_value());
    CHECK(std::abs(*rep.energy_residual) <= 1e-8 * energy(u));
    for (double j : rep.j_bilinear) CHECK(std::abs(j) < 1e-10);
}
