// Acceptance suite: one [PASS]/[FAIL] line per criterion, with the measured
// quantities. Exit status = number of failed criteria.

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "core/euler.hpp"
#include "core/fit.hpp"
#include "core/flux.hpp"
#include "core/gen.hpp"
#include "core/mollifier.hpp"
#include "core/ofx.hpp"
#include "core/pipeline.hpp"
#include "core/reflect.hpp"
#include "core/spectral.hpp"

using namespace fluxdiag;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

Grid cube(int n, DomainKind kind = DomainKind::Periodic3) {
    Grid g;
    g.domain.kind = kind;
    g.N = {n, n, n};
    g.validate();
    return g;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// --- 1. J_eps identity -----------------------------------------------------
void criterion1() {
    Grid g = cube(48);
    const double h = g.h(0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RoughSpec spec;
        spec.alpha = 0.5;
        spec.seed = seed;
        spec.kmin = 1;
        spec.kmax = 4;  // low band keeps the quadrature route within budget
        const VelocityField u = gen_rough(g, spec);
        FluxWorkspace ws(u);
        const double floor = 1e-14 * std::pow(energy(u), 1.5);
        for (double fac : {8.0, 12.0, 16.0}) {
            const Mollifier m = build_mollifier(fac * h, g);
            const double jd = ws.j_direct(m);
            const double jb = ws.j_bilinear(m);
            worst = std::max(worst, std::abs(jd - jb) / (std::abs(jd) + floor));
        }
    }
    report(1, worst <= 1e-6,
           fmt("J_eps identity, 20 fields x 3 eps at N=48: max relative "
               "discrepancy %.3e (tol 1e-6)",
               worst));
}

// --- 2. Smooth energy conservation ----------------------------------------
void criterion2() {
    const VelocityField tg = gen_taylor_green(cube(64));
    const SnapshotSeries s = integrate(tg, 1.0, 1e-3);
    const double drift =
        std::abs(s.energies.back() - s.energies.front()) / s.energies.front();

    const VelocityField abc = gen_abc(cube(32), 1.0, 1.0, 1.0);
    const SnapshotSeries sa = integrate(abc, 0.25, 1e-3);
    double adev = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < abc.c[c].size(); ++i)
            adev = std::max(adev,
                            std::abs(sa.fields.back().c[c][i] - abc.c[c][i]));
    const bool ok = drift <= 1e-6 && adev <= 1e-9;
    report(2, ok,
           fmt("Taylor-Green N=64 T=1 relative energy drift %.3e (tol 1e-6); "
               "ABC steady deviation %.3e (tol 1e-9)",
               drift, adev));
}

// --- 3. Theorem 3.2 decay arithmetic ---------------------------------------
double flux_decay_exponent(double alpha, int kmin, int nseeds) {
    Grid g = cube(64);
    const double h = g.h(0);
    const std::vector<double> eps{16 * h, 12 * h, 8 * h, 6 * h, 4 * h};
    std::vector<double> js(eps.size(), 0.0);
    for (std::uint64_t seed = 1; seed <= std::uint64_t(nseeds); ++seed) {
        RoughSpec spec;
        spec.alpha = alpha;
        spec.seed = seed;
        spec.kmin = kmin;
        const VelocityField u = gen_rough(g, spec);
        FluxWorkspace ws(u);
        for (std::size_t i = 0; i < eps.size(); ++i)
            js[i] += std::abs(ws.j_bilinear(build_mollifier(eps[i], g)));
    }
    return fit_loglog(eps, js).slope;
}

void criterion3() {
    const double s06 = flux_decay_exponent(0.6, 2, 8);
    const double s02 = flux_decay_exponent(0.2, 4, 8);
    const bool ok = s06 >= 0.55 && s06 <= 1.05 && s02 <= 0.1;
    report(3, ok,
           fmt("|J_eps| decay exponents (8 seeds, N=64): alpha=0.6 -> %.3f "
               "(need [0.55,1.05]); alpha=0.2 -> %.3f (need <= 0.1)",
               s06, s02));
}

// --- 4. S-condition slope dichotomy ----------------------------------------
void criterion4() {
    Grid g = cube(64);
    const auto band = inertial_band(g);
    std::vector<double> shifts;
    const double hi = band[1], lo = hi / 12.0;
    for (int i = 0; i < 8; ++i) shifts.push_back(hi * std::pow(lo / hi, i / 7.0));

    struct Cfg { double alpha; int kmin; };
    const Cfg cfgs[4] = {{0.45, 2}, {0.6, 1}, {0.9, 1}, {0.2, 4}};
    bool ok = true;
    std::string detail = "S-condition (4-seed ensembles, N=64):";
    for (const Cfg& c : cfgs) {
        std::vector<VelocityField> ens;
        std::vector<double> w;
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            RoughSpec spec;
            spec.alpha = c.alpha;
            spec.seed = seed;
            spec.kmin = c.kmin;
            ens.push_back(gen_rough(g, spec));
            w.push_back(1.0);
        }
        const CriterionReport rep = s_condition(ens, w, shifts);
        const std::string want = c.alpha > 1.0 / 3.0 ? "vanishing" : "non-vanishing";
        const double target = 3.0 * c.alpha - 1.0;
        const bool verdict_ok = rep.verdict == want;
        const bool slope_ok = std::abs(rep.slope - target) <= 0.25;
        ok = ok && verdict_ok && slope_ok;
        detail += fmt("  [alpha=%.2f verdict=%s(%s) slope=%.3f target=%.2f%s]",
                      c.alpha, rep.verdict.c_str(), verdict_ok ? "ok" : "WRONG",
                      rep.slope, target, slope_ok ? "" : " OFF");
    }
    report(4, ok, detail);
}

// --- 5. Reflection machinery ------------------------------------------------
void criterion5() {
    bool involution_ok = true, identity_ok = true;
    double energy_dev = 0.0, div_dev = 0.0, max_resid = 0.0;
    for (int t = 0; t < 20; ++t) {
        RoughSpec su, sp;
        su.alpha = 0.45 + 0.02 * t;
        su.seed = 1000 + t;
        su.kmin = 2;
        sp.alpha = 0.7;
        sp.seed = 2000 + t;
        sp.kmin = 2;
        Grid half = cube(32, DomainKind::HalfSlab);
        const VelocityField u = gen_halfspace(half, su);
        const VelocityField psi = gen_halfspace(half, sp);
        const VelocityField rr = reflect(reflect(u));
        for (int c = 0; c < 3; ++c)
            involution_ok =
                involution_ok && std::memcmp(u.c[c].data(), rr.c[c].data(),
                                             u.c[c].size() * sizeof(double)) == 0;
        const VelocityField e = extend(u);
        energy_dev = std::max(energy_dev, std::abs(energy(e) / energy(u) - 2.0));
        div_dev = std::max(div_dev, max_spectral_divergence(e) /
                                        (1.0 + max_spectral_amplitude(e)));
        const double resid = nonlinear_identity_check(u, psi);
        max_resid = std::max(max_resid, resid);
        identity_ok = identity_ok && resid <= 1e-10;
    }
    const bool ok = involution_ok && energy_dev <= 1e-10 && identity_ok &&
                    div_dev <= 1e-10;
    report(5, ok,
           fmt("reflection: involution %s; max |‖u_E‖²/‖u‖² - 2| = %.2e (tol "
               "1e-10); max identity residual %.2e (tol 1e-10); max extended "
               "divergence %.2e (tol 1e-10)",
               involution_ok ? "bit-exact" : "BROKEN", energy_dev, max_resid,
               div_dev));
}

// --- 6. Half-space criterion ------------------------------------------------
void criterion6() {
    RoughSpec spec;
    spec.alpha = 0.9;
    spec.seed = 41;
    spec.kmin = 1;
    spec.kmax = 4;
    Grid half = cube(32, DomainKind::HalfSlab);
    const VelocityField u = gen_halfspace(half, spec);
    const double L3 = half.domain.L[2];
    // sample below L3/16: the generator's seam envelope saturates S3 and
    // the modulus at scales approaching L3/8
    std::vector<double> shifts;
    for (int i = 0; i < 6; ++i)
        shifts.push_back(L3 / 16.0 * std::pow(0.15, i / 5.0));
    const CriterionReport rep = halfspace_criterion({u}, {1.0}, shifts);
    const bool smooth_ok =
        rep.verdict == "conserving" && rep.strip_slope >= 2.5 && !rep.trace_warning;

    // trace-violating field must make the CLI exit with code 3
    const fs::path dir = fs::temp_directory_path() / "fluxdiag_acc6";
    fs::remove_all(dir);
    fs::create_directories(dir);
    VelocityField bad(half);
    std::size_t i = 0;
    for (int i1 = 0; i1 < 32; ++i1)
        for (int i2 = 0; i2 < 32; ++i2)
            for (int i3 = 0; i3 < 32; ++i3, ++i)
                bad.c[2][i] = 1.0 + std::cos(half.coord(0, i1));
    write_ofx((dir / "bad.ofx").string(), bad);
    const std::string cmd = std::string(FLUXDIAG_CLI_PATH) +
                            " criterion --mode half --in " +
                            (dir / "bad.ofx").string() + " --report " +
                            (dir / "rep.json").string() + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    const int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    const bool ok = smooth_ok && exit_code == 3;
    report(6, ok,
           fmt("half-space: smooth verdict=%s strip_slope=%.2f (need "
               "conserving, >= 2.5); trace-violating CLI exit code %d (need 3)",
               rep.verdict.c_str(), rep.strip_slope, exit_code));
}

// --- 7. Infrastructure -------------------------------------------------------
void criterion7() {
    const fs::path dir = fs::temp_directory_path() / "fluxdiag_acc7";
    fs::remove_all(dir);
    fs::create_directories(dir);
    // OFX round trip
    RoughSpec spec;
    spec.alpha = 0.5;
    spec.seed = 77;
    spec.kmin = 1;
    const VelocityField u = gen_rough(cube(32), spec);
    write_ofx((dir / "u.ofx").string(), u);
    const VelocityField v = read_ofx((dir / "u.ofx").string());
    bool roundtrip = v.grid.same_as(u.grid);
    for (int c = 0; c < 3; ++c)
        roundtrip = roundtrip && std::memcmp(u.c[c].data(), v.c[c].data(),
                                             u.c[c].size() * sizeof(double)) == 0;
    // manifest determinism
    const std::string cfg = R"({"seed": 3, "pipeline": [
      {"stage":"gen","kind":"rough","alpha":0.6,"N":24,"kmin":2,"out":"f.ofx"},
      {"stage":"flux","in":"f.ofx","eps_list":[1.3,1.0],"direct":false,
       "report":"flux.json"}]})";
    const RunManifest m1 = run_pipeline(cfg, (dir / "r1").string());
    const RunManifest m2 = run_pipeline(cfg, (dir / "r2").string());
    bool digests_ok = m1.digests.size() == m2.digests.size() && !m1.digests.empty();
    for (std::size_t k = 0; digests_ok && k < m1.digests.size(); ++k)
        digests_ok = m1.digests[k] == m2.digests[k];
    // projection property suite
    const VelocityField w = gen_rough(cube(32), spec);
    VelocityField mixed = w;
    std::size_t i = 0;
    Grid g = cube(32);
    for (int i1 = 0; i1 < 32; ++i1)
        for (int i2 = 0; i2 < 32; ++i2)
            for (int i3 = 0; i3 < 32; ++i3, ++i)
                mixed.c[0][i] += std::sin(g.coord(0, i1)) * std::cos(g.coord(1, i2));
    const VelocityField p = leray_project(mixed);
    double proj_dev = 0.0;
    {
        const VelocityField pp = leray_project(p);
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < p.c[c].size(); ++k)
                proj_dev = std::max(proj_dev, std::abs(pp.c[c][k] - p.c[c][k]));
        ScalarField chi(mixed.grid);
        VelocityField phi;
        helmholtz(mixed, phi, chi);
        const VelocityField gc = gradient(chi);
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < p.c[c].size(); ++k)
                proj_dev = std::max(proj_dev, std::abs(phi.c[c][k] + gc.c[c][k] -
                                                       mixed.c[c][k]));
        const VelocityField pg = leray_project(gc);
        double m = 0.0;
        for (int c = 0; c < 3; ++c)
            for (double x : pg.c[c]) m = std::max(m, std::abs(x));
        proj_dev = std::max(proj_dev, m);
    }
    const bool ok = roundtrip && digests_ok && proj_dev <= 1e-10;
    report(7, ok,
           fmt("infrastructure: OFX round trip %s; manifest digests %s; "
               "projection suite max deviation %.2e (tol 1e-10)",
               roundtrip ? "bit-exact" : "BROKEN",
               digests_ok ? "reproducible" : "DIVERGENT", proj_dev));
}

}  // namespace

int main() {
    criterion7();
    criterion5();
    criterion2();
    criterion1();
    criterion6();
    criterion3();
    criterion4();
    std::printf("%d of 7 criteria failed\n", g_failures);
    return g_failures;
}
