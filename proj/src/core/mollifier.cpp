#include "mollifier.hpp"

#include <sstream>

#include "fft.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace fluxdiag {

namespace {

double bump_profile(double r2) {  // exp(-1/(1-r^2)) for r^2 < 1
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

}  // namespace

double bump_c0() {
    static const double c0 = [] {
        std::vector<double> x, w;
        gauss_legendre(200, x, w);
        double I = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = 0.5 * (x[i] + 1.0);
            I += 0.5 * w[i] * bump_profile(r * r) * r * r;
        }
        return 1.0 / (4.0 * M_PI * I);
    }();
    return c0;
}

double bump_phihat(double kappa) {
    static std::vector<double> x, w;
    if (x.empty()) gauss_legendre(256, x, w);
    if (std::abs(kappa) < 1e-9) return 1.0;
    double I = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = 0.5 * (x[i] + 1.0);
        I += 0.5 * w[i] * bump_profile(r * r) * r * std::sin(kappa * r);
    }
    return 4.0 * M_PI * bump_c0() * I / kappa;
}

double Mollifier::analytic_mult(const Vec3& k) const {
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    auto it = analytic_cache.find(kk);
    if (it != analytic_cache.end()) return it->second;
    const double v = bump_phihat(std::sqrt(kk) * eps);
    analytic_cache.emplace(kk, v);
    return v;
}

Vec3 Mollifier::grad_phi_eps(const Vec3& x) const {
    const double r2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (eps * eps);
    if (r2 >= 1.0) return {0.0, 0.0, 0.0};
    const double s = 1.0 - r2;
    const double f = bump_c0() * std::exp(-1.0 / s) * (-2.0 / (s * s)) /
                     (eps * eps * eps * eps * eps);  // eps^-4 * profile' / eps
    return {f * x[0], f * x[1], f * x[2]};
}

double Mollifier::phi_eps(const Vec3& x) const {
    const double r2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (eps * eps);
    return bump_c0() * bump_profile(r2) / (eps * eps * eps);
}

Mollifier build_mollifier(double eps, const Grid& grid) {
    grid.validate();
    if (grid.domain.kind == DomainKind::HalfSlab)
        throw ValidationError("build_mollifier: extend HalfSlab fields before mollifying");
    const double hmax = std::max({grid.h(0), grid.h(1), grid.h(2)});
    const double lmin =
        std::min({grid.domain.box_len(0), grid.domain.box_len(1), grid.domain.box_len(2)});
    if (!(eps >= 3.0 * hmax && eps <= lmin / 3.0)) {
        std::ostringstream os;
        os << "build_mollifier: eps = " << eps << " outside admissible interval ["
           << 3.0 * hmax << ", " << lmin / 3.0 << "]";
        throw ValidationError(os.str());
    }
    Mollifier m;
    m.eps = eps;
    m.grid = grid;
    m.kernel.assign(grid.npoints(), 0.0);
    // Sample with minimum-image displacements computed as h * signed_index,
    // so node i and node N-i see bit-exact negations of each other and the
    // kernel is even to the last bit.
    auto mini = [&](int a, int i) {
        const int n = grid.N[a];
        return grid.h(a) * (i <= n / 2 ? i : i - n);
    };
    double mass = 0.0;
    std::size_t idx = 0;
    for (int i1 = 0; i1 < grid.N[0]; ++i1) {
        const double x1 = mini(0, i1);
        for (int i2 = 0; i2 < grid.N[1]; ++i2) {
            const double x2 = mini(1, i2);
            for (int i3 = 0; i3 < grid.N[2]; ++i3, ++idx) {
                const double x3 = mini(2, i3);
                m.kernel[idx] = m.phi_eps({x1, x2, x3});
                mass += m.kernel[idx];
            }
        }
    }
    mass *= grid.cell_volume();
    if (!(mass > 0.0)) throw NumericalError("build_mollifier: sampled kernel has no mass");
    for (double& v : m.kernel) v /= mass;  // discrete mass exactly 1

    // Spectral multiplier of the discrete circular convolution
    // (f_eps)(x) = vol * sum_y kernel(x-y) f(y).
    std::vector<cplx> khat(SpectralField::ncoeff(grid));
    fft_forward(grid, m.kernel.data(), khat.data());
    const double scale = grid.cell_volume() * std::sqrt(double(grid.npoints()));
    m.sampled_mult.resize(khat.size());
    for (std::size_t i = 0; i < khat.size(); ++i) m.sampled_mult[i] = scale * khat[i].real();
    return m;
}

SpectralField convolve_spectral(const SpectralField& s, const Mollifier& m,
                                MollifierMode mode) {
    if (!s.grid.same_as(m.grid)) throw ValidationError("convolve: grid mismatch");
    SpectralField out = s;
    const Grid& g = s.grid;
    const int n3h = g.N[2] / 2 + 1;
    std::size_t i = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1)
        for (int i2 = 0; i2 < g.N[1]; ++i2)
            for (int i3 = 0; i3 < n3h; ++i3, ++i) {
                double mult;
                if (mode == MollifierMode::Sampled) {
                    mult = m.sampled_mult[i];
                } else {
                    mult = m.analytic_mult({wavenumber(g, 0, i1), wavenumber(g, 1, i2),
                                            wavenumber(g, 2, i3)});
                }
                for (int c = 0; c < 3; ++c) out.c[c][i] *= mult;
            }
    return out;
}

VelocityField convolve(const VelocityField& f, const Mollifier& m, MollifierMode mode) {
    return inverse(convolve_spectral(forward(f), m, mode));
}

}  // namespace fluxdiag
