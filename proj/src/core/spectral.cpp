#include "spectral.hpp"

#include <algorithm>

#include "fft.hpp"

namespace fluxdiag {

namespace {

void require_transformable(const Grid& g, const char* what) {
    if (g.domain.kind == DomainKind::HalfSlab)
        throw ValidationError(std::string(what) +
                              ": HalfSlab fields must be extended first (see extend)");
}

// Iterate all r2c coefficient entries, calling fn(linear_index, k, herm_weight).
template <typename F>
void for_each_mode(const Grid& g, F&& fn) {
    const int n3h = g.N[2] / 2 + 1;
    std::size_t idx = 0;
    for (int i1 = 0; i1 < g.N[0]; ++i1) {
        const double k1 = wavenumber(g, 0, i1);
        for (int i2 = 0; i2 < g.N[1]; ++i2) {
            const double k2 = wavenumber(g, 1, i2);
            for (int i3 = 0; i3 < n3h; ++i3, ++idx) {
                const double k3 = wavenumber(g, 2, i3);
                fn(idx, Vec3{k1, k2, k3}, herm_weight(g, i3));
            }
        }
    }
}

}  // namespace

SpectralField forward(const VelocityField& f) {
    require_transformable(f.grid, "forward");
    f.check_finite();
    SpectralField s(f.grid);
    for (int c = 0; c < 3; ++c) fft_forward(f.grid, f.c[c].data(), s.c[c].data());
    return s;
}

VelocityField inverse(const SpectralField& s) {
    require_transformable(s.grid, "inverse");
    VelocityField f(s.grid);
    for (int c = 0; c < 3; ++c) fft_inverse(s.grid, s.c[c].data(), f.c[c].data());
    return f;
}

SpectralField derivative(const SpectralField& s, int axis) {
    if (axis < 1 || axis > 3) throw ValidationError("derivative: axis must be 1, 2 or 3");
    SpectralField d(s.grid);
    const int a = axis - 1;
    for_each_mode(s.grid, [&](std::size_t i, const Vec3& k, double) {
        const cplx ik(0.0, k[a]);
        for (int c = 0; c < 3; ++c) d.c[c][i] = ik * s.c[c][i];
    });
    return d;
}

ScalarField divergence(const VelocityField& f) {
    require_transformable(f.grid, "divergence");
    SpectralField s = forward(f);
    SpectralScalar div(f.grid);
    for_each_mode(f.grid, [&](std::size_t i, const Vec3& k, double) {
        div.a[i] = cplx(0.0, 1.0) * (k[0] * s.c[0][i] + k[1] * s.c[1][i] + k[2] * s.c[2][i]);
    });
    return fft_inverse(div);
}

double max_spectral_divergence(const VelocityField& f) {
    SpectralField s = forward(f);
    double m = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, const Vec3& k, double) {
        m = std::max(m, std::abs(k[0] * s.c[0][i] + k[1] * s.c[1][i] + k[2] * s.c[2][i]));
    });
    return m;
}

double max_spectral_amplitude(const VelocityField& f) {
    SpectralField s = forward(f);
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const cplx& z : s.c[c]) m = std::max(m, std::abs(z));
    return m;
}

bool is_divergence_free(const VelocityField& f, double tol_factor) {
    return max_spectral_divergence(f) <= tol_factor * std::max(max_spectral_amplitude(f), 1e-300);
}

VelocityField leray_project(const VelocityField& f) {
    require_transformable(f.grid, "leray_project");
    SpectralField s = forward(f);
    for_each_mode(f.grid, [&](std::size_t i, const Vec3& k, double) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) return;  // k=0: projector omits the k(x)k/|k|^2 term
        const cplx kd = (k[0] * s.c[0][i] + k[1] * s.c[1][i] + k[2] * s.c[2][i]) / k2;
        for (int c = 0; c < 3; ++c) s.c[c][i] -= k[c] * kd;
    });
    return inverse(s);
}

void helmholtz(const VelocityField& psi, VelocityField& phi, ScalarField& chi) {
    require_transformable(psi.grid, "helmholtz");
    SpectralField s = forward(psi);
    SpectralScalar ch(psi.grid);
    for_each_mode(psi.grid, [&](std::size_t i, const Vec3& k, double) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) return;
        const cplx kd = k[0] * s.c[0][i] + k[1] * s.c[1][i] + k[2] * s.c[2][i];
        ch.a[i] = cplx(0.0, -1.0) * kd / k2;           // chi_hat = -i (k.psi_hat)/|k|^2
        for (int c = 0; c < 3; ++c) s.c[c][i] -= k[c] * kd / k2;  // phi = P psi
    });
    phi = inverse(s);
    chi = fft_inverse(ch);
}

VelocityField gradient(const ScalarField& chi) {
    require_transformable(chi.grid, "gradient");
    SpectralScalar s = fft_forward(chi);
    SpectralField g(chi.grid);
    for_each_mode(chi.grid, [&](std::size_t i, const Vec3& k, double) {
        for (int c = 0; c < 3; ++c) g.c[c][i] = cplx(0.0, k[c]) * s.a[i];
    });
    return inverse(g);
}

VelocityField shift_sample(const VelocityField& f, const Vec3& y) {
    require_transformable(f.grid, "shift_sample");
    for (int a = 0; a < 3; ++a)
        if (!(std::abs(y[a]) <= f.grid.domain.box_len(a) / 2.0))
            throw ValidationError("shift_sample: |y| exceeds half a box length");
    SpectralField s = forward(f);
    for_each_mode(f.grid, [&](std::size_t i, const Vec3& k, double) {
        const double ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2];
        const cplx e(std::cos(ph), std::sin(ph));
        for (int c = 0; c < 3; ++c) s.c[c][i] *= e;
    });
    return inverse(s);
}

namespace {

// Physical-space quadrature weight for node (.,.,i3): trapezoid in x3 on
// HalfSlab (half weight on the boundary row), plain cell volume otherwise.
double node_weight(const Grid& g, int i3) {
    double w = g.cell_volume();
    if (g.domain.kind == DomainKind::HalfSlab && i3 == 0) w *= 0.5;
    return w;
}

}  // namespace

double pairing(const VelocityField& a, const VelocityField& b) {
    if (!a.grid.same_as(b.grid)) throw ValidationError("pairing: grid mismatch");
    const Grid& g = a.grid;
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::size_t i = 0;
        for (int i1 = 0; i1 < g.N[0]; ++i1)
            for (int i2 = 0; i2 < g.N[1]; ++i2)
                for (int i3 = 0; i3 < g.N[2]; ++i3, ++i)
                    acc += node_weight(g, i3) * a.c[c][i] * b.c[c][i];
    }
    return acc;
}

double energy(const VelocityField& f) { return 0.5 * pairing(f, f); }

double sobolev_norm(const VelocityField& f, double s) {
    if (s < 0.0) throw ValidationError("sobolev_norm: s must be >= 0");
    require_transformable(f.grid, "sobolev_norm");
    SpectralField sp = forward(f);
    const double vol = f.grid.cell_volume();
    double acc = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, const Vec3& k, double w) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const double wt = std::pow(1.0 + k2, s);
        for (int c = 0; c < 3; ++c) acc += w * wt * std::norm(sp.c[c][i]);
    });
    return std::sqrt(vol * acc);
}

std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::Periodic3: return "Periodic3";
        case DomainKind::HybridSlab: return "HybridSlab";
        case DomainKind::HalfSlab: return "HalfSlab";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "Periodic3") return DomainKind::Periodic3;
    if (s == "HybridSlab") return DomainKind::HybridSlab;
    if (s == "HalfSlab") return DomainKind::HalfSlab;
    throw ValidationError("unknown domain kind: " + s);
}

}  // namespace fluxdiag
