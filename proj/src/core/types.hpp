#pragma once
// Core domain/grid/field types shared by every module.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluxdiag {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

// Error hierarchy. The numeric codes double as process exit codes.
struct Error : std::runtime_error {
    int code;
    Error(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(2, msg) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(3, msg) {}
};
struct IOError : Error {
    explicit IOError(const std::string& msg) : Error(4, msg) {}
};

enum class DomainKind { Periodic3, HybridSlab, HalfSlab };

std::string to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

// Domain: box lengths. For HybridSlab, L3 is the half-length of the
// truncated direction (x3 spans [-L3, L3)). For HalfSlab, x3 spans [0, L3).
struct Domain {
    DomainKind kind = DomainKind::Periodic3;
    std::array<double, 3> L{2 * M_PI, 2 * M_PI, 2 * M_PI};

    // Full extent of the stored box along axis a.
    double box_len(int a) const {
        if (a == 2 && kind == DomainKind::HybridSlab) return 2.0 * L[2];
        return L[a];
    }
    void validate() const {
        for (double l : L)
            if (!(l > 0.0) || !std::isfinite(l))
                throw ValidationError("domain lengths must be positive and finite");
    }
};

// Grid: resolution per axis; N[a] nodes cover [0, box_len(a)).
// HybridSlab x3 nodes are stored FFT-style over [0, 2*L3) and interpreted
// periodically, so x3 in [L3, 2*L3) aliases to [-L3, 0).
struct Grid {
    Domain domain;
    std::array<int, 3> N{0, 0, 0};

    double h(int a) const { return domain.box_len(a) / N[a]; }
    std::size_t npoints() const {
        return std::size_t(N[0]) * std::size_t(N[1]) * std::size_t(N[2]);
    }
    double cell_volume() const { return h(0) * h(1) * h(2); }
    // Physical coordinate of node index along axis a.
    double coord(int a, int i) const { return h(a) * i; }
    std::size_t idx(int i1, int i2, int i3) const {
        return (std::size_t(i1) * N[1] + i2) * N[2] + i3;
    }
    bool same_as(const Grid& o) const {
        return domain.kind == o.domain.kind && domain.L == o.domain.L && N == o.N;
    }
    void validate() const {
        domain.validate();
        for (int a = 0; a < 3; ++a) {
            if (N[a] <= 0 || N[a] % 2 != 0)
                throw ValidationError("grid resolution must be even and positive");
        }
        if (npoints() > (std::size_t(1) << 31))
            throw ValidationError("grid too large");
    }
};

struct ScalarField {
    Grid grid;
    std::vector<double> a;
    explicit ScalarField(const Grid& g) : grid(g), a(g.npoints(), 0.0) {}
    ScalarField() = default;
};

struct VelocityField {
    Grid grid;
    std::array<std::vector<double>, 3> c;
    explicit VelocityField(const Grid& g) : grid(g) {
        for (auto& v : c) v.assign(g.npoints(), 0.0);
    }
    VelocityField() = default;
    void check_finite() const {
        for (const auto& comp : c)
            for (double x : comp)
                if (!std::isfinite(x)) throw NumericalError("non-finite field sample");
    }
};

// Spectral coefficients in r2c (Hermitian-half) layout: index
// (i1, i2, i3) with i3 in [0, N3/2], wavenumber integers
// m1 = i1 <= N1/2 ? i1 : i1-N1 (same for m2), m3 = i3.
// Physical wavevector k_a = 2*pi*m_a / box_len(a).
struct SpectralField {
    Grid grid;
    std::array<std::vector<cplx>, 3> c;
    explicit SpectralField(const Grid& g) : grid(g) {
        for (auto& v : c) v.assign(ncoeff(g), cplx(0.0));
    }
    SpectralField() = default;
    static std::size_t ncoeff(const Grid& g) {
        return std::size_t(g.N[0]) * g.N[1] * (g.N[2] / 2 + 1);
    }
    std::size_t sidx(int i1, int i2, int i3) const {
        return (std::size_t(i1) * grid.N[1] + i2) * (grid.N[2] / 2 + 1) + i3;
    }
};

struct SpectralScalar {
    Grid grid;
    std::vector<cplx> a;
    explicit SpectralScalar(const Grid& g) : grid(g), a(SpectralField::ncoeff(g), cplx(0.0)) {}
    SpectralScalar() = default;
};

// Signed integer wavenumber along axis a for storage index i.
inline int wavenumber_int(const Grid& g, int a, int i) {
    return i <= g.N[a] / 2 ? i : i - g.N[a];
}
// Physical wavenumber.
inline double wavenumber(const Grid& g, int a, int i) {
    return 2.0 * M_PI * wavenumber_int(g, a, i) / g.domain.box_len(a);
}
// Hermitian multiplicity of an r2c entry with x3-index i3.
inline double herm_weight(const Grid& g, int i3) {
    return (i3 == 0 || i3 == g.N[2] / 2) ? 1.0 : 2.0;
}

}  // namespace fluxdiag
