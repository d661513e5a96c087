#pragma once
// Gauss-Legendre rules and a product-Gauss sphere design.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace fluxdiag {

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

// Quadrature over the unit sphere: Gauss-Legendre in cos(theta) times a
// uniform azimuthal grid. Exact for spherical harmonics of degree
// < min(2*ntheta, nphi). Weights sum to 4*pi.
struct SphereRule {
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> weights;
};

inline SphereRule product_gauss_sphere(int ntheta, int nphi) {
    SphereRule r;
    std::vector<double> cx, cw;
    gauss_legendre(ntheta, cx, cw);
    for (int it = 0; it < ntheta; ++it) {
        const double c = cx[it], s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * M_PI * ip / nphi;
            r.dirs.push_back({s * std::cos(phi), s * std::sin(phi), c});
            r.weights.push_back(cw[it] * 2.0 * M_PI / nphi);
        }
    }
    return r;
}

}  // namespace fluxdiag
