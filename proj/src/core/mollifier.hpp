#pragma once
// The even compactly supported bump mollifier phi_eps and its convolution.
//
// Two spectral multipliers coexist on purpose:
//  - sampled: DFT of the grid-sampled, mass-renormalized kernel. This is
//    the production `convolve` path; it agrees with the physical-space
//    convolution sum to round-off and keeps constant fields exact.
//  - analytic: the continuum radial Fourier transform of the bump,
//    evaluated per wavevector. For band-limited fields this represents the
//    exact continuum mollification; the flux identity tests require it
//    (the sampled kernel's Fourier tail is ~1e-4 at eps = 8h).

#include <map>

#include "types.hpp"

namespace fluxdiag {

// Normalization constant of the unit bump c0 * exp(-1/(1-r^2)) on B(0,1).
double bump_c0();
// Radial Fourier transform of the unit bump at radial frequency kappa.
double bump_phihat(double kappa);

struct Mollifier {
    double eps = 0.0;
    Grid grid;
    std::vector<double> kernel;             // sampled, renormalized (discrete mass 1)
    std::vector<double> sampled_mult;       // per r2c mode, real
    mutable std::map<double, double> analytic_cache;  // kappa^2 -> phihat

    // Analytic multiplier for wavevector k (memoized on |k eps|^2).
    double analytic_mult(const Vec3& k) const;
    // Analytic gradient of phi_eps at physical offset x (|x| < eps, else 0).
    Vec3 grad_phi_eps(const Vec3& x) const;
    double phi_eps(const Vec3& x) const;
};

Mollifier build_mollifier(double eps, const Grid& grid);

enum class MollifierMode { Sampled, Analytic };

VelocityField convolve(const VelocityField& f, const Mollifier& m,
                       MollifierMode mode = MollifierMode::Sampled);
SpectralField convolve_spectral(const SpectralField& s, const Mollifier& m,
                                MollifierMode mode);

}  // namespace fluxdiag
