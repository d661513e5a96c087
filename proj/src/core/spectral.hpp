#pragma once
// Transforms, spectral derivatives, Leray/Helmholtz projections, exact
// trigonometric shifts, norms and energies on the three domain families.

#include "types.hpp"

namespace fluxdiag {

// Default tolerance scale for "divergence-free" checks: max spectral
// divergence <= div_tol_factor * max |u_hat|.
inline constexpr double kDivTolFactor = 1e-10;

SpectralField forward(const VelocityField& f);
VelocityField inverse(const SpectralField& s);

SpectralField derivative(const SpectralField& s, int axis);  // axis in {1,2,3}
ScalarField divergence(const VelocityField& f);

// max_k |i k . u_hat(k)| and max_k |u_hat(k)|, for div_tol checks.
double max_spectral_divergence(const VelocityField& f);
double max_spectral_amplitude(const VelocityField& f);
bool is_divergence_free(const VelocityField& f, double tol_factor = kDivTolFactor);

VelocityField leray_project(const VelocityField& f);
// psi = phi + grad(chi), phi divergence-free. Spectral potential
// chi_hat = -i (k . psi_hat) / |k|^2 (k != 0).
void helmholtz(const VelocityField& psi, VelocityField& phi, ScalarField& chi);

VelocityField shift_sample(const VelocityField& f, const Vec3& y);

double energy(const VelocityField& f);            // (1/2) integral of |u|^2
double sobolev_norm(const VelocityField& f, double s);
double pairing(const VelocityField& a, const VelocityField& b);  // L2 pairing

// Scalar gradient, for tests and Helmholtz reconstruction.
VelocityField gradient(const ScalarField& chi);

}  // namespace fluxdiag
