#pragma once
// Minimal dealiased pseudo-spectral incompressible Euler integrator on T^3.

#include "flux.hpp"
#include "types.hpp"

namespace fluxdiag {

struct IntegrateOptions {
    double cfl = 0.5;
    int stride = 100;                  // snapshot every `stride` steps
    double top_shell_limit = 1e-10;    // resolution-loss abort threshold
};

// -P div(u (x) u), 2/3-rule dealiased (modes with any |k_i| > N_i/3 zeroed).
VelocityField euler_rhs(const VelocityField& u);

SnapshotSeries integrate(const VelocityField& u0, double t_end, double dt,
                         const IntegrateOptions& opts = {});

// Fraction of energy in the top third of the retained spectral band.
double top_shell_fraction(const VelocityField& u);

}  // namespace fluxdiag
