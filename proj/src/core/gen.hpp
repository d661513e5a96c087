#pragma once
// Synthetic velocity-field generators spanning the regularity regimes the
// energy-conservation criteria distinguish.

#include "types.hpp"

namespace fluxdiag {

struct RoughSpec {
    double alpha = 0.5;          // Holder exponent in (0,1)
    std::uint64_t seed = 0;
    int kmin = 1, kmax = 0;      // integer spherical shell bounds; kmax<=0 -> N/3
    double amplitude = 1.0;

    void validate(const Grid& g) const;
};

VelocityField gen_taylor_green(const Grid& g);
VelocityField gen_abc(const Grid& g, double A, double B, double C);

// Random divergence-free field with (|k|-shell) spectrum |k|^-(alpha+3/2):
// mean-square Holder regularity alpha. Deterministic given seed; on
// HybridSlab the synthesis goes through a windowed vector potential so the
// field vanishes near the truncation seam.
VelocityField gen_rough(const Grid& g, const RoughSpec& spec);

// Half-space field on a HalfSlab grid via symmetrization
// u = (w + w_R)/2 restricted to x3 >= 0, with w = gen_rough on the
// matching HybridSlab (doubled x3 resolution). u3 vanishes on x3 = 0.
VelocityField gen_halfspace(const Grid& half_grid, const RoughSpec& spec);

// The matching HybridSlab grid of a HalfSlab grid (doubled x3 node count).
Grid hybrid_of_half(const Grid& half);
// And the converse.
Grid half_of_hybrid(const Grid& hybrid);

// Smooth C^inf window in the truncated direction: 1 for |z| <= 0.6*L3,
// 0 for |z| >= 0.85*L3 (distance measured from the boundary plane; the
// seam sits at |z| = L3).
double seam_window(double z, double L3);

// Fraction of the field's energy within L3/8 of the truncation seam.
double seam_mass_fraction(const VelocityField& f);

}  // namespace fluxdiag
